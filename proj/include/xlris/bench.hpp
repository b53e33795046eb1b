#ifndef XLRIS_BENCH_HPP
#define XLRIS_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "xlris/channel.hpp"
#include "xlris/config.hpp"
#include "xlris/dictionary.hpp"
#include "xlris/measurement.hpp"
#include "xlris/solvers.hpp"

namespace xlris {

/// Estimator identifiers accepted by the harness and the CLI.
inline const std::vector<std::string> kAllMethods = {
    "oracle", "p-omp", "p-somp", "bomp", "pcsbl", "2d-pcsbl"};

struct ExperimentPlan {
  SystemConfig config;
  enum class Axis { kPilotLength, kSnr } axis = Axis::kPilotLength;
  std::vector<double> sweep_values; // strictly increasing
  double fixed_snr_db = 10.0;       // used on the T axis
  int fixed_pilot_length = 64;      // used on the SNR axis
  std::vector<std::string> methods = kAllMethods;
  int trials = 50;
  NearFieldMode channel_mode = NearFieldMode::kExact;
  SolverConfig solver;
  int polar_rings = 4;
  double polar_gamma = 1.0;

  void validate() const;
};

struct ResultRow {
  std::string method;
  double sweep_value = 0.0;
  double mean_linear_nmse = 0.0;
  double nmse_db = 0.0;
  int trials = 0;
  double std_error = 0.0; // of the linear ratio
  double wall_time_s = 0.0;
  int failures = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

/// Runs one estimator on one trial's data; returns the reconstructed channel.
CMatrix run_method(const std::string& method, const SystemConfig& cfg,
                   const FrequencyGrid& grid, const UnifiedDictionary& dict,
                   const CMatrix& h_stacked, const ObservationSet& obs,
                   const ExperimentPlan& plan);

/// Monte-Carlo sweep: per trial every method consumes the identical
/// (H, C, Y); the linear NMSE ratio is averaged over trials before the dB
/// conversion. Trials run in parallel with order-independent aggregation.
ResultTable run_sweep(const ExperimentPlan& plan);

/// Per-(block, subcarrier) coefficient energy of X~ for sampled channels.
struct EnergyProfile {
  // row = block index, col = subcarrier; one matrix per trial
  std::vector<RMatrix> block_energy;
  int block_size = 1;
};

EnergyProfile energy_profile(const SystemConfig& cfg, int trials,
                             NearFieldMode mode);

/// Smallest number of blocks capturing `fraction` of the column's energy.
int blocks_for_energy_fraction(const RVector& block_energies, double fraction);

// ---- Result persistence ---------------------------------------------------

/// Writes results.csv, per-method series CSVs, timings.csv and metadata.json
/// under out_dir. Everything except timings.csv is a pure function of the
/// plan and the aggregated errors, so repeated runs with the same plan and
/// seed produce byte-identical result files.
void emit_results(const ResultTable& table, const ExperimentPlan& plan,
                  const std::string& out_dir);

void emit_energy_csv(const EnergyProfile& profile, const std::string& path);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const std::string& text);

/// Observation dump for replay: C, Y, H, noise_var, snr, pilot schedule.
void dump_observations(const std::string& path, const ObservationSet& obs,
                       const CMatrix& h_stacked);

struct ReplayResult {
  std::string method;
  double nmse_db = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
};

/// Reruns a dumped ObservationSet through one solver.
ReplayResult replay(const std::string& path, const std::string& method,
                    const ExperimentPlan& plan);

}  // namespace xlris

#endif
