#include "xlris/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "xlris/io.hpp"

namespace xlris {

namespace {

double now_seconds() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return double(std::clock()) / CLOCKS_PER_SEC;
#endif
}

// Unit-normalizes columns for greedy atom selection; returns the norms so
// recovered coefficients can be mapped back to the unnormalized dictionary.
CMatrix normalize_columns(const CMatrix& a, RVector& norms) {
  norms = a.colwise().norm();
  CMatrix out = a;
  for (int j = 0; j < out.cols(); ++j)
    if (norms(j) > 0.0) out.col(j) /= norms(j);
  return out;
}

CVector rescale(const CVector& x, const RVector& norms) {
  CVector out = x;
  for (int i = 0; i < out.size(); ++i)
    if (norms(i) > 0.0) out(i) /= norms(i);
  return out;
}

}  // namespace

void ExperimentPlan::validate() const {
  config.validate();
  solver.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (sweep_values.empty()) throw std::invalid_argument("empty sweep");
  for (std::size_t i = 1; i < sweep_values.size(); ++i)
    if (sweep_values[i] <= sweep_values[i - 1])
      throw std::invalid_argument("sweep values must be strictly increasing");
  if (methods.empty()) throw std::invalid_argument("empty method list");
  for (const auto& m : methods)
    if (std::find(kAllMethods.begin(), kAllMethods.end(), m) ==
        kAllMethods.end())
      throw std::invalid_argument("unknown method: " + m);
  if (polar_rings < 1) throw std::invalid_argument("polar_rings must be >= 1");
}

CMatrix run_method(const std::string& method, const SystemConfig& cfg,
                   const FrequencyGrid& grid, const UnifiedDictionary& dict,
                   const CMatrix& h_stacked, const ObservationSet& obs,
                   const ExperimentPlan& plan) {
  const int p_count = grid.size();
  const int dim = cfg.n_ris() * cfg.n_t;
  SolverConfig scfg = plan.solver;
  // k_max counts blocks; atom-wise greedy gets the same budget in atoms.
  SolverConfig atom_cfg = scfg;
  atom_cfg.k_max = scfg.k_max * scfg.block_size;

  if (method == "oracle") {
    const auto coeffs = analyze_coefficients(h_stacked, dict, scfg.block_size);
    return synthesize_channel(coeffs.x_tilde, dict);
  }
  if (method == "p-omp") {
    CMatrix h_hat(dim, p_count);
    for (int p = 0; p < p_count; ++p) {
      const auto polar = polar_dictionary(cfg, grid.frequencies[p],
                                          plan.polar_rings, plan.polar_gamma);
      const CMatrix w = cascaded_polar_dictionary(cfg, polar);
      RVector norms;
      const CMatrix a = normalize_columns(obs.c_matrix.transpose() * w, norms);
      const auto res = omp_solve(obs.y.col(p), a, atom_cfg);
      h_hat.col(p) = w * rescale(res.x_hat, norms);
    }
    return h_hat;
  }
  if (method == "p-somp") {
    const auto polar =
        polar_dictionary(cfg, cfg.f_c, plan.polar_rings, plan.polar_gamma);
    const CMatrix w = cascaded_polar_dictionary(cfg, polar);
    RVector norms;
    const CMatrix a = normalize_columns(obs.c_matrix.transpose() * w, norms);
    const auto res = somp_solve(obs.y, a, atom_cfg);
    CMatrix z = res.x_hat;
    for (int i = 0; i < z.rows(); ++i)
      if (norms(i) > 0.0) z.row(i) /= norms(i);
    return w * z;
  }
  if (method == "bomp") {
    RVector norms;
    const CMatrix a = normalize_columns(obs.omega, norms);
    CMatrix x_hat(dim, p_count);
    for (int p = 0; p < p_count; ++p) {
      const auto res = bomp_solve(obs.y.col(p), a, scfg);
      x_hat.col(p) = rescale(res.x_hat, norms);
    }
    return synthesize_channel(x_hat, dict);
  }
  if (method == "pcsbl") {
    CMatrix x_hat(dim, p_count);
    for (int p = 0; p < p_count; ++p) {
      const auto res = pcsbl_1d(obs.y.col(p), obs.omega, scfg, obs.noise_var);
      x_hat.col(p) = res.x_hat;
    }
    return synthesize_channel(x_hat, dict);
  }
  if (method == "2d-pcsbl") {
    const auto res = pcsbl_2d(obs.y, obs.omega, scfg, obs.noise_var);
    return synthesize_channel(res.x_hat, dict);
  }
  throw std::invalid_argument("unknown method: " + method);
}

ResultTable run_sweep(const ExperimentPlan& plan) {
  plan.validate();
  const auto& cfg = plan.config;
  const auto grid = subcarrier_grid(cfg);
  const auto dict = unified_dictionary(cfg);
  const int n_methods = int(plan.methods.size());
  const int n_points = int(plan.sweep_values.size());

  ResultTable table;
  table.rows.resize(std::size_t(n_methods) * n_points);

  for (int pi = 0; pi < n_points; ++pi) {
    const int pilot_len = plan.axis == ExperimentPlan::Axis::kPilotLength
                              ? int(plan.sweep_values[pi])
                              : plan.fixed_pilot_length;
    const double snr = plan.axis == ExperimentPlan::Axis::kSnr
                           ? plan.sweep_values[pi]
                           : plan.fixed_snr_db;

    // Per-trial linear ratios in trial order so aggregation is independent
    // of the execution schedule.
    RMatrix ratios =
        RMatrix::Constant(plan.trials, n_methods, std::nan(""));
    RMatrix times = RMatrix::Zero(plan.trials, n_methods);

#pragma omp parallel for schedule(dynamic)
    for (int trial = 0; trial < plan.trials; ++trial) {
      const std::uint64_t point_tag =
          std::uint64_t(pi) * 1000003ULL + std::uint64_t(trial);
      std::mt19937_64 rng_paths(child_seed(cfg.seed, "paths", trial));
      const auto paths = sample_paths(cfg, rng_paths);
      const auto channel =
          build_channel(cfg, grid, paths, plan.channel_mode);
      std::mt19937_64 rng_pilots(child_seed(cfg.seed, "pilots", point_tag));
      const auto pilots = gen_pilots(cfg, pilot_len, rng_pilots);
      std::mt19937_64 rng_noise(child_seed(cfg.seed, "noise", point_tag));
      const auto obs = synthesize_observations(channel.h_stacked, pilots, dict,
                                               snr, rng_noise);
      for (int mi = 0; mi < n_methods; ++mi) {
        const double t0 = now_seconds();
        try {
          const CMatrix h_hat = run_method(plan.methods[mi], cfg, grid, dict,
                                           channel.h_stacked, obs, plan);
          ratios(trial, mi) = (h_hat - channel.h_stacked).squaredNorm() /
                              channel.h_stacked.squaredNorm();
        } catch (const std::exception&) {
          // recorded as a failure; the sweep continues
        }
        times(trial, mi) = now_seconds() - t0;
      }
    }

    for (int mi = 0; mi < n_methods; ++mi) {
      ResultRow row;
      row.method = plan.methods[mi];
      row.sweep_value = plan.sweep_values[pi];
      double sum = 0.0, sum_sq = 0.0;
      int ok = 0;
      for (int trial = 0; trial < plan.trials; ++trial) {
        const double r = ratios(trial, mi);
        if (std::isnan(r)) continue;
        sum += r;
        sum_sq += r * r;
        ++ok;
      }
      row.trials = ok;
      row.failures = plan.trials - ok;
      if (ok > 0) {
        row.mean_linear_nmse = sum / ok;
        row.nmse_db = row.mean_linear_nmse > 0.0
                          ? std::max(10.0 * std::log10(row.mean_linear_nmse),
                                     kNmseFloorDb)
                          : kNmseFloorDb;
        if (ok > 1) {
          const double var =
              std::max(0.0, (sum_sq - sum * sum / ok) / (ok - 1));
          row.std_error = std::sqrt(var / ok);
        }
      }
      row.wall_time_s = times.col(mi).sum();
      table.rows[std::size_t(pi) * n_methods + mi] = row;
    }
  }
  return table;
}

EnergyProfile energy_profile(const SystemConfig& cfg, int trials,
                             NearFieldMode mode) {
  const auto grid = subcarrier_grid(cfg);
  const auto dict = unified_dictionary(cfg);
  const int nb = default_block_size(cfg);
  const int dim = cfg.n_ris() * cfg.n_t;
  const int n_blocks = (dim + nb - 1) / nb;

  EnergyProfile profile;
  profile.block_size = nb;
  profile.block_energy.resize(trials);
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(child_seed(cfg.seed, "energy", trial));
    const auto paths = sample_paths(cfg, rng);
    const auto channel = build_channel(cfg, grid, paths, mode);
    const auto coeffs = analyze_coefficients(channel.h_stacked, dict, nb);
    RMatrix energy(n_blocks, grid.size());
    for (int p = 0; p < grid.size(); ++p)
      for (int b = 0; b < n_blocks; ++b) {
        const int start = b * nb;
        const int len = std::min(nb, dim - start);
        energy(b, p) = coeffs.x_tilde.col(p).segment(start, len).squaredNorm();
      }
    profile.block_energy[trial] = std::move(energy);
  }
  return profile;
}

int blocks_for_energy_fraction(const RVector& block_energies, double fraction) {
  const double total = block_energies.sum();
  if (total <= 0.0) return 0;
  std::vector<double> sorted(block_energies.data(),
                             block_energies.data() + block_energies.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double acc = 0.0;
  int count = 0;
  for (double e : sorted) {
    acc += e;
    ++count;
    if (acc >= fraction * total) break;
  }
  return count;
}

// ---- persistence ----------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void emit_results(const ResultTable& table, const ExperimentPlan& plan,
                  const std::string& out_dir) {
  if (table.rows.empty()) throw std::invalid_argument("empty result table");
  std::filesystem::create_directories(out_dir);
  const auto csv_path = out_dir + "/results.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "method,sweep_value,mean_linear_nmse,nmse_db,trials,std_error,"
           "failures\n";
    for (const auto& row : table.rows)
      csv << row.method << ',' << fmt(row.sweep_value) << ','
          << fmt(row.mean_linear_nmse) << ',' << fmt(row.nmse_db) << ','
          << row.trials << ',' << fmt(row.std_error) << ',' << row.failures
          << '\n';
  }
  // Wall-clock timings vary run to run, so they live outside the
  // deterministic result files.
  {
    std::ofstream timings(out_dir + "/timings.csv", std::ios::binary);
    timings << "method,sweep_value,wall_time_s\n";
    for (const auto& row : table.rows)
      timings << row.method << ',' << fmt(row.sweep_value) << ','
              << fmt(row.wall_time_s) << '\n';
  }
  std::ofstream meta(out_dir + "/metadata.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write metadata.json");
  meta << plan_to_json(plan) << '\n';

  // Plot-ready two-column series per method.
  for (const auto& method : plan.methods) {
    std::ofstream series(out_dir + "/series_" + method + ".csv",
                         std::ios::binary);
    series << "sweep_value,nmse_db\n";
    for (const auto& row : table.rows)
      if (row.method == method)
        series << fmt(row.sweep_value) << ',' << fmt(row.nmse_db) << '\n';
  }
}

void emit_energy_csv(const EnergyProfile& profile, const std::string& path) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + path);
  csv << "trial,subcarrier,block,energy\n";
  for (std::size_t trial = 0; trial < profile.block_energy.size(); ++trial) {
    const auto& energy = profile.block_energy[trial];
    for (int p = 0; p < energy.cols(); ++p)
      for (int b = 0; b < energy.rows(); ++b)
        csv << trial << ',' << p << ',' << b << ',' << fmt(energy(b, p))
            << '\n';
  }
}

std::string plan_to_json(const ExperimentPlan& plan) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_to_json_string(plan.config));
  j["axis"] = plan.axis == ExperimentPlan::Axis::kPilotLength ? "T" : "SNR";
  j["sweep_values"] = plan.sweep_values;
  j["fixed_snr_db"] = plan.fixed_snr_db;
  j["fixed_pilot_length"] = plan.fixed_pilot_length;
  j["methods"] = plan.methods;
  j["trials"] = plan.trials;
  j["channel_mode"] =
      plan.channel_mode == NearFieldMode::kExact ? "exact" : "fresnel";
  j["polar_rings"] = plan.polar_rings;
  j["polar_gamma"] = plan.polar_gamma;
  nlohmann::json s;
  s["k_max"] = plan.solver.k_max;
  s["block_size"] = plan.solver.block_size;
  s["beta_c"] = plan.solver.beta_c;
  s["gamma_a"] = plan.solver.gamma_a;
  s["gamma_b"] = plan.solver.gamma_b;
  s["max_iterations"] = plan.solver.max_iterations;
  s["tolerance"] = plan.solver.tolerance;
  s["residual_tol"] = plan.solver.residual_tol;
  s["noise_mode"] =
      plan.solver.noise_mode == NoiseVarMode::kKnown ? "known" : "em";
  j["solver"] = s;
  return j.dump(2);
}

ExperimentPlan plan_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentPlan plan;
  plan.config = config_from_json_string(j.at("config").dump());
  plan.axis = j.value("axis", "T") == std::string("SNR")
                  ? ExperimentPlan::Axis::kSnr
                  : ExperimentPlan::Axis::kPilotLength;
  plan.sweep_values = j.at("sweep_values").get<std::vector<double>>();
  plan.fixed_snr_db = j.value("fixed_snr_db", plan.fixed_snr_db);
  plan.fixed_pilot_length =
      j.value("fixed_pilot_length", plan.fixed_pilot_length);
  plan.methods = j.value("methods", plan.methods);
  plan.trials = j.value("trials", plan.trials);
  plan.channel_mode = j.value("channel_mode", "exact") == std::string("fresnel")
                          ? NearFieldMode::kFresnel
                          : NearFieldMode::kExact;
  plan.polar_rings = j.value("polar_rings", plan.polar_rings);
  plan.polar_gamma = j.value("polar_gamma", plan.polar_gamma);
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    plan.solver.k_max = s.value("k_max", plan.solver.k_max);
    plan.solver.block_size = s.value("block_size", plan.solver.block_size);
    plan.solver.beta_c = s.value("beta_c", plan.solver.beta_c);
    plan.solver.gamma_a = s.value("gamma_a", plan.solver.gamma_a);
    plan.solver.gamma_b = s.value("gamma_b", plan.solver.gamma_b);
    plan.solver.max_iterations =
        s.value("max_iterations", plan.solver.max_iterations);
    plan.solver.tolerance = s.value("tolerance", plan.solver.tolerance);
    plan.solver.residual_tol =
        s.value("residual_tol", plan.solver.residual_tol);
    plan.solver.noise_mode = s.value("noise_mode", "known") == std::string("em")
                                 ? NoiseVarMode::kEmEstimated
                                 : NoiseVarMode::kKnown;
  }
  plan.validate();
  return plan;
}

void dump_observations(const std::string& path, const ObservationSet& obs,
                       const CMatrix& h_stacked) {
  MatrixContainer c;
  c["C"] = obs.c_matrix;
  c["Y"] = obs.y;
  c["H"] = h_stacked;
  put_scalar(c, "noise_var", obs.noise_var);
  put_scalar(c, "snr_db", obs.snr_db);
  save_container(path, c);
}

ReplayResult replay(const std::string& path, const std::string& method,
                    const ExperimentPlan& plan) {
  const auto c = load_container(path);
  const auto& cfg = plan.config;
  const auto grid = subcarrier_grid(cfg);
  const auto dict = unified_dictionary(cfg);
  ObservationSet obs;
  obs.c_matrix = c.at("C");
  obs.y = c.at("Y");
  obs.noise_var = get_scalar(c, "noise_var");
  obs.snr_db = get_scalar(c, "snr_db");
  obs.omega = equivalent_sensing_matrix(obs.c_matrix, dict);
  const CMatrix h = c.at("H");
  const CMatrix h_hat = run_method(method, cfg, grid, dict, h, obs, plan);
  ReplayResult out;
  out.method = method;
  out.nmse_db = nmse_db(h_hat, h);
  return out;
}

}  // namespace xlris
