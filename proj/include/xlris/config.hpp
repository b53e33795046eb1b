#ifndef XLRIS_CONFIG_HPP
#define XLRIS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "xlris/types.hpp"

namespace xlris {

/// All system-level parameters. Immutable after validation; shared read-only
/// across concurrent trials.
struct SystemConfig {
  int n_t = 4;             // BS antennas (ULA)
  int n_y = 128;           // RIS elements along y
  int n_z = 8;             // RIS elements along z
  double f_c = 100e9;      // carrier frequency [Hz]
  double bandwidth = 10e9; // total bandwidth B [Hz]
  int n_subcarriers = 128; // P
  int n_paths_bs_ris = 2;  // L
  int n_paths_ris_ue = 2;  // K
  double rician_factor_db = 13.0;
  double bs_ris_distance_m = 50.0;
  double ue_distance_min_m = 0.0; // 0 -> use Fresnel distance
  double ue_distance_max_m = 0.0; // 0 -> use Rayleigh distance
  double element_spacing_m = 0.0; // 0 -> lambda_c / 2
  std::uint64_t seed = 1;

  int n_ris() const { return n_y * n_z; }
  double wavelength() const { return kSpeedOfLight / f_c; }
  double spacing() const {
    return element_spacing_m > 0.0 ? element_spacing_m
                                   : kSpeedOfLight / (2.0 * f_c);
  }

  // Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Per-subcarrier frequency grid: f_p = f_c + (2p - P) B / (2P), p = 1..P.
/// Stored zero-based; entry p0 corresponds to subcarrier index p = p0 + 1.
struct FrequencyGrid {
  std::vector<double> frequencies; // f_p [Hz]
  std::vector<double> wavenumbers; // k_p = 2*pi*f_p / c
  std::vector<double> ratios;      // eta_p = f_p / f_c

  int size() const { return static_cast<int>(frequencies.size()); }
};

FrequencyGrid subcarrier_grid(const SystemConfig& cfg);

/// Fresnel and Rayleigh distances of the RIS aperture.
/// D is the planar diagonal over element centers, d*sqrt((n_y-1)^2+(n_z-1)^2).
struct FieldBoundaries {
  double fresnel_m = 0.0;
  double rayleigh_m = 0.0;
};

FieldBoundaries field_boundaries(const SystemConfig& cfg);

/// Effective UE range interval [r_min, r_max]; defaults to [F_r, R].
std::pair<double, double> ue_range(const SystemConfig& cfg);

/// Deterministic child seed from (root, purpose label, trial index).
/// Trials are reproducible independently of execution order.
std::uint64_t child_seed(std::uint64_t root, const std::string& label,
                         std::uint64_t index);

// JSON (de)serialization of the config file schema documented in the README.
SystemConfig config_from_json_string(const std::string& text);
SystemConfig config_from_json_file(const std::string& path);
std::string config_to_json_string(const SystemConfig& cfg);

}  // namespace xlris

#endif
