#include "xlris/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace xlris {

void SystemConfig::validate() const {
  if (n_t < 1 || n_y < 1 || n_z < 1)
    throw std::invalid_argument("array dimensions must be >= 1");
  if (n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be >= 1");
  if (n_paths_bs_ris < 1 || n_paths_ris_ue < 1)
    throw std::invalid_argument("path counts must be >= 1");
  if (f_c <= 0.0) throw std::invalid_argument("f_c must be positive");
  if (bandwidth < 0.0) throw std::invalid_argument("bandwidth must be >= 0");
  if (bandwidth >= f_c)
    throw std::invalid_argument("bandwidth must be < f_c");
  if (bs_ris_distance_m <= 0.0)
    throw std::invalid_argument("bs_ris_distance_m must be positive");
  if (element_spacing_m < 0.0)
    throw std::invalid_argument("element_spacing_m must be >= 0");
  if (ue_distance_min_m < 0.0 || ue_distance_max_m < 0.0)
    throw std::invalid_argument("UE distance bounds must be >= 0");
  if (ue_distance_min_m > 0.0 && ue_distance_max_m > 0.0 &&
      ue_distance_min_m > ue_distance_max_m)
    throw std::invalid_argument("ue_distance_min_m > ue_distance_max_m");
  // Near-field placement window must sit inside [F_r, R].
  const auto fb = field_boundaries(*this);
  if (fb.rayleigh_m > 0.0) {
    if (ue_distance_min_m > 0.0 && ue_distance_min_m < fb.fresnel_m)
      throw std::invalid_argument("ue_distance_min_m below Fresnel distance");
    if (ue_distance_max_m > 0.0 && ue_distance_max_m > fb.rayleigh_m)
      throw std::invalid_argument("ue_distance_max_m beyond Rayleigh distance");
  }
}

FrequencyGrid subcarrier_grid(const SystemConfig& cfg) {
  if (cfg.n_subcarriers < 1) throw std::invalid_argument("P must be >= 1");
  if (cfg.bandwidth < 0.0) throw std::invalid_argument("B must be >= 0");
  const int p_count = cfg.n_subcarriers;
  FrequencyGrid grid;
  grid.frequencies.resize(p_count);
  grid.wavenumbers.resize(p_count);
  grid.ratios.resize(p_count);
  for (int p0 = 0; p0 < p_count; ++p0) {
    const int p = p0 + 1; // paper indexing 1..P
    const double f =
        cfg.f_c + (2.0 * p - p_count) * cfg.bandwidth / (2.0 * p_count);
    grid.frequencies[p0] = f;
    grid.wavenumbers[p0] = 2.0 * kPi * f / kSpeedOfLight;
    grid.ratios[p0] = f / cfg.f_c;
  }
  return grid;
}

FieldBoundaries field_boundaries(const SystemConfig& cfg) {
  const double d = cfg.spacing();
  const double diag =
      d * std::hypot(double(cfg.n_y - 1), double(cfg.n_z - 1));
  FieldBoundaries fb;
  if (diag <= 0.0) return fb; // single element: both boundaries degenerate
  const double lambda = cfg.wavelength();
  fb.fresnel_m = 0.62 * std::sqrt(diag * diag * diag / lambda);
  fb.rayleigh_m = 2.0 * diag * diag / lambda;
  return fb;
}

std::pair<double, double> ue_range(const SystemConfig& cfg) {
  const auto fb = field_boundaries(cfg);
  double lo = cfg.ue_distance_min_m > 0.0 ? cfg.ue_distance_min_m : fb.fresnel_m;
  double hi = cfg.ue_distance_max_m > 0.0 ? cfg.ue_distance_max_m : fb.rayleigh_m;
  return {lo, hi};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t child_seed(std::uint64_t root, const std::string& label,
                         std::uint64_t index) {
  return splitmix64(splitmix64(root ^ fnv1a(label)) ^ index);
}

namespace {

SystemConfig config_from_json(const nlohmann::json& j) {
  SystemConfig cfg;
  cfg.n_t = j.value("n_t", cfg.n_t);
  cfg.n_y = j.value("n_y", cfg.n_y);
  cfg.n_z = j.value("n_z", cfg.n_z);
  cfg.f_c = j.value("f_c", cfg.f_c);
  cfg.bandwidth = j.value("bandwidth", cfg.bandwidth);
  cfg.n_subcarriers = j.value("n_subcarriers", cfg.n_subcarriers);
  cfg.n_paths_bs_ris = j.value("n_paths_bs_ris", cfg.n_paths_bs_ris);
  cfg.n_paths_ris_ue = j.value("n_paths_ris_ue", cfg.n_paths_ris_ue);
  cfg.rician_factor_db = j.value("rician_factor_db", cfg.rician_factor_db);
  cfg.bs_ris_distance_m = j.value("bs_ris_distance_m", cfg.bs_ris_distance_m);
  cfg.ue_distance_min_m = j.value("ue_distance_min_m", cfg.ue_distance_min_m);
  cfg.ue_distance_max_m = j.value("ue_distance_max_m", cfg.ue_distance_max_m);
  cfg.element_spacing_m = j.value("element_spacing_m", cfg.element_spacing_m);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.validate();
  return cfg;
}

}  // namespace

SystemConfig config_from_json_string(const std::string& text) {
  return config_from_json(nlohmann::json::parse(text));
}

SystemConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

std::string config_to_json_string(const SystemConfig& cfg) {
  nlohmann::json j;
  j["n_t"] = cfg.n_t;
  j["n_y"] = cfg.n_y;
  j["n_z"] = cfg.n_z;
  j["f_c"] = cfg.f_c;
  j["bandwidth"] = cfg.bandwidth;
  j["n_subcarriers"] = cfg.n_subcarriers;
  j["n_paths_bs_ris"] = cfg.n_paths_bs_ris;
  j["n_paths_ris_ue"] = cfg.n_paths_ris_ue;
  j["rician_factor_db"] = cfg.rician_factor_db;
  j["bs_ris_distance_m"] = cfg.bs_ris_distance_m;
  j["ue_distance_min_m"] = cfg.ue_distance_min_m;
  j["ue_distance_max_m"] = cfg.ue_distance_max_m;
  j["element_spacing_m"] = cfg.element_spacing_m;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

}  // namespace xlris
