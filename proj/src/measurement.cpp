#include "xlris/measurement.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace xlris {

PilotSchedule gen_pilots(const SystemConfig& cfg, int pilot_length,
                         std::mt19937_64& rng) {
  if (pilot_length < 1) throw std::invalid_argument("pilot length must be >= 1");
  const int n = cfg.n_ris();
  PilotSchedule pilots;
  pilots.s.resize(n, pilot_length);
  pilots.f.resize(cfg.n_t, pilot_length);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (int t = 0; t < pilot_length; ++t) {
    for (int i = 0; i < n; ++i) pilots.s(i, t) = std::polar(1.0, phase(rng));
    for (int i = 0; i < cfg.n_t; ++i)
      pilots.f(i, t) = cplx(gauss(rng), gauss(rng));
  }
  return pilots;
}

CMatrix sensing_matrix(const PilotSchedule& pilots) {
  const int n = int(pilots.s.rows());
  const int n_t = int(pilots.f.rows());
  const int t_len = pilots.length();
  CMatrix c(std::int64_t(n) * n_t, t_len);
  for (int t = 0; t < t_len; ++t)
    for (int a = 0; a < n_t; ++a)
      c.col(t).segment(std::int64_t(a) * n, n) =
          pilots.f(a, t) * pilots.s.col(t);
  return c;
}

CMatrix equivalent_sensing_matrix(const CMatrix& c_matrix,
                                  const UnifiedDictionary& dict) {
  if (c_matrix.rows() != dict.e_mu.rows())
    throw std::invalid_argument("sensing/dictionary dimension mismatch");
  return (1.0 / std::sqrt(double(dict.n))) *
         (c_matrix.transpose() * dict.e_mu);
}

ObservationSet synthesize_observations(const CMatrix& h_stacked,
                                       const PilotSchedule& pilots,
                                       const UnifiedDictionary& dict,
                                       double snr_db, std::mt19937_64& rng) {
  ObservationSet obs;
  obs.c_matrix = sensing_matrix(pilots);
  if (obs.c_matrix.rows() != h_stacked.rows())
    throw std::invalid_argument("pilot/channel dimension mismatch");
  obs.omega = equivalent_sensing_matrix(obs.c_matrix, dict);
  obs.snr_db = snr_db;
  obs.y = obs.c_matrix.transpose() * h_stacked;
  if (!std::isfinite(snr_db)) {
    obs.noise_var = 0.0;
    return obs;
  }
  const double signal_power = obs.y.squaredNorm() / double(obs.y.size());
  obs.noise_var = signal_power / std::pow(10.0, snr_db / 10.0);
  const double comp_sigma = std::sqrt(obs.noise_var / 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::int64_t j = 0; j < obs.y.cols(); ++j)
    for (std::int64_t i = 0; i < obs.y.rows(); ++i)
      obs.y(i, j) += cplx(comp_sigma * gauss(rng), comp_sigma * gauss(rng));
  return obs;
}

}  // namespace xlris
