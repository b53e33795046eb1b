#ifndef XLRIS_SERIAL_REF_HPP
#define XLRIS_SERIAL_REF_HPP

// Straightforward per-element loop implementations kept as the reference for
// the vectorized / OpenMP kernels. Tests compare against these; the benchmark
// target reports the speedup over them.

#include <cmath>

#include "xlris/channel.hpp"
#include "xlris/config.hpp"

namespace xlris::serial {

inline CVector bs_steering_ref(double theta, double f_p, int n_t, double d) {
  const double k_p = 2.0 * kPi * f_p / kSpeedOfLight;
  CVector a(n_t);
  for (int n = 0; n < n_t; ++n) {
    const double phase = k_p * n * d * std::sin(theta);
    a(n) = cplx(std::cos(phase), std::sin(phase)) / std::sqrt(double(n_t));
  }
  return a;
}

inline CVector ris_ff_steering_ref(const RisGeometry& g, double theta1,
                                   double theta2, double f_p) {
  const double k_p = 2.0 * kPi * f_p / kSpeedOfLight;
  const double psi_a = std::sin(theta1);
  const double psi_e = std::cos(theta1) * std::sin(theta2);
  CVector b(g.n());
  for (int ny = 0; ny < g.n_y; ++ny)
    for (int nz = 0; nz < g.n_z; ++nz) {
      const double phase = k_p * g.d * (nz * psi_a + ny * psi_e);
      b(g.index(ny, nz)) =
          cplx(std::cos(phase), std::sin(phase)) / std::sqrt(double(g.n()));
    }
  return b;
}

inline CVector nf_steering_ref(const RisGeometry& g, double phi1, double phi2,
                               double f_p, double r, NearFieldMode mode) {
  const double k_p = 2.0 * kPi * f_p / kSpeedOfLight;
  CVector c(g.n());
  for (int ny = 0; ny < g.n_y; ++ny)
    for (int nz = 0; nz < g.n_z; ++nz) {
      const double dist = mode == NearFieldMode::kExact
                              ? element_distance_exact(r, phi1, phi2, ny, nz, g.d)
                              : element_distance_fresnel(r, phi1, phi2, ny, nz, g.d);
      const double phase = k_p * (dist - r);
      c(g.index(ny, nz)) =
          cplx(std::cos(phase), std::sin(phase)) / std::sqrt(double(g.n()));
    }
  return c;
}

// Entrywise triple-loop evaluation of the BS-RIS channel sum.
inline CMatrix build_g_ref(const SystemConfig& cfg,
                           const std::vector<BsRisPath>& paths, double f_p) {
  const auto g = ris_geometry(cfg);
  CMatrix out = CMatrix::Zero(g.n(), cfg.n_t);
  const double scale = std::sqrt(double(cfg.n_t) * g.n() / double(paths.size()));
  for (const auto& path : paths) {
    const cplx rho = path.gain * std::exp(cplx(0.0, -2.0 * kPi * f_p * path.delay_s));
    const CVector b = ris_ff_steering_ref(g, path.ris_angle_1, path.ris_angle_2, f_p);
    const CVector a = bs_steering_ref(path.aod_bs, f_p, cfg.n_t, g.d);
    for (int row = 0; row < g.n(); ++row)
      for (int col = 0; col < cfg.n_t; ++col)
        out(row, col) += scale * rho * b(row) * std::conj(a(col));
  }
  return out;
}

inline CVector build_h_ref(const SystemConfig& cfg,
                           const std::vector<RisUePath>& paths, double f_p,
                           NearFieldMode mode) {
  const auto g = ris_geometry(cfg);
  CVector out = CVector::Zero(g.n());
  const double scale = std::sqrt(double(g.n()) / double(paths.size()));
  for (const auto& path : paths) {
    const cplx xi = path.gain * std::exp(cplx(0.0, -2.0 * kPi * f_p * path.delay_s));
    const CVector c =
        nf_steering_ref(g, path.angle_1, path.angle_2, f_p, path.range_m, mode);
    for (int i = 0; i < g.n(); ++i) out(i) += scale * xi * c(i);
  }
  return out;
}

// Row-by-row diag(h^H) G followed by column-major vectorization.
inline CVector cascade_vec_ref(const CVector& h, const CMatrix& g_mat) {
  const int n = int(h.size());
  const int n_t = int(g_mat.cols());
  CVector out(std::int64_t(n) * n_t);
  for (int col = 0; col < n_t; ++col)
    for (int row = 0; row < n; ++row)
      out(std::int64_t(col) * n + row) = std::conj(h(row)) * g_mat(row, col);
  return out;
}

inline CMatrix build_channel_ref(const SystemConfig& cfg,
                                 const FrequencyGrid& grid,
                                 const PathSet& paths, NearFieldMode mode) {
  const int dim = cfg.n_ris() * cfg.n_t;
  CMatrix h(dim, grid.size());
  for (int p = 0; p < grid.size(); ++p) {
    const double f_p = grid.frequencies[p];
    h.col(p) = cascade_vec_ref(build_h_ref(cfg, paths.ris_ue, f_p, mode),
                               build_g_ref(cfg, paths.bs_ris, f_p));
  }
  return h;
}

}  // namespace xlris::serial

#endif
