#include "xlris/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace xlris {

namespace {

inline double psi_a_of(double phi1) { return std::sin(phi1); }
inline double psi_e_of(double phi1, double phi2) {
  return std::cos(phi1) * std::sin(phi2);
}

inline double wavenumber(double f) { return 2.0 * kPi * f / kSpeedOfLight; }

}  // namespace

CVector bs_steering_sin(double sin_theta, double f_p, int n_t, double d) {
  const double k_p = wavenumber(f_p);
  const double scale = 1.0 / std::sqrt(double(n_t));
  CVector a(n_t);
  for (int n = 0; n < n_t; ++n)
    a(n) = std::polar(scale, k_p * n * d * sin_theta);
  return a;
}

CVector bs_steering(double theta, double f_p, int n_t, double d) {
  return bs_steering_sin(std::sin(theta), f_p, n_t, d);
}

CVector ris_ff_steering_psi(const RisGeometry& g, double psi_a, double psi_e,
                            double f_p) {
  const double k_p = wavenumber(f_p);
  const double scale = 1.0 / std::sqrt(double(g.n()));
  CVector b(g.n());
  for (int ny = 0; ny < g.n_y; ++ny)
    for (int nz = 0; nz < g.n_z; ++nz)
      b(g.index(ny, nz)) =
          std::polar(scale, k_p * g.d * (nz * psi_a + ny * psi_e));
  return b;
}

CVector ris_ff_steering(const RisGeometry& g, double theta1, double theta2,
                        double f_p) {
  return ris_ff_steering_psi(g, psi_a_of(theta1), psi_e_of(theta1, theta2),
                             f_p);
}

double element_distance_exact(double r, double phi1, double phi2, int ny,
                              int nz, double d) {
  if (r <= 0.0) throw std::invalid_argument("range must be positive");
  const double pa = psi_a_of(phi1);
  const double pe = psi_e_of(phi1, phi2);
  return std::sqrt(r * r + d * d * (double(ny) * ny + double(nz) * nz) +
                   2.0 * r * d * (nz * pa + ny * pe));
}

double element_distance_fresnel(double r, double phi1, double phi2, int ny,
                                int nz, double d) {
  if (r <= 0.0) throw std::invalid_argument("range must be positive");
  const double pa = psi_a_of(phi1);
  const double pe = psi_e_of(phi1, phi2);
  return r + d * (nz * pa + ny * pe) +
         d * d *
             (double(nz) * nz * (1.0 - pa * pa) +
              double(ny) * ny * (1.0 - pe * pe)) /
             (2.0 * r);
}

RVector inv_mu_profile(const RisGeometry& g, double r, double psi_a,
                       double psi_e) {
  if (r <= 0.0) throw std::invalid_argument("range must be positive");
  RVector q(g.n());
  for (int ny = 0; ny < g.n_y; ++ny)
    for (int nz = 0; nz < g.n_z; ++nz)
      q(g.index(ny, nz)) = (double(nz) * nz * (1.0 - psi_a * psi_a) +
                            double(ny) * ny * (1.0 - psi_e * psi_e)) /
                           r;
  return q;
}

CVector nf_quadratic_vector(const RisGeometry& g, const RVector& inv_mu,
                            double f_p) {
  if (inv_mu.size() != g.n())
    throw std::invalid_argument("inv_mu size mismatch");
  const double k_p = wavenumber(f_p);
  CVector v(g.n());
  for (int i = 0; i < g.n(); ++i)
    v(i) = std::polar(1.0, k_p * g.d * g.d * inv_mu(i) / 2.0);
  return v;
}

CVector nf_steering(const RisGeometry& g, double phi1, double phi2, double f_p,
                    double r, NearFieldMode mode) {
  if (r <= 0.0) throw std::invalid_argument("range must be positive");
  if (mode == NearFieldMode::kExact) {
    const double k_p = wavenumber(f_p);
    const double scale = 1.0 / std::sqrt(double(g.n()));
    CVector c(g.n());
    for (int ny = 0; ny < g.n_y; ++ny)
      for (int nz = 0; nz < g.n_z; ++nz)
        c(g.index(ny, nz)) = std::polar(
            scale,
            k_p * (element_distance_exact(r, phi1, phi2, ny, nz, g.d) - r));
    return c;
  }
  const double pa = psi_a_of(phi1);
  const double pe = psi_e_of(phi1, phi2);
  const CVector b = ris_ff_steering_psi(g, pa, pe, f_p);
  const CVector dq = nf_quadratic_vector(g, inv_mu_profile(g, r, pa, pe), f_p);
  return b.cwiseProduct(dq);
}

namespace {

// Rician split: path 0 takes kappa/(kappa+1) of the power with zero phase,
// the remaining power is split evenly with uniform random phases.
std::vector<cplx> rician_gains(int count, double kappa_db,
                               std::mt19937_64& rng) {
  std::vector<cplx> gains(count);
  if (count == 1) {
    gains[0] = 1.0;
    return gains;
  }
  const double kappa = std::pow(10.0, kappa_db / 10.0);
  gains[0] = std::sqrt(kappa / (kappa + 1.0));
  const double nlos_amp = std::sqrt(1.0 / ((kappa + 1.0) * (count - 1)));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int i = 1; i < count; ++i) gains[i] = std::polar(nlos_amp, phase(rng));
  return gains;
}

}  // namespace

PathSet sample_paths(const SystemConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  PathSet out;

  const auto bs_gains = rician_gains(cfg.n_paths_bs_ris, cfg.rician_factor_db, rng);
  out.bs_ris.resize(cfg.n_paths_bs_ris);
  for (int l = 0; l < cfg.n_paths_bs_ris; ++l) {
    auto& p = out.bs_ris[l];
    p.gain = bs_gains[l];
    p.aod_bs = angle(rng);
    p.ris_angle_1 = angle(rng);
    p.ris_angle_2 = angle(rng);
    p.delay_s = cfg.bs_ris_distance_m / kSpeedOfLight;
  }

  const auto [r_lo, r_hi] = ue_range(cfg);
  std::uniform_real_distribution<double> range(r_lo, r_hi);
  const auto ue_gains = rician_gains(cfg.n_paths_ris_ue, cfg.rician_factor_db, rng);
  out.ris_ue.resize(cfg.n_paths_ris_ue);
  for (int k = 0; k < cfg.n_paths_ris_ue; ++k) {
    auto& p = out.ris_ue[k];
    p.gain = ue_gains[k];
    p.angle_1 = angle(rng);
    p.angle_2 = angle(rng);
    p.range_m = range(rng);
    p.delay_s = p.range_m / kSpeedOfLight;
    p.is_los = (k == 0);
  }
  return out;
}

CMatrix build_g(const SystemConfig& cfg, const std::vector<BsRisPath>& paths,
                double f_p) {
  const auto g = ris_geometry(cfg);
  const double scale =
      std::sqrt(double(cfg.n_t) * g.n() / double(paths.size()));
  CMatrix out = CMatrix::Zero(g.n(), cfg.n_t);
  for (const auto& path : paths) {
    const cplx rho_lp =
        path.gain * std::polar(1.0, -2.0 * kPi * f_p * path.delay_s);
    const CVector b =
        ris_ff_steering(g, path.ris_angle_1, path.ris_angle_2, f_p);
    const CVector a = bs_steering(path.aod_bs, f_p, cfg.n_t, g.d);
    out.noalias() += (scale * rho_lp) * b * a.adjoint();
  }
  return out;
}

CVector build_h(const SystemConfig& cfg, const std::vector<RisUePath>& paths,
                double f_p, NearFieldMode mode) {
  const auto g = ris_geometry(cfg);
  const double scale = std::sqrt(double(g.n()) / double(paths.size()));
  CVector out = CVector::Zero(g.n());
  for (const auto& path : paths) {
    const cplx xi_kp =
        path.gain * std::polar(1.0, -2.0 * kPi * f_p * path.delay_s);
    out += (scale * xi_kp) *
           nf_steering(g, path.angle_1, path.angle_2, f_p, path.range_m, mode);
  }
  return out;
}

CVector cascade_vec(const CVector& h_p, const CMatrix& g_p) {
  if (h_p.size() != g_p.rows())
    throw std::invalid_argument("h/G dimension mismatch");
  CMatrix hp = h_p.conjugate().asDiagonal() * g_p;
  return Eigen::Map<CVector>(hp.data(), hp.size());
}

ChannelRealization build_channel(const SystemConfig& cfg,
                                 const FrequencyGrid& grid,
                                 const PathSet& paths, NearFieldMode mode,
                                 bool keep_caches) {
  const int p_count = grid.size();
  const int dim = cfg.n_ris() * cfg.n_t;
  ChannelRealization out;
  out.paths = paths;
  out.h_stacked.resize(dim, p_count);
  if (keep_caches) {
    out.per_subcarrier_g.resize(p_count);
    out.per_subcarrier_h.resize(p_count);
  }
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < p_count; ++p) {
    const double f_p = grid.frequencies[p];
    CMatrix g_p = build_g(cfg, paths.bs_ris, f_p);
    CVector h_p = build_h(cfg, paths.ris_ue, f_p, mode);
    out.h_stacked.col(p) = cascade_vec(h_p, g_p);
    if (keep_caches) {
      out.per_subcarrier_g[p] = std::move(g_p);
      out.per_subcarrier_h[p] = std::move(h_p);
    }
  }
  return out;
}

}  // namespace xlris
