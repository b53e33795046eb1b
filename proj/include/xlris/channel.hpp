#ifndef XLRIS_CHANNEL_HPP
#define XLRIS_CHANNEL_HPP

#include <random>
#include <vector>

#include "xlris/config.hpp"
#include "xlris/types.hpp"

namespace xlris {

/// RIS planar-array geometry. Element (n_y', n_z') maps to the flat index
/// n_y' * n_z_count + n_z'; this ordering is global across steering vectors,
/// DFT factors and diag operations.
struct RisGeometry {
  int n_y = 1;
  int n_z = 1;
  double d = 0.0; // element spacing [m]

  int n() const { return n_y * n_z; }
  int index(int ny, int nz) const { return ny * n_z + nz; }
};

inline RisGeometry ris_geometry(const SystemConfig& cfg) {
  return {cfg.n_y, cfg.n_z, cfg.spacing()};
}

/// One far-field BS-RIS propagation path.
struct BsRisPath {
  cplx gain;            // rho_l, frequency-flat base gain
  double aod_bs;        // vartheta_l [rad]
  double ris_angle_1;   // theta_{l,1} [rad]
  double ris_angle_2;   // theta_{l,2} [rad]
  double delay_s;       // tau_l^{BR}
};

/// One near-field RIS-UE propagation path.
struct RisUePath {
  cplx gain;            // xi_k
  double angle_1;       // varphi_{k,1} [rad]
  double angle_2;       // varphi_{k,2} [rad]
  double range_m;       // r_k
  double delay_s;       // tau_k = r_k / c
  bool is_los = false;
};

enum class NearFieldMode { kExact, kFresnel };

// ---- Steering vectors -----------------------------------------------------

/// BS ULA steering vector, entry n = exp(j k_p n d sin(theta)) / sqrt(N_t).
CVector bs_steering(double theta, double f_p, int n_t, double d);
/// Same, parameterized directly by the spatial frequency sin(theta).
CVector bs_steering_sin(double sin_theta, double f_p, int n_t, double d);

/// RIS far-field steering vector over (Psi_a, Psi_e) = (sin t1, cos t1 sin t2).
CVector ris_ff_steering(const RisGeometry& g, double theta1, double theta2,
                        double f_p);
/// Spatial-frequency-level form used by the frequency remappings.
CVector ris_ff_steering_psi(const RisGeometry& g, double psi_a, double psi_e,
                            double f_p);

/// Exact element-to-point distance:
/// sqrt(r^2 + d^2 (ny^2 + nz^2) + 2 r d (nz Psi_a + ny Psi_e)).
double element_distance_exact(double r, double phi1, double phi2, int ny,
                              int nz, double d);

/// Second-order (Fresnel) expansion of the distance above.
double element_distance_fresnel(double r, double phi1, double phi2, int ny,
                                int nz, double d);

/// Per-element inverse effective distance q = 1/mu:
/// q = [nz^2 (1 - Psi_a^2) + ny^2 (1 - Psi_e^2)] / r.
/// The reference element (0,0) has q = 0, i.e. no quadratic phase.
RVector inv_mu_profile(const RisGeometry& g, double r, double psi_a,
                       double psi_e);

/// Quadratic-phase vector d(mu, f_p): entry exp(j k_p d^2 q / 2) for the
/// per-element inverse effective distance q.
CVector nf_quadratic_vector(const RisGeometry& g, const RVector& inv_mu,
                            double f_p);

/// Near-field steering vector c(phi1, phi2, f_p, r); kFresnel equals
/// ris_ff_steering .* nf_quadratic_vector exactly.
CVector nf_steering(const RisGeometry& g, double phi1, double phi2, double f_p,
                    double r, NearFieldMode mode);

// ---- Path sampling and channel synthesis ----------------------------------

struct PathSet {
  std::vector<BsRisPath> bs_ris;
  std::vector<RisUePath> ris_ue;
};

/// Draws path parameters per the simulation protocol: angles uniform on
/// [-pi/2, pi/2], LoS range uniform on [F_r, R] (or the configured window),
/// Rician power split with path 1 as LoS, delays = range / c.
PathSet sample_paths(const SystemConfig& cfg, std::mt19937_64& rng);

/// Far-field BS-RIS channel at one subcarrier, Eq.-(5)-style sum of L
/// rank-one terms with rho_{l,p} = rho_l * exp(-j 2 pi f_p tau_l).
CMatrix build_g(const SystemConfig& cfg, const std::vector<BsRisPath>& paths,
                double f_p);

/// Near-field RIS-UE channel at one subcarrier.
CVector build_h(const SystemConfig& cfg, const std::vector<RisUePath>& paths,
                double f_p, NearFieldMode mode);

/// Cascaded channel H_p = diag(h_p^H) G_p, vectorized column-major.
CVector cascade_vec(const CVector& h_p, const CMatrix& g_p);

struct ChannelRealization {
  PathSet paths;
  CMatrix h_stacked;                  // (N*N_t) x P, column p = vec(H_p)
  std::vector<CMatrix> per_subcarrier_g; // optional caches
  std::vector<CVector> per_subcarrier_h;
};

/// Synthesizes the full wideband cascaded channel; the per-subcarrier loop is
/// OpenMP-parallel.
ChannelRealization build_channel(const SystemConfig& cfg,
                                 const FrequencyGrid& grid,
                                 const PathSet& paths, NearFieldMode mode,
                                 bool keep_caches = false);

}  // namespace xlris

#endif
