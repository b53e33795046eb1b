#include "xlris/dictionary.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace xlris {

CMatrix dft_matrix(int n) {
  if (n < 1) throw std::invalid_argument("DFT size must be >= 1");
  const double scale = 1.0 / std::sqrt(double(n));
  CMatrix u(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      u(a, b) = std::polar(scale, -2.0 * kPi * double(a) * double(b) / n);
  return u;
}

CMatrix dft2_matrix(int n_y, int n_z) {
  return Eigen::kroneckerProduct(dft_matrix(n_y), dft_matrix(n_z)).eval();
}

CMatrix modified_dict(const RisGeometry& g, const RVector& inv_mu,
                      double f_p) {
  const CVector d = nf_quadratic_vector(g, inv_mu, f_p);
  return d.asDiagonal() * dft2_matrix(g.n_y, g.n_z);
}

CMatrix theta_rep(const RisGeometry& g, const RVector& inv_mu, double f_p) {
  const CVector d = nf_quadratic_vector(g, inv_mu, f_p);
  return (1.0 / std::sqrt(double(g.n()))) *
         (d.conjugate().asDiagonal() * dft2_matrix(g.n_y, g.n_z));
}

AggregationMap aggregation_map(int n_y, int n_z) {
  if (n_y < 1 || n_z < 1) throw std::invalid_argument("counts must be >= 1");
  const int n = n_y * n_z;
  AggregationMap map;
  map.n_y = n_y;
  map.n_z = n_z;
  map.class_of.resize(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    const int iy = i / n_z, iz = i % n_z;
    for (int j = 0; j < n; ++j) {
      const int jy = j / n_z, jz = j % n_z;
      const int cy = ((jy - iy) % n_y + n_y) % n_y;
      const int cz = ((jz - iz) % n_z + n_z) % n_z;
      map.class_of[std::size_t(i) * n + j] = cy * n_z + cz;
    }
  }
  return map;
}

RMatrix AggregationMap::materialize() const {
  const int cols = n() * n();
  RMatrix p = RMatrix::Zero(n(), cols);
  for (int c = 0; c < cols; ++c) p(class_of[c], c) = 1.0;
  return p;
}

RVector default_inv_mu_ref(const SystemConfig& cfg) {
  const auto [r_lo, r_hi] = ue_range(cfg);
  if (r_lo <= 0.0 || r_hi <= 0.0)
    return RVector::Zero(cfg.n_ris()); // degenerate aperture: pure DFT
  const double r_ref = std::sqrt(r_lo * r_hi);
  return inv_mu_profile(ris_geometry(cfg), r_ref, 0.0, 0.0);
}

UnifiedDictionary unified_dictionary(const SystemConfig& cfg,
                                     const RVector& inv_mu_ref, double r_ref) {
  const auto g = ris_geometry(cfg);
  UnifiedDictionary dict;
  dict.n = g.n();
  dict.n_t = cfg.n_t;
  dict.r_ref = r_ref;
  dict.inv_mu_ref = inv_mu_ref;
  dict.theta = theta_rep(g, inv_mu_ref, cfg.f_c);
  dict.v_c = dft_matrix(cfg.n_t);
  dict.e_mu = std::sqrt(double(g.n())) *
              Eigen::kroneckerProduct(dict.v_c.conjugate(), dict.theta);
  return dict;
}

UnifiedDictionary unified_dictionary(const SystemConfig& cfg) {
  const auto [r_lo, r_hi] = ue_range(cfg);
  const double r_ref = (r_lo > 0.0 && r_hi > 0.0) ? std::sqrt(r_lo * r_hi) : 0.0;
  return unified_dictionary(cfg, default_inv_mu_ref(cfg), r_ref);
}

int default_block_size(const SystemConfig& cfg) {
  return int(std::ceil(std::sqrt(double(cfg.n_ris()))));
}

SparseCoefficients analyze_coefficients(const CMatrix& h_stacked,
                                        const UnifiedDictionary& dict,
                                        int block_size) {
  if (h_stacked.rows() != dict.e_mu.cols())
    throw std::invalid_argument("channel/dictionary dimension mismatch");
  SparseCoefficients out;
  out.block_size = block_size;
  out.x_tilde = std::sqrt(double(dict.n)) * (dict.e_mu.adjoint() * h_stacked);
  return out;
}

CMatrix synthesize_channel(const CMatrix& x_tilde,
                           const UnifiedDictionary& dict) {
  if (x_tilde.rows() != dict.e_mu.cols())
    throw std::invalid_argument("coefficient/dictionary dimension mismatch");
  return (1.0 / std::sqrt(double(dict.n))) * (dict.e_mu * x_tilde);
}

PolarGrid polar_dictionary(const SystemConfig& cfg, double f_p, int ring_count,
                           double gamma) {
  if (ring_count < 1) throw std::invalid_argument("ring_count must be >= 1");
  const auto g = ris_geometry(cfg);
  const int n = g.n();
  const double rayleigh = field_boundaries(cfg).rayleigh_m;

  PolarGrid grid;
  grid.ring_count = ring_count;
  grid.atoms.resize(n, std::int64_t(n) * ring_count);
  grid.psi_a.reserve(std::size_t(n) * ring_count);
  grid.psi_e.reserve(std::size_t(n) * ring_count);
  grid.rings_m.reserve(std::size_t(n) * ring_count);

  int col = 0;
  for (int ma = 0; ma < g.n_z; ++ma) {
    const double psi_a = -1.0 + 2.0 * ma / g.n_z;
    for (int me = 0; me < g.n_y; ++me) {
      const double psi_e = -1.0 + 2.0 * me / g.n_y;
      const CVector far = ris_ff_steering_psi(g, psi_a, psi_e, f_p);
      for (int s = 0; s < ring_count; ++s) {
        if (s == 0 || rayleigh <= 0.0) {
          grid.atoms.col(col) = far;
          grid.rings_m.push_back(0.0);
        } else {
          const double r_s = rayleigh * gamma / double(s);
          const CVector dq =
              nf_quadratic_vector(g, inv_mu_profile(g, r_s, psi_a, psi_e), f_p);
          grid.atoms.col(col) = far.cwiseProduct(dq);
          grid.rings_m.push_back(r_s);
        }
        grid.psi_a.push_back(psi_a);
        grid.psi_e.push_back(psi_e);
        ++col;
      }
    }
  }
  return grid;
}

CMatrix cascaded_polar_dictionary(const SystemConfig& cfg,
                                  const PolarGrid& grid) {
  return Eigen::kroneckerProduct(dft_matrix(cfg.n_t),
                                 grid.atoms.conjugate())
      .eval();
}

}  // namespace xlris
