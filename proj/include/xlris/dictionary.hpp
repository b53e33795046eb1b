#ifndef XLRIS_DICTIONARY_HPP
#define XLRIS_DICTIONARY_HPP

#include <vector>

#include "xlris/channel.hpp"
#include "xlris/config.hpp"
#include "xlris/types.hpp"

namespace xlris {

/// Unitary DFT matrix, entry (a,b) = exp(-j 2 pi a b / n) / sqrt(n).
CMatrix dft_matrix(int n);

/// 2D-DFT over the RIS plane: U_{n_y} kron U_{n_z} under the global element
/// ordering index = n_y' * N_z + n_z'.
CMatrix dft2_matrix(int n_y, int n_z);

/// Modified DFT dictionary D_p = diag(d(mu, f_p)) U; unitary.
CMatrix modified_dict(const RisGeometry& g, const RVector& inv_mu, double f_p);

/// Representative factor Theta_{N,p} = (1/sqrt(N)) diag(d^*(mu, f_p)) U.
/// Equals the first N columns of diag(d^*) (U^* face-split U); verified
/// against full materialization in tests.
CMatrix theta_rep(const RisGeometry& g, const RVector& inv_mu, double f_p);

/// Assignment of the N^2 face-splitting-product columns to their N cyclic
/// difference classes. Column (i, j) (flat index i*N + j) belongs to class
/// ((j_y - i_y) mod N_y, (j_z - i_z) mod N_z).
struct AggregationMap {
  int n_y = 1;
  int n_z = 1;
  std::vector<int> class_of; // length N^2, values in 0..N-1

  int n() const { return n_y * n_z; }
  /// Materializes the {0,1} aggregation matrix P of shape N x N^2.
  RMatrix materialize() const;
};

AggregationMap aggregation_map(int n_y, int n_z);

/// Frequency-independent unified dictionary E_mu = sqrt(N) V_c^* kron
/// Theta_{N,c}, parameterized by a reference inverse-effective-distance
/// profile evaluated at f_c. Unitary; immutable once built.
struct UnifiedDictionary {
  CMatrix e_mu;       // (N*N_t) x (N*N_t)
  CMatrix theta;      // Theta_{N,c}, N x N
  CMatrix v_c;        // DFT(N_t)
  RVector inv_mu_ref; // per-element 1/mu profile
  double r_ref = 0.0; // reference range used for the default profile
  int n = 0;
  int n_t = 0;
};

/// Default reference profile: broadside angles at the geometric mean of the
/// UE range window.
RVector default_inv_mu_ref(const SystemConfig& cfg);

UnifiedDictionary unified_dictionary(const SystemConfig& cfg);
UnifiedDictionary unified_dictionary(const SystemConfig& cfg,
                                     const RVector& inv_mu_ref, double r_ref);

/// Default coefficient-axis block size, ceil(sqrt(N)).
int default_block_size(const SystemConfig& cfg);

/// Sparse-domain coefficients X~ with vec(H_p) = (1/sqrt(N)) E_mu x~_p.
struct SparseCoefficients {
  CMatrix x_tilde; // (N*N_t) x P
  int block_size = 1;
};

/// X~ = sqrt(N) E_mu^H H (lossless round trip through synthesize).
SparseCoefficients analyze_coefficients(const CMatrix& h_stacked,
                                        const UnifiedDictionary& dict,
                                        int block_size);

/// H = (1/sqrt(N)) E_mu X~.
CMatrix synthesize_channel(const CMatrix& x_tilde,
                           const UnifiedDictionary& dict);

// ---- Frequency-normalization maps (all affine in eta_p = f_p / f_c) -------

inline double map_psi(double psi, double eta) { return eta * psi; }
inline double map_sin_aod(double sin_theta, double eta) {
  return eta * sin_theta;
}
/// mu~ = mu / eta, expressed on the inverse profile: q~ = eta * q.
inline RVector map_inv_mu(const RVector& inv_mu, double eta) {
  return eta * inv_mu;
}

// ---- Polar-domain baseline dictionary -------------------------------------

/// Angle grid of size N (Psi_a over N_z points, Psi_e over N_y points,
/// uniform in [-1, 1)); per angle, S distance rings r_s = (2 D^2 / lambda_c)
/// * gamma / s with s = 0 mapped to the far-field atom (r = infinity).
struct PolarGrid {
  CMatrix atoms;                // N x (N*S), unit-norm columns
  std::vector<double> psi_a;    // per-atom
  std::vector<double> psi_e;    // per-atom
  std::vector<double> rings_m;  // per-atom; 0 marks the far-field ring
  int ring_count = 1;
};

PolarGrid polar_dictionary(const SystemConfig& cfg, double f_p,
                           int ring_count = 4, double gamma = 1.0);

/// Cascaded-channel dictionary for the polar baselines: columns are
/// a-grid kron conj(polar atom), shape (N*N_t) x (N_t*N*S).
CMatrix cascaded_polar_dictionary(const SystemConfig& cfg,
                                  const PolarGrid& grid);

}  // namespace xlris

#endif
