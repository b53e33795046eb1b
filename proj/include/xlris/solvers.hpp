#ifndef XLRIS_SOLVERS_HPP
#define XLRIS_SOLVERS_HPP

#include <string>
#include <vector>

#include "xlris/types.hpp"

namespace xlris {

enum class NoiseVarMode { kKnown, kEmEstimated };

struct SolverConfig {
  int k_max = 4;              // greedy budget (atoms, or blocks for BOMP)
  int block_size = 8;         // N_b along the coefficient axis
  double beta_c = 1.0;        // pattern-coupling weight, in [0, 1]
  double gamma_a = 0.5;       // Gamma hyperprior shape
  double gamma_b = 1e-4;      // Gamma hyperprior rate
  int max_iterations = 200;   // EM cap
  double tolerance = 1e-4;    // EM relative-change stop
  double residual_tol = 1e-6; // greedy relative-residual stop
  NoiseVarMode noise_mode = NoiseVarMode::kKnown;

  void validate() const;
};

struct SolveResult {
  CMatrix x_hat;            // one column per processed measurement column
  std::vector<int> support; // greedy methods: selected atom/block columns
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = true;
};

/// Orthogonal matching pursuit on one measurement vector. A must have
/// unit-norm columns; ties break toward the lowest column index.
SolveResult omp_solve(const CVector& y, const CMatrix& a, const SolverConfig& cfg);

/// Simultaneous OMP: one common support across all columns of Y, selection by
/// summed correlation energy, per-column refits.
SolveResult somp_solve(const CMatrix& y, const CMatrix& a, const SolverConfig& cfg);

/// Block OMP over contiguous column blocks of size cfg.block_size.
SolveResult bomp_solve(const CVector& y, const CMatrix& a, const SolverConfig& cfg);

/// Pattern-coupled SBL on one measurement vector (chain coupling along the
/// coefficient axis). Complex circular-Gaussian posterior; M-step numerator
/// (a + 1). sigma2 is the known noise variance (EM-refined when configured).
SolveResult pcsbl_1d(const CVector& y, const CMatrix& a, const SolverConfig& cfg,
                     double sigma2);

/// 2D pattern-coupled SBL over the (coefficient, subcarrier) grid; the P
/// per-column E-steps of each EM iteration run in parallel.
SolveResult pcsbl_2d(const CMatrix& y, const CMatrix& omega,
                     const SolverConfig& cfg, double sigma2);

/// 10 log10(||h_hat - h||_F^2 / ||h||_F^2); exact recovery reports the
/// -300 dB floor.
double nmse_db(const CMatrix& h_hat, const CMatrix& h);

inline constexpr double kNmseFloorDb = -300.0;

}  // namespace xlris

#endif
