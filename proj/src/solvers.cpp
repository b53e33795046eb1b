#include "xlris/solvers.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace xlris {

namespace {

constexpr double kRefitRidge = 1e-10;

// Least-squares refit of y on the selected columns; ridge keeps the normal
// equations solvable for rank-deficient supports.
CVector refit(const CMatrix& a, const std::vector<int>& cols, const CVector& y) {
  const int k = int(cols.size());
  CMatrix a_s(a.rows(), k);
  for (int i = 0; i < k; ++i) a_s.col(i) = a.col(cols[i]);
  CMatrix gram = a_s.adjoint() * a_s;
  gram.diagonal().array() += kRefitRidge;
  return Eigen::LDLT<CMatrix>(gram).solve(a_s.adjoint() * y);
}

int argmax_strict(const RVector& scores, const std::vector<bool>& taken) {
  int best = -1;
  double best_val = -1.0;
  for (int i = 0; i < scores.size(); ++i) {
    if (taken[i]) continue;
    if (scores(i) > best_val) { // strict: lowest index wins ties
      best_val = scores(i);
      best = i;
    }
  }
  return best;
}

}  // namespace

void SolverConfig::validate() const {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (block_size < 1) throw std::invalid_argument("block_size must be >= 1");
  if (beta_c < 0.0 || beta_c > 1.0)
    throw std::invalid_argument("beta_c must be in [0, 1]");
  if (tolerance <= 0.0) throw std::invalid_argument("tolerance must be > 0");
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
}

SolveResult omp_solve(const CVector& y, const CMatrix& a,
                      const SolverConfig& cfg) {
  cfg.validate();
  const int m = int(a.cols());
  SolveResult res;
  res.x_hat = CVector::Zero(m);
  const double y_norm = y.norm();
  if (y_norm == 0.0) return res;

  CVector r = y;
  std::vector<bool> taken(m, false);
  CVector coeffs;
  for (int iter = 0; iter < cfg.k_max; ++iter) {
    const RVector scores = (a.adjoint() * r).cwiseAbs();
    const int pick = argmax_strict(scores, taken);
    if (pick < 0) break;
    taken[pick] = true;
    res.support.push_back(pick);
    coeffs = refit(a, res.support, y);
    r = y;
    for (std::size_t i = 0; i < res.support.size(); ++i)
      r -= coeffs(i) * a.col(res.support[i]);
    res.iterations = iter + 1;
    if (r.norm() <= cfg.residual_tol * y_norm) break;
  }
  for (std::size_t i = 0; i < res.support.size(); ++i)
    res.x_hat(res.support[i], 0) = coeffs(i);
  res.final_residual = r.norm();
  return res;
}

SolveResult somp_solve(const CMatrix& y, const CMatrix& a,
                       const SolverConfig& cfg) {
  cfg.validate();
  const int m = int(a.cols());
  const int p = int(y.cols());
  SolveResult res;
  res.x_hat = CMatrix::Zero(m, p);
  const double y_norm = y.norm();
  if (y_norm == 0.0) return res;

  CMatrix r = y;
  std::vector<bool> taken(m, false);
  CMatrix coeffs;
  for (int iter = 0; iter < cfg.k_max; ++iter) {
    const RVector scores = (a.adjoint() * r).rowwise().squaredNorm();
    const int pick = argmax_strict(scores, taken);
    if (pick < 0) break;
    taken[pick] = true;
    res.support.push_back(pick);

    const int k = int(res.support.size());
    CMatrix a_s(a.rows(), k);
    for (int i = 0; i < k; ++i) a_s.col(i) = a.col(res.support[i]);
    CMatrix gram = a_s.adjoint() * a_s;
    gram.diagonal().array() += kRefitRidge;
    coeffs = Eigen::LDLT<CMatrix>(gram).solve(a_s.adjoint() * y);
    r = y - a_s * coeffs;
    res.iterations = iter + 1;
    if (r.norm() <= cfg.residual_tol * y_norm) break;
  }
  for (std::size_t i = 0; i < res.support.size(); ++i)
    res.x_hat.row(res.support[i]) = coeffs.row(int(i));
  res.final_residual = r.norm();
  return res;
}

SolveResult bomp_solve(const CVector& y, const CMatrix& a,
                       const SolverConfig& cfg) {
  cfg.validate();
  const int m = int(a.cols());
  const int nb = cfg.block_size;
  const int n_blocks = (m + nb - 1) / nb;
  SolveResult res;
  res.x_hat = CVector::Zero(m);
  const double y_norm = y.norm();
  if (y_norm == 0.0) return res;

  CVector r = y;
  std::vector<bool> taken(n_blocks, false);
  std::vector<int> cols;
  CVector coeffs;
  for (int iter = 0; iter < cfg.k_max; ++iter) {
    RVector scores(n_blocks);
    const CVector corr = a.adjoint() * r;
    for (int b = 0; b < n_blocks; ++b) {
      const int start = b * nb;
      const int len = std::min(nb, m - start);
      scores(b) = corr.segment(start, len).squaredNorm();
    }
    const int pick = argmax_strict(scores, taken);
    if (pick < 0) break;
    taken[pick] = true;
    res.support.push_back(pick);
    const int start = pick * nb;
    const int len = std::min(nb, m - start);
    for (int i = 0; i < len; ++i) cols.push_back(start + i);

    coeffs = refit(a, cols, y);
    r = y;
    for (std::size_t i = 0; i < cols.size(); ++i)
      r -= coeffs(i) * a.col(cols[i]);
    res.iterations = iter + 1;
    if (r.norm() <= cfg.residual_tol * y_norm) break;
  }
  for (std::size_t i = 0; i < cols.size(); ++i) res.x_hat(cols[i], 0) = coeffs(i);
  res.final_residual = r.norm();
  return res;
}

namespace {

// Noise-variance floor relative to the average measurement power; keeps the
// E-step well-posed on noise-free instances.
double sigma2_floor(const CMatrix& y, double sigma2) {
  const double power = y.squaredNorm() / double(y.size());
  return std::max(sigma2, 1e-10 * std::max(power, 1e-300));
}

}  // namespace

SolveResult pcsbl_1d(const CVector& y, const CMatrix& a,
                     const SolverConfig& cfg, double sigma2) {
  // Chain coupling is the single-column case of the 2D grid.
  SolverConfig cfg1 = cfg;
  return pcsbl_2d(y, a, cfg1, sigma2);
}

SolveResult pcsbl_2d(const CMatrix& y, const CMatrix& omega,
                     const SolverConfig& cfg, double sigma2) {
  cfg.validate();
  if (y.rows() != omega.rows())
    throw std::invalid_argument("measurement/sensing dimension mismatch");
  if (!y.allFinite() || !omega.allFinite())
    throw std::invalid_argument("non-finite solver input");
  const int m = int(omega.cols());
  const int p = int(y.cols());
  const double beta = cfg.beta_c;
  double s2 = sigma2_floor(y, sigma2);

  const CMatrix gram = omega.adjoint() * omega; // shared across columns
  const CMatrix proj = omega.adjoint() * y;

  RMatrix alpha = RMatrix::Ones(m, p);
  RMatrix energy = RMatrix::Zero(m, p); // E|x_ij|^2 = |m_ij|^2 + Sigma_ii
  CMatrix mean = CMatrix::Zero(m, p);
  RVector fit_terms = RVector::Zero(p); // per-column EM noise-update pieces

  SolveResult res;
  res.converged = false;
  auto neighbor_sum = [&](const RMatrix& v, int i, int j) {
    double s = 0.0;
    if (i > 0) s += v(i - 1, j);
    if (i + 1 < m) s += v(i + 1, j);
    if (j > 0) s += v(i, j - 1);
    if (j + 1 < p) s += v(i, j + 1);
    return s;
  };

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const CMatrix mean_prev = mean;
    const bool update_noise = cfg.noise_mode == NoiseVarMode::kEmEstimated;

    // E-step: independent per-column posteriors given the current precisions.
    const int t_rows = int(omega.rows());
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < p; ++j) {
      RVector d_diag(m);
      for (int i = 0; i < m; ++i) {
        double d = alpha(i, j);
        if (i > 0) d += beta * alpha(i - 1, j);
        if (i + 1 < m) d += beta * alpha(i + 1, j);
        if (j > 0) d += beta * alpha(i, j - 1);
        if (j + 1 < p) d += beta * alpha(i, j + 1);
        d_diag(i) = d;
      }
      RVector sigma_diag(m);
      if (t_rows < m) {
        // Underdetermined case: Woodbury form of
        // Sigma = (gram / s2 + D)^{-1} keeps the factorization at T x T.
        const RVector d_inv = d_diag.cwiseInverse();
        const CMatrix md = omega * d_inv.asDiagonal(); // Omega D^{-1}
        CMatrix kernel = md * omega.adjoint();
        kernel.diagonal().array() += s2;
        Eigen::LDLT<CMatrix> ldlt(kernel);
        const CMatrix w = ldlt.solve(md);
        for (int i = 0; i < m; ++i)
          sigma_diag(i) =
              d_inv(i) - std::real(md.col(i).dot(w.col(i)));
        const CVector v = d_inv.asDiagonal() * proj.col(j);
        mean.col(j) = (v - w.adjoint() * (omega * v)) / s2;
      } else {
        CMatrix h = gram / s2;
        h.diagonal() += d_diag.cast<cplx>();
        Eigen::LDLT<CMatrix> ldlt(h);
        mean.col(j) = ldlt.solve(proj.col(j)) / s2;
        const CMatrix cov = ldlt.solve(CMatrix::Identity(m, m));
        for (int i = 0; i < m; ++i) sigma_diag(i) = std::real(cov(i, i));
      }
      for (int i = 0; i < m; ++i)
        energy(i, j) = std::norm(mean(i, j)) + sigma_diag(i);
      if (update_noise) {
        // Evidence update piece: ||y - Omega m||^2 + s2 * sum_i (1 - d_i Sigma_ii).
        double trace_term = 0.0;
        for (int i = 0; i < m; ++i)
          trace_term += 1.0 - d_diag(i) * sigma_diag(i);
        fit_terms(j) =
            (y.col(j) - omega * mean.col(j)).squaredNorm() + s2 * trace_term;
      }
    }

    // M-step: neighborhood-coupled precision update.
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < m; ++i)
        alpha(i, j) = (cfg.gamma_a + 1.0) /
                      (cfg.gamma_b + energy(i, j) +
                       beta * neighbor_sum(energy, i, j));

    if (update_noise)
      s2 = std::max(fit_terms.sum() / double(y.size()), 1e-14);

    res.iterations = iter + 1;
    const double prev_norm = mean_prev.norm();
    if (prev_norm > 0.0 && (mean - mean_prev).norm() / prev_norm < cfg.tolerance) {
      res.converged = true;
      break;
    }
  }

  res.x_hat = mean;
  res.final_residual = (y - omega * mean).norm();
  return res;
}

double nmse_db(const CMatrix& h_hat, const CMatrix& h) {
  const double denom = h.squaredNorm();
  if (denom == 0.0) throw std::invalid_argument("reference channel is zero");
  const double ratio = (h_hat - h).squaredNorm() / denom;
  if (ratio <= 0.0) return kNmseFloorDb;
  return std::max(10.0 * std::log10(ratio), kNmseFloorDb);
}

}  // namespace xlris
