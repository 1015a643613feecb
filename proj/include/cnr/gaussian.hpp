#ifndef CNR_GAUSSIAN_HPP
#define CNR_GAUSSIAN_HPP

#include <Eigen/Core>

#include "cnr/rng.hpp"

namespace cnr {

/* Lower Cholesky factor L of a symmetric positive-definite matrix,
 * L L^T = m. jitter records any diagonal inflation that was needed to make
 * the factorization succeed (0 for a cleanly positive-definite input). */
struct CholeskyFactor {
  Eigen::MatrixXd lower;
  double jitter = 0.0;

  Eigen::Index dim() const { return lower.rows(); }
  double logdet() const;  // log det(L L^T) = 2 sum log L_ii

  // Solve L z = b.
  Eigen::VectorXd solve_lower(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve_lower(const Eigen::MatrixXd& b) const;
  // Solve (L L^T) x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
};

// Cholesky factorization with bounded jitter recovery: on failure the
// diagonal is inflated by 1e-10 * trace/n, escalating tenfold up to
// 1e-6 * trace/n before giving up. The input must be symmetric to within
// 1e-10 relative asymmetry.
CholeskyFactor cholesky(const Eigen::MatrixXd& m);

// Log-density of N(mean, L L^T) at x, including the -(n/2) log(2 pi)
// constant. Computed through triangular solves; the covariance is never
// inverted explicitly.
double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const CholeskyFactor& chol);

// One draw mean + L z with z i.i.d. standard normal from the given stream.
Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean,
                           const CholeskyFactor& chol, RngStream& rng);

}  // namespace cnr

#endif  // CNR_GAUSSIAN_HPP
