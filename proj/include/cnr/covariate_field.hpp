#ifndef CNR_COVARIATE_FIELD_HPP
#define CNR_COVARIATE_FIELD_HPP

#include <vector>

#include <Eigen/Core>

#include "cnr/gaussian.hpp"
#include "cnr/matern.hpp"
#include "cnr/optimize.hpp"

namespace cnr {

// Marginal law of one covariate field: constant mean plus Matern covariance
// with nugget.
struct MarginalCovariateParams {
  double mu = 0.0;
  MaternParams matern;
};

/* Cross-correlation matrix R between the K covariate fields. The one-step
 * estimator returns a symmetric positive-semidefinite matrix that is close
 * to, but not exactly, a correlation matrix; diag_near_unit() is the soft
 * sanity check callers may warn on. */
struct CrossCorrelation {
  Eigen::MatrixXd r;

  Eigen::Index k() const { return r.rows(); }
  bool diag_near_unit(double lo = 0.8, double hi = 1.2) const;
  void validate() const;  // symmetry to 1e-12 and positive definiteness
};

// Joint law of all K covariates: marginals tied together by the generalized
// Kronecker product covariance Bdiag(L_1..L_K) (R x I) Bdiag(L_1..L_K)^T,
// which preserves each marginal covariance exactly.
struct CovariateFieldParams {
  std::vector<MarginalCovariateParams> marginals;
  CrossCorrelation cross;

  int n_covariates() const { return static_cast<int>(marginals.size()); }
  Eigen::VectorXd means() const;
  void validate(Metric metric) const;
};

// Gaussian log-likelihood of one covariate vector under its marginal law,
// from a precomputed distance matrix. Exposed for score diagnostics and
// grid-search cross-checks.
double marginal_loglik(const Eigen::VectorXd& x, const Eigen::MatrixXd& dists,
                       const MarginalCovariateParams& p);

// Maximum-likelihood fit of one marginal covariate law with the smoothness
// held at nu_fixed. The mean is optimized jointly with the covariance
// parameters; positive parameters are handled on the log scale.
MarginalCovariateParams fit_marginal(const Eigen::VectorXd& x_tilde_k,
                                     const LocationSet& locs, double nu_fixed,
                                     const OptimizerConfig& cfg = {});

/* One-step estimator of the cross-correlation matrix given fitted marginals:
 *   Rhat = (1/M) Z^T Z,  column k of Z = L_k^{-1} (x_k - mu_k 1),
 * the closed-form maximizer of the joint likelihood profiled over R.
 * Positive semidefinite by construction. Not rescaled to unit diagonal
 * unless standardize is set. */
CrossCorrelation one_step_r(const Eigen::MatrixXd& x_tilde,
                            const std::vector<MarginalCovariateParams>& marginals,
                            const LocationSet& locs, bool standardize = false);

// Dense K*n x K*n joint covariance over one location set (typically the
// stacked observed-then-target set), block (k1,k2) = r_{k1 k2} L_{k1} L_{k2}^T.
// Vector ordering is covariate-major: (x_1^T, ..., x_K^T)^T.
Eigen::MatrixXd assemble_joint_cov(const CovariateFieldParams& params,
                                   const LocationSet& locs_all);

// Applies the joint precision to a covariate-major stacked vector using only
// per-covariate triangular solves and one K x K solve; the K*M x K*M inverse
// is never formed.
Eigen::VectorXd factored_precision_apply(const CovariateFieldParams& params,
                                         const LocationSet& locs,
                                         const Eigen::VectorXd& v);

}  // namespace cnr

#endif  // CNR_COVARIATE_FIELD_HPP
