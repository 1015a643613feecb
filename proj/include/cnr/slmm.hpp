#ifndef CNR_SLMM_HPP
#define CNR_SLMM_HPP

#include <vector>

#include <Eigen/Core>

#include "cnr/basis.hpp"
#include "cnr/gaussian.hpp"
#include "cnr/matern.hpp"
#include "cnr/optimize.hpp"

namespace cnr {

/* Parameters of the spatial linear mixed model
 *   y = B beta + rho + eps,
 * rho a mean-zero Gaussian field with Matern covariance
 * sigma2_rho M(d; nu_rho, alpha_rho) and eps i.i.d. N(0, tau_eps).
 * nu_rho is held fixed during fitting. */
struct SlmmParams {
  Eigen::VectorXd beta;
  double sigma2_rho = 1.0;
  double nu_rho = 0.5;
  double alpha_rho = 1.0;
  double tau_eps = 1.0;
};

struct SlmmFit {
  SlmmParams params;
  Eigen::MatrixXd naive_cov;  // {B^T (Sigma_rho + tau_eps I)^{-1} B}^{-1}
  double loglik = 0.0;
  DesignMatrix design;
};

// Generalized least squares coefficients {B^T V^{-1} B}^{-1} B^T V^{-1} y
// for V = L L^T.
Eigen::VectorXd gls_coefficients(const Eigen::MatrixXd& b,
                                 const CholeskyFactor& chol_v,
                                 const Eigen::VectorXd& y);

/* Maximum-likelihood fit: the covariance parameters maximize the likelihood
 * profiled over beta (beta is the GLS solution at each candidate
 * covariance), searched on the log scale by the simplex optimizer.
 * Initialization: sigma2_rho = tau_eps = var(OLS residuals)/2,
 * alpha_rho = 1/median pairwise distance. */
SlmmFit fit_slmm(const Eigen::VectorXd& y, const DesignMatrix& design,
                 const LocationSet& locs, double nu_rho_fixed = 0.5,
                 const OptimizerConfig& cfg = {});

// The coefficient covariance ignoring covariate-prediction uncertainty,
// evaluated at the supplied spatial parameters (callers may pass
// bias-corrected values).
Eigen::MatrixXd naive_variance_at(const DesignMatrix& design,
                                  const LocationSet& locs, double sigma2_rho,
                                  double nu_rho, double alpha_rho,
                                  double tau_eps);

inline const Eigen::MatrixXd& naive_variance(const SlmmFit& fit) {
  return fit.naive_cov;
}

// The fitted response curve in covariate k over x_grid with the other
// covariates held at the conditioning values c:
//   beta_0 + f_k(x)^T beta_k + sum_{l != k} f_l(c_l)^T beta_l.
// Grid points beyond the spline boundary knots are flagged when
// `extrapolated` is supplied.
Eigen::VectorXd conditional_smoother(const SlmmFit& fit, int k,
                                     const Eigen::VectorXd& x_grid,
                                     const Eigen::VectorXd& c,
                                     std::vector<bool>* extrapolated = nullptr);

}  // namespace cnr

#endif  // CNR_SLMM_HPP
