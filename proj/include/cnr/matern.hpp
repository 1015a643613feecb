#ifndef CNR_MATERN_HPP
#define CNR_MATERN_HPP

#include <Eigen/Core>

#include "cnr/geo.hpp"

namespace cnr {

/* Parameters of a Matern covariance with nugget,
 *   Cov(d) = sigma2 * M(d; nu, alpha) + tau * 1{same point},
 * where M(d; nu, alpha) = 2^{1-nu} (alpha d)^nu K_nu(alpha d) / Gamma(nu).
 * nu is the smoothness (held fixed during fitting), alpha the inverse range
 * in 1/distance units, tau the nugget variance. */
struct MaternParams {
  double sigma2 = 1.0;
  double nu = 0.5;
  double alpha = 1.0;
  double tau = 0.0;

  // Positivity, and nu <= 0.5 under great-circle distance (positive
  // definiteness on the sphere).
  void validate(Metric metric) const;
};

// Modified Bessel function of the second kind K_nu(x), nu > 0, x > 0.
// Half-integer orders use the closed forms; otherwise defers to the
// standard-library implementation. Relative accuracy is well below 1e-10
// on nu in (0, 5], x in (1e-8, 50].
double modified_bessel_k(double nu, double x);

// Matern correlation M(d; nu, alpha); equals 1 at d = 0 by continuity and
// exp(-alpha d) exactly at nu = 1/2.
double matern_correlation(double d, double nu, double alpha);

// Square covariance matrix of one location set; the nugget enters the
// diagonal only.
Eigen::MatrixXd matern_cov(const LocationSet& locs, const MaternParams& p);

// Same, but from a precomputed symmetric distance matrix (hot path for
// repeated fits over fixed locations).
Eigen::MatrixXd matern_cov_from_distances(const Eigen::MatrixXd& d,
                                          const MaternParams& p);

// Cross-covariance between two location sets. Points of a and b are always
// treated as distinct, so the nugget never applies even at zero distance.
Eigen::MatrixXd matern_cross_cov(const LocationSet& a, const LocationSet& b,
                                 const MaternParams& p);

Eigen::MatrixXd matern_cross_cov_from_distances(const Eigen::MatrixXd& d,
                                                const MaternParams& p);

}  // namespace cnr

#endif  // CNR_MATERN_HPP
