#ifndef CNR_COKRIGE_HPP
#define CNR_COKRIGE_HPP

#include <Eigen/Core>

#include "cnr/covariate_field.hpp"

namespace cnr {

// Cokriged covariate values: row i of values holds the K predictions at
// target_locs[i].
struct CokrigePrediction {
  Eigen::MatrixXd values;
  LocationSet target_locs;
};

/* Conditional-mean prediction of the covariates at the target locations
 * given the observed vectors, computed one covariate at a time:
 *   xhat_k = mu_k 1 + Sigma_{k,TS} Sigma_{k,S}^{-1} (x_k - mu_k 1).
 * Under the generalized Kronecker product model this equals the joint
 * prediction exactly, while touching only M x M and M x batch matrices.
 * This is the default execution path; targets are processed in batches so
 * large grids never materialize a full cross-covariance. */
CokrigePrediction cokrige_marginal(const CovariateFieldParams& params,
                                   const Eigen::MatrixXd& obs,
                                   const LocationSet& locs_obs,
                                   const LocationSet& locs_target);

// The joint-covariance route through the stacked observed+target law. Kept
// for cross-checking the marginal path and for future non-Kronecker models.
CokrigePrediction cokrige_joint(const CovariateFieldParams& params,
                                const Eigen::MatrixXd& obs,
                                const LocationSet& locs_obs,
                                const LocationSet& locs_target);

struct BoundingBox {
  double lon_min = 0.0;
  double lon_max = 0.0;
  double lat_min = 0.0;
  double lat_max = 0.0;
};

// Pixel centers of a regular grid over the box, row-major with longitude
// varying fastest; count = ceil(dlon/cell) * ceil(dlat/cell).
LocationSet prediction_grid(const BoundingBox& bbox, double cell,
                            Metric metric = Metric::GreatCircleKm);

}  // namespace cnr

#endif  // CNR_COKRIGE_HPP
