#ifndef CNR_BASELINES_HPP
#define CNR_BASELINES_HPP

#include <Eigen/Core>

#include "cnr/slmm.hpp"

namespace cnr {

// Nearest-matching config: each unobserved covariate is imputed as the
// unweighted mean over the L nearest observed stations.
struct NmrConfig {
  int l = 5;
  Metric metric = Metric::Euclidean;
};

// L-nearest-neighbor imputation of the M x K observation matrix onto the
// target locations. Distance ties are broken by station index order.
Eigen::MatrixXd nmr_impute(const Eigen::MatrixXd& obs,
                           const LocationSet& locs_obs,
                           const LocationSet& locs_target,
                           const NmrConfig& cfg);

// Impute, then fit the spatial linear mixed model on the imputed covariates.
SlmmFit nmr_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& obs,
                const LocationSet& locs_obs, const LocationSet& locs_target,
                const NmrConfig& cfg, const std::vector<BasisSpec>& specs,
                double nu_rho_fixed = 0.5, const OptimizerConfig& opt = {});

}  // namespace cnr

#endif  // CNR_BASELINES_HPP
