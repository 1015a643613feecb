#ifndef CNR_PIPELINE_HPP
#define CNR_PIPELINE_HPP

#include <vector>

#include "cnr/cokrige.hpp"
#include "cnr/dataset.hpp"
#include "cnr/slmm.hpp"

namespace cnr {

struct CnrOptions {
  double nu_x_fixed = 0.5;
  double nu_rho_fixed = 0.5;
  OptimizerConfig optimizer;
  bool standardize_r = false;
};

// Output of the three-step cokrig-and-regress pipeline on one dataset.
struct CnrFit {
  CovariateFieldParams theta_x;
  Eigen::MatrixXd x_hat;  // cokriged covariates at the response locations
  SlmmFit slmm;
};

/* Cokrig-and-regress: (1) fit each covariate's marginal law and the one-step
 * cross-correlation matrix, (2) cokrige the covariates onto the response
 * locations, (3) fit the spatial linear mixed model on the predictions.
 * Spline knots come from the cokriged values unless knots_in pins them. */
CnrFit cnr_fit(const MisalignedDataset& data,
               const std::vector<BasisSpec>& specs, const CnrOptions& opts = {},
               const std::vector<Eigen::VectorXd>* knots_in = nullptr);

}  // namespace cnr

#endif  // CNR_PIPELINE_HPP
