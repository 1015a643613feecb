#include "cnr/pipeline.hpp"

namespace cnr {

CnrFit cnr_fit(const MisalignedDataset& data,
               const std::vector<BasisSpec>& specs, const CnrOptions& opts,
               const std::vector<Eigen::VectorXd>* knots_in) {
  data.validate();
  if (static_cast<int>(specs.size()) != data.k())
    throw std::invalid_argument("cnr_fit: one basis spec per covariate required");

  CnrFit fit;
  fit.theta_x.marginals.reserve(static_cast<std::size_t>(data.k()));
  for (int k = 0; k < data.k(); ++k)
    fit.theta_x.marginals.push_back(fit_marginal(
        data.x_tilde.col(k), data.locs_covariates, opts.nu_x_fixed,
        opts.optimizer));
  fit.theta_x.cross =
      one_step_r(data.x_tilde, fit.theta_x.marginals, data.locs_covariates,
                 opts.standardize_r);

  fit.x_hat = cokrige_marginal(fit.theta_x, data.x_tilde, data.locs_covariates,
                               data.locs_response)
                  .values;

  const DesignMatrix design = build_design(fit.x_hat, specs, knots_in);
  fit.slmm = fit_slmm(data.y, design, data.locs_response, opts.nu_rho_fixed,
                      opts.optimizer);
  return fit;
}

}  // namespace cnr
