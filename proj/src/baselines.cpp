#include "cnr/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "cnr/errors.hpp"

namespace cnr {

Eigen::MatrixXd nmr_impute(const Eigen::MatrixXd& obs,
                           const LocationSet& locs_obs,
                           const LocationSet& locs_target,
                           const NmrConfig& cfg) {
  const Eigen::Index m = static_cast<Eigen::Index>(locs_obs.size());
  const Eigen::Index n = static_cast<Eigen::Index>(locs_target.size());
  if (obs.rows() != m)
    throw std::invalid_argument("nmr_impute: observation matrix size mismatch");
  if (cfg.l < 1 || cfg.l > m)
    throw std::invalid_argument("nmr_impute: L must be in [1, M]");
  if (cfg.metric != locs_obs.metric())
    throw std::invalid_argument("nmr_impute: config metric differs from the location sets");

  Eigen::MatrixXd out(n, obs.cols());
  std::vector<std::pair<double, Eigen::Index>> dist_idx(
      static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j)
      dist_idx[static_cast<std::size_t>(j)] = {
          distance(locs_target[static_cast<std::size_t>(i)],
                   locs_obs[static_cast<std::size_t>(j)], cfg.metric),
          j};
    // (distance, station index) ordering makes tie-breaking deterministic.
    std::partial_sort(dist_idx.begin(), dist_idx.begin() + cfg.l,
                      dist_idx.end());
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(obs.cols());
    for (int j = 0; j < cfg.l; ++j)
      acc += obs.row(dist_idx[static_cast<std::size_t>(j)].second);
    out.row(i) = acc / static_cast<double>(cfg.l);
  }
  return out;
}

SlmmFit nmr_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& obs,
                const LocationSet& locs_obs, const LocationSet& locs_target,
                const NmrConfig& cfg, const std::vector<BasisSpec>& specs,
                double nu_rho_fixed, const OptimizerConfig& opt) {
  const Eigen::MatrixXd imputed = nmr_impute(obs, locs_obs, locs_target, cfg);
  const DesignMatrix design = build_design(imputed, specs);
  return fit_slmm(y, design, locs_target, nu_rho_fixed, opt);
}

}  // namespace cnr
