#include "cnr/cokrige.hpp"

#include <cmath>
#include <vector>

#include "cnr/errors.hpp"

namespace cnr {

namespace {
constexpr Eigen::Index kTargetBatch = 2048;
}

CokrigePrediction cokrige_marginal(const CovariateFieldParams& params,
                                   const Eigen::MatrixXd& obs,
                                   const LocationSet& locs_obs,
                                   const LocationSet& locs_target) {
  params.validate(locs_obs.metric());
  const int k = params.n_covariates();
  const Eigen::Index m = static_cast<Eigen::Index>(locs_obs.size());
  const Eigen::Index n = static_cast<Eigen::Index>(locs_target.size());
  if (obs.rows() != m || obs.cols() != k)
    throw std::invalid_argument("cokrige: observation matrix has wrong shape");

  const Eigen::MatrixXd obs_dists = pairwise_distances(locs_obs);

  // Per covariate: one M x M factorization, then batched cross-covariances.
  Eigen::MatrixXd weights(m, k);
  for (int j = 0; j < k; ++j) {
    const auto& p = params.marginals[static_cast<std::size_t>(j)];
    const CholeskyFactor chol =
        cholesky(matern_cov_from_distances(obs_dists, p.matern));
    weights.col(j) = chol.solve(Eigen::VectorXd(obs.col(j).array() - p.mu));
  }

  Eigen::MatrixXd values(n, k);
  Eigen::MatrixXd batch_d(std::min(kTargetBatch, n), m);
  for (Eigen::Index start = 0; start < n; start += kTargetBatch) {
    const Eigen::Index rows = std::min(kTargetBatch, n - start);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index jj = 0; jj < m; ++jj)
        batch_d(i, jj) = distance(locs_target[static_cast<std::size_t>(start + i)],
                                  locs_obs[static_cast<std::size_t>(jj)],
                                  locs_obs.metric());
    for (int j = 0; j < k; ++j) {
      const auto& p = params.marginals[static_cast<std::size_t>(j)];
      const Eigen::MatrixXd cross =
          matern_cross_cov_from_distances(batch_d.topRows(rows), p.matern);
      values.col(j).segment(start, rows) =
          (cross * weights.col(j)).array() + p.mu;
    }
  }
  return CokrigePrediction{std::move(values), locs_target};
}

CokrigePrediction cokrige_joint(const CovariateFieldParams& params,
                                const Eigen::MatrixXd& obs,
                                const LocationSet& locs_obs,
                                const LocationSet& locs_target) {
  params.validate(locs_obs.metric());
  const int k = params.n_covariates();
  const Eigen::Index m = static_cast<Eigen::Index>(locs_obs.size());
  const Eigen::Index n = static_cast<Eigen::Index>(locs_target.size());
  if (obs.rows() != m || obs.cols() != k)
    throw std::invalid_argument("cokrige: observation matrix has wrong shape");

  // Cholesky of each covariate's covariance over the stacked
  // (observed, target) locations; its bottom-left block carries the
  // cross-covariance structure used below.
  const LocationSet locs_all = concat(locs_obs, locs_target);
  const Eigen::MatrixXd all_dists = pairwise_distances(locs_all);
  std::vector<Eigen::MatrixXd> lower(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    lower[static_cast<std::size_t>(j)] =
        cholesky(matern_cov_from_distances(all_dists,
                                           params.marginals[j].matern))
            .lower;

  // Whitened observation deviations via the factored precision.
  Eigen::VectorXd u(k * m);
  for (int j = 0; j < k; ++j)
    u.segment(j * m, m) = obs.col(j).array() - params.marginals[j].mu;
  const Eigen::VectorXd w = factored_precision_apply(params, locs_obs, u);

  // Prediction block k1 = mu_{k1} + sum_{k2} r_{k1 k2} (L_{k1} L_{k2}^T)_{TS} w_{k2}.
  Eigen::MatrixXd values(n, k);
  for (int k1 = 0; k1 < k; ++k1) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (int k2 = 0; k2 < k; ++k2) {
      const Eigen::MatrixXd cross_ts =
          lower[static_cast<std::size_t>(k1)].bottomRows(n) *
          lower[static_cast<std::size_t>(k2)].topRows(m).transpose();
      acc += params.cross.r(k1, k2) * (cross_ts * w.segment(k2 * m, m));
    }
    values.col(k1) = acc.array() + params.marginals[k1].mu;
  }
  return CokrigePrediction{std::move(values), locs_target};
}

LocationSet prediction_grid(const BoundingBox& bbox, double cell,
                            Metric metric) {
  if (!(cell > 0.0)) throw std::invalid_argument("grid cell must be > 0");
  if (!(bbox.lon_max > bbox.lon_min) || !(bbox.lat_max > bbox.lat_min))
    throw std::invalid_argument("degenerate bounding box");
  const auto n_lon = static_cast<Eigen::Index>(
      std::ceil((bbox.lon_max - bbox.lon_min) / cell));
  const auto n_lat = static_cast<Eigen::Index>(
      std::ceil((bbox.lat_max - bbox.lat_min) / cell));
  if (n_lon <= 0 || n_lat <= 0) throw data_error("empty prediction grid");

  std::vector<Location> pts;
  pts.reserve(static_cast<std::size_t>(n_lon * n_lat));
  for (Eigen::Index i = 0; i < n_lat; ++i)
    for (Eigen::Index j = 0; j < n_lon; ++j)
      pts.push_back(Location{bbox.lon_min + (static_cast<double>(j) + 0.5) * cell,
                             bbox.lat_min + (static_cast<double>(i) + 0.5) * cell});
  return LocationSet(std::move(pts), metric);
}

}  // namespace cnr
