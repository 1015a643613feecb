#include "cnr/covariate_field.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "cnr/errors.hpp"

namespace cnr {

bool CrossCorrelation::diag_near_unit(double lo, double hi) const {
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (r(i, i) < lo || r(i, i) > hi) return false;
  return true;
}

void CrossCorrelation::validate() const {
  if (r.rows() != r.cols())
    throw std::invalid_argument("cross-correlation matrix not square");
  const double scale = r.cwiseAbs().maxCoeff() + 1e-300;
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("cross-correlation matrix not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success)
    throw numeric_error("cross-correlation matrix not positive definite");
}

Eigen::VectorXd CovariateFieldParams::means() const {
  Eigen::VectorXd mu(n_covariates());
  for (int k = 0; k < n_covariates(); ++k) mu(k) = marginals[k].mu;
  return mu;
}

void CovariateFieldParams::validate(Metric metric) const {
  if (marginals.empty()) throw std::invalid_argument("no covariate marginals");
  if (cross.r.rows() != n_covariates())
    throw std::invalid_argument("cross-correlation dimension mismatch");
  for (const auto& m : marginals) m.matern.validate(metric);
  cross.validate();
}

double marginal_loglik(const Eigen::VectorXd& x, const Eigen::MatrixXd& dists,
                       const MarginalCovariateParams& p) {
  const Eigen::MatrixXd cov = matern_cov_from_distances(dists, p.matern);
  const CholeskyFactor chol = cholesky(cov);
  return mvn_logpdf(x, Eigen::VectorXd::Constant(x.size(), p.mu), chol);
}

MarginalCovariateParams fit_marginal(const Eigen::VectorXd& x_tilde_k,
                                     const LocationSet& locs, double nu_fixed,
                                     const OptimizerConfig& cfg) {
  const Eigen::Index m = x_tilde_k.size();
  if (static_cast<std::size_t>(m) != locs.size())
    throw std::invalid_argument("fit_marginal: data/location size mismatch");
  if (m < 10) throw std::invalid_argument("fit_marginal: need at least 10 observations");
  MaternParams probe{1.0, nu_fixed, 1.0, 0.0};
  probe.validate(locs.metric());

  const double xbar = x_tilde_k.mean();
  const double xvar =
      (x_tilde_k.array() - xbar).square().sum() / static_cast<double>(m - 1);
  if (!(xvar > 1e-12 * (1.0 + xbar * xbar)))
    throw data_error("fit_marginal: degenerate input (constant covariate)");

  const Eigen::MatrixXd dists = pairwise_distances(locs);
  const double med_d = median_pairwise_distance(locs);

  // Parameters: (mu, log sigma2, log alpha, log tau).
  auto unpack = [&](const Eigen::VectorXd& t) {
    MarginalCovariateParams p;
    p.mu = t(0);
    p.matern = MaternParams{std::exp(t(1)), nu_fixed, std::exp(t(2)), std::exp(t(3))};
    return p;
  };
  auto objective = [&](const Eigen::VectorXd& t) -> double {
    try {
      return marginal_loglik(x_tilde_k, dists, unpack(t));
    } catch (const numeric_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd init(4);
  init << xbar, std::log(0.5 * xvar), std::log(1.0 / med_d), std::log(0.5 * xvar);

  const double sd = std::sqrt(xvar);
  Bounds bounds;
  bounds.lower.resize(4);
  bounds.upper.resize(4);
  bounds.lower << xbar - 50.0 * sd, std::log(xvar) - 18.0,
      std::log(1.0 / med_d) - 16.0, std::log(xvar) - 20.0;
  bounds.upper << xbar + 50.0 * sd, std::log(xvar) + 12.0,
      std::log(1.0 / med_d) + 16.0, std::log(xvar) + 12.0;

  const MaximizeResult res = maximize(objective, init, cfg, bounds);
  return unpack(res.argmax);
}

CrossCorrelation one_step_r(const Eigen::MatrixXd& x_tilde,
                            const std::vector<MarginalCovariateParams>& marginals,
                            const LocationSet& locs, bool standardize) {
  const Eigen::Index m = x_tilde.rows();
  const Eigen::Index k = x_tilde.cols();
  if (static_cast<std::size_t>(m) != locs.size())
    throw std::invalid_argument("one_step_r: data/location size mismatch");
  if (static_cast<Eigen::Index>(marginals.size()) != k)
    throw std::invalid_argument("one_step_r: marginals/covariate count mismatch");

  const Eigen::MatrixXd dists = pairwise_distances(locs);
  Eigen::MatrixXd z(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& p = marginals[static_cast<std::size_t>(j)];
    const CholeskyFactor chol =
        cholesky(matern_cov_from_distances(dists, p.matern));
    z.col(j) = chol.solve_lower(
        Eigen::VectorXd(x_tilde.col(j).array() - p.mu));
  }
  Eigen::MatrixXd r = z.transpose() * z / static_cast<double>(m);
  r = 0.5 * (r + r.transpose());  // restore exact symmetry
  if (standardize) {
    const Eigen::VectorXd d = r.diagonal().array().sqrt().inverse();
    r = d.asDiagonal() * r * d.asDiagonal();
  }
  return CrossCorrelation{std::move(r)};
}

Eigen::MatrixXd assemble_joint_cov(const CovariateFieldParams& params,
                                   const LocationSet& locs_all) {
  params.validate(locs_all.metric());
  const int k = params.n_covariates();
  const Eigen::Index n = static_cast<Eigen::Index>(locs_all.size());
  const Eigen::MatrixXd dists = pairwise_distances(locs_all);

  std::vector<Eigen::MatrixXd> lower(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    lower[static_cast<std::size_t>(j)] =
        cholesky(matern_cov_from_distances(dists, params.marginals[j].matern))
            .lower;

  Eigen::MatrixXd joint(k * n, k * n);
  for (int k1 = 0; k1 < k; ++k1)
    for (int k2 = 0; k2 <= k1; ++k2) {
      const Eigen::MatrixXd block = params.cross.r(k1, k2) *
                                    (lower[k1] * lower[k2].transpose());
      joint.block(k1 * n, k2 * n, n, n) = block;
      if (k1 != k2) joint.block(k2 * n, k1 * n, n, n) = block.transpose();
    }
  return joint;
}

Eigen::VectorXd factored_precision_apply(const CovariateFieldParams& params,
                                         const LocationSet& locs,
                                         const Eigen::VectorXd& v) {
  const int k = params.n_covariates();
  const Eigen::Index m = static_cast<Eigen::Index>(locs.size());
  if (v.size() != k * m)
    throw std::invalid_argument("factored_precision_apply: dimension mismatch");
  const Eigen::MatrixXd dists = pairwise_distances(locs);

  Eigen::MatrixXd z(m, k);
  std::vector<CholeskyFactor> chols;
  chols.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    chols.push_back(
        cholesky(matern_cov_from_distances(dists, params.marginals[j].matern)));
    z.col(j) = chols.back().solve_lower(Eigen::VectorXd(v.segment(j * m, m)));
  }

  // (R^{-1} x I) applied across the K columns.
  Eigen::LLT<Eigen::MatrixXd> r_llt(params.cross.r);
  if (r_llt.info() != Eigen::Success)
    throw numeric_error("cross-correlation matrix not positive definite");
  const Eigen::MatrixXd w = r_llt.solve(z.transpose()).transpose();

  Eigen::VectorXd out(k * m);
  for (int j = 0; j < k; ++j)
    out.segment(j * m, m) = chols[static_cast<std::size_t>(j)]
                                .lower.transpose()
                                .triangularView<Eigen::Upper>()
                                .solve(Eigen::VectorXd(w.col(j)));
  return out;
}

}  // namespace cnr
