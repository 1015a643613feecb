#include "cnr/slmm.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "cnr/errors.hpp"

namespace cnr {

namespace {

Eigen::MatrixXd slmm_cov(const Eigen::MatrixXd& dists, double sigma2,
                         double nu, double alpha, double tau_eps) {
  MaternParams p{sigma2, nu, alpha, 0.0};
  Eigen::MatrixXd v = matern_cov_from_distances(dists, p);
  v.diagonal().array() += tau_eps;
  return v;
}

}  // namespace

Eigen::VectorXd gls_coefficients(const Eigen::MatrixXd& b,
                                 const CholeskyFactor& chol_v,
                                 const Eigen::VectorXd& y) {
  const Eigen::MatrixXd bw = chol_v.solve_lower(b);
  const Eigen::VectorXd yw = chol_v.solve_lower(y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bw);
  qr.setThreshold(1e-12);
  if (qr.rank() < b.cols())
    throw numeric_error("gls: singular information matrix");
  return qr.solve(yw);
}

SlmmFit fit_slmm(const Eigen::VectorXd& y, const DesignMatrix& design,
                 const LocationSet& locs, double nu_rho_fixed,
                 const OptimizerConfig& cfg) {
  const Eigen::Index n = y.size();
  if (design.b.rows() != n || static_cast<std::size_t>(n) != locs.size())
    throw std::invalid_argument("fit_slmm: dimension mismatch");
  MaternParams probe{1.0, nu_rho_fixed, 1.0, 0.0};
  probe.validate(locs.metric());

  const Eigen::MatrixXd dists = pairwise_distances(locs);
  const double med_d = median_pairwise_distance(locs);

  // OLS residual variance seeds the two variance components.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.b);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.b.cols())
    throw data_error("fit_slmm: design matrix is rank deficient");
  const Eigen::VectorXd resid = y - design.b * qr.solve(y);
  double rvar = resid.squaredNorm() / std::max<Eigen::Index>(1, n - design.p());
  const double yvar =
      (y.array() - y.mean()).square().sum() / static_cast<double>(n - 1);
  if (!(rvar > 0.0)) rvar = 1e-12 * (1.0 + yvar);

  // Parameters: (log sigma2_rho, log alpha_rho, log tau_eps), beta profiled.
  auto profiled = [&](const Eigen::VectorXd& t, Eigen::VectorXd* beta_out,
                      Eigen::MatrixXd* cov_out) -> double {
    const Eigen::MatrixXd v = slmm_cov(dists, std::exp(t(0)), nu_rho_fixed,
                                       std::exp(t(1)), std::exp(t(2)));
    const CholeskyFactor chol = cholesky(v);
    const Eigen::VectorXd beta = gls_coefficients(design.b, chol, y);
    const Eigen::VectorXd z = chol.solve_lower(Eigen::VectorXd(y - design.b * beta));
    const double ll = -0.5 * static_cast<double>(n) * std::log(2.0 * M_PI) -
                      0.5 * chol.logdet() - 0.5 * z.squaredNorm();
    if (beta_out) *beta_out = beta;
    if (cov_out) {
      const Eigen::MatrixXd bw = chol.solve_lower(design.b);
      const Eigen::MatrixXd info = bw.transpose() * bw;
      Eigen::LLT<Eigen::MatrixXd> llt(info);
      if (llt.info() != Eigen::Success)
        throw numeric_error("fit_slmm: singular information matrix");
      *cov_out = llt.solve(Eigen::MatrixXd::Identity(design.p(), design.p()));
    }
    return ll;
  };
  auto objective = [&](const Eigen::VectorXd& t) -> double {
    try {
      return profiled(t, nullptr, nullptr);
    } catch (const numeric_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd init(3);
  init << std::log(0.5 * rvar), std::log(1.0 / med_d), std::log(0.5 * rvar);
  Bounds bounds;
  bounds.lower.resize(3);
  bounds.upper.resize(3);
  bounds.lower << std::log(rvar) - 18.0, std::log(1.0 / med_d) - 16.0,
      std::log(rvar) - 20.0;
  bounds.upper << std::log(rvar) + 12.0, std::log(1.0 / med_d) + 16.0,
      std::log(rvar) + 12.0;

  const MaximizeResult res = maximize(objective, init, cfg, bounds);

  SlmmFit fit;
  fit.design = design;
  fit.params.sigma2_rho = std::exp(res.argmax(0));
  fit.params.nu_rho = nu_rho_fixed;
  fit.params.alpha_rho = std::exp(res.argmax(1));
  fit.params.tau_eps = std::exp(res.argmax(2));
  fit.loglik = profiled(res.argmax, &fit.params.beta, &fit.naive_cov);
  return fit;
}

Eigen::MatrixXd naive_variance_at(const DesignMatrix& design,
                                  const LocationSet& locs, double sigma2_rho,
                                  double nu_rho, double alpha_rho,
                                  double tau_eps) {
  const Eigen::MatrixXd v = slmm_cov(pairwise_distances(locs), sigma2_rho,
                                     nu_rho, alpha_rho, tau_eps);
  const CholeskyFactor chol = cholesky(v);
  const Eigen::MatrixXd bw = chol.solve_lower(design.b);
  const Eigen::MatrixXd info = bw.transpose() * bw;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success)
    throw numeric_error("naive_variance: singular information matrix");
  return llt.solve(Eigen::MatrixXd::Identity(design.p(), design.p()));
}

Eigen::VectorXd conditional_smoother(const SlmmFit& fit, int k,
                                     const Eigen::VectorXd& x_grid,
                                     const Eigen::VectorXd& c,
                                     std::vector<bool>* extrapolated) {
  const auto& design = fit.design;
  const int n_cov = design.n_covariates();
  if (k < 0 || k >= n_cov)
    throw std::invalid_argument("conditional_smoother: covariate index out of range");
  if (c.size() != n_cov)
    throw std::invalid_argument("conditional_smoother: conditioning vector has wrong length");

  const Eigen::VectorXd& beta = fit.params.beta;
  double base = beta(0);
  for (int l = 0; l < n_cov; ++l) {
    if (l == k) continue;
    const auto [b0, b1] = design.column_range[static_cast<std::size_t>(l)];
    base += basis_eval(design.specs[static_cast<std::size_t>(l)],
                       design.knots[static_cast<std::size_t>(l)], c(l))
                .dot(beta.segment(b0, b1 - b0));
  }

  const auto [k0, k1] = design.column_range[static_cast<std::size_t>(k)];
  const auto& spec = design.specs[static_cast<std::size_t>(k)];
  const auto& knots = design.knots[static_cast<std::size_t>(k)];
  if (extrapolated) extrapolated->assign(static_cast<std::size_t>(x_grid.size()), false);

  Eigen::VectorXd out(x_grid.size());
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    out(i) = base + basis_eval(spec, knots, x_grid(i))
                        .dot(beta.segment(k0, k1 - k0));
    if (extrapolated && spec.kind == BasisSpec::Kind::NaturalCubicSpline &&
        (x_grid(i) < knots(0) || x_grid(i) > knots(knots.size() - 1)))
      (*extrapolated)[static_cast<std::size_t>(i)] = true;
  }
  return out;
}

}  // namespace cnr
