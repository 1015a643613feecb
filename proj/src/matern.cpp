#include "cnr/matern.hpp"

#include <cmath>

#include "cnr/errors.hpp"

namespace cnr {

namespace {

bool is_half_integer(double nu) {
  double two_nu = 2.0 * nu;
  return std::abs(two_nu - std::round(two_nu)) < 1e-12 &&
         std::abs(nu - std::round(nu)) > 0.25;
}

// K_{n+1/2}(x) = sqrt(pi/(2x)) e^{-x} * sum_{j=0}^{n} (n+j)!/(j!(n-j)!) (2x)^{-j}
double bessel_k_half_integer(int n, double x) {
  double poly = 0.0;
  double c = 1.0;  // c_j = (n+j)! / (j! (n-j)!)
  for (int j = 0; j <= n; ++j) {
    if (j > 0) c *= static_cast<double>((n + j) * (n - j + 1)) / j;
    poly += c / std::pow(2.0 * x, j);
  }
  return std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) * poly;
}

}  // namespace

void MaternParams::validate(Metric metric) const {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("matern sigma2 must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("matern nu must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("matern alpha must be > 0");
  if (!(tau >= 0.0)) throw std::invalid_argument("matern tau must be >= 0");
  if (metric == Metric::GreatCircleKm && nu > 0.5)
    throw std::invalid_argument(
        "nu must be <= 0.5 under great-circle distance");
}

double modified_bessel_k(double nu, double x) {
  if (!(nu > 0.0)) throw std::invalid_argument("bessel K: nu must be > 0");
  if (!(x > 0.0)) throw std::invalid_argument("bessel K: x must be > 0");
  if (is_half_integer(nu)) {
    int n = static_cast<int>(std::round(nu - 0.5));
    return bessel_k_half_integer(n, x);
  }
  double v = std::cyl_bessel_k(nu, x);
  if (std::isnan(v)) throw numeric_error("bessel K evaluation failed");
  return v;
}

double matern_correlation(double d, double nu, double alpha) {
  if (d < 0.0) throw std::invalid_argument("matern: negative distance");
  if (!(nu > 0.0) || !(alpha > 0.0))
    throw std::invalid_argument("matern: nu and alpha must be > 0");
  if (d == 0.0) return 1.0;
  const double z = alpha * d;
  if (nu == 0.5) return std::exp(-z);      // exponential kernel
  if (nu == 1.5) return (1.0 + z) * std::exp(-z);
  if (nu == 2.5) return (1.0 + z + z * z / 3.0) * std::exp(-z);
  double m = std::exp((1.0 - nu) * std::log(2.0) + nu * std::log(z) -
                      std::lgamma(nu)) *
             modified_bessel_k(nu, z);
  if (!std::isfinite(m)) return 1.0;  // overflow only occurs in the z -> 0 limit
  return std::min(m, 1.0);
}

Eigen::MatrixXd matern_cov_from_distances(const Eigen::MatrixXd& d,
                                          const MaternParams& p) {
  if (d.rows() != d.cols())
    throw std::invalid_argument("square distance matrix expected");
  Eigen::MatrixXd c(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    c(i, i) = p.sigma2 + p.tau;
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      c(i, j) = p.sigma2 * matern_correlation(d(i, j), p.nu, p.alpha);
      c(j, i) = c(i, j);
    }
  }
  return c;
}

Eigen::MatrixXd matern_cov(const LocationSet& locs, const MaternParams& p) {
  p.validate(locs.metric());
  return matern_cov_from_distances(pairwise_distances(locs), p);
}

Eigen::MatrixXd matern_cross_cov_from_distances(const Eigen::MatrixXd& d,
                                                const MaternParams& p) {
  Eigen::MatrixXd c(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      c(i, j) = p.sigma2 * matern_correlation(d(i, j), p.nu, p.alpha);
  return c;
}

Eigen::MatrixXd matern_cross_cov(const LocationSet& a, const LocationSet& b,
                                 const MaternParams& p) {
  p.validate(a.metric());
  return matern_cross_cov_from_distances(cross_distances(a, b), p);
}

}  // namespace cnr
