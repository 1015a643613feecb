#include "cnr/gaussian.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "cnr/errors.hpp"

namespace cnr {

double CholeskyFactor::logdet() const {
  return 2.0 * lower.diagonal().array().log().sum();
}

Eigen::VectorXd CholeskyFactor::solve_lower(const Eigen::VectorXd& b) const {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

Eigen::MatrixXd CholeskyFactor::solve_lower(const Eigen::MatrixXd& b) const {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd z = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(z);
}

Eigen::MatrixXd CholeskyFactor::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd z = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(z);
}

CholeskyFactor cholesky(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("cholesky: matrix not square");
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (scale + 1e-300))
    throw std::invalid_argument("cholesky: matrix not symmetric");

  const Eigen::Index n = m.rows();
  const double base = m.trace() / static_cast<double>(n);
  double jitter = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd a = m;
    if (jitter > 0.0) a.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success)
      return CholeskyFactor{Eigen::MatrixXd(llt.matrixL()), jitter};
    jitter = (jitter == 0.0) ? 1e-10 * base : 10.0 * jitter;
    if (jitter > 1e-6 * base * (1.0 + 1e-12)) break;
  }
  throw numeric_error("cholesky: matrix not positive definite after maximum jitter");
}

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const CholeskyFactor& chol) {
  const Eigen::Index n = x.size();
  if (mean.size() != n || chol.dim() != n)
    throw std::invalid_argument("mvn_logpdf: dimension mismatch");
  const Eigen::VectorXd z = chol.solve_lower(x - mean);
  return -0.5 * static_cast<double>(n) * std::log(2.0 * M_PI) -
         0.5 * chol.logdet() - 0.5 * z.squaredNorm();
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean,
                           const CholeskyFactor& chol, RngStream& rng) {
  if (chol.dim() != mean.size())
    throw std::invalid_argument("mvn_sample: dimension mismatch");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + chol.lower.triangularView<Eigen::Lower>() * z;
}

}  // namespace cnr
