#include "cnr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cnr/errors.hpp"

namespace cnr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd clamp_to(const Eigen::VectorXd& x,
                         const std::optional<Bounds>& bounds) {
  if (!bounds) return x;
  return x.cwiseMax(bounds->lower).cwiseMin(bounds->upper);
}

}  // namespace

MaximizeResult maximize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& init, const OptimizerConfig& cfg,
    const std::optional<Bounds>& bounds) {
  const Eigen::Index n = init.size();
  if (n == 0) throw std::invalid_argument("maximize: empty parameter vector");
  if (bounds && (bounds->lower.size() != n || bounds->upper.size() != n))
    throw std::invalid_argument("maximize: bounds dimension mismatch");

  int n_evals = 0;
  bool saw_variation = false;
  double f_ref = std::numeric_limits<double>::quiet_NaN();
  auto eval = [&](const Eigen::VectorXd& x) {
    ++n_evals;
    double f = objective(x);
    if (!std::isfinite(f)) f = kNegInf;
    if (!std::isnan(f_ref) && f != f_ref) saw_variation = true;
    return f;
  };

  const Eigen::VectorXd x_init = clamp_to(init, bounds);
  const double f_init = eval(x_init);
  if (f_init == kNegInf)
    throw numeric_error("maximize: objective not finite at initial point");
  f_ref = f_init;

  Eigen::VectorXd best_x = x_init;
  double best_f = f_init;
  MaximizeStatus status = MaximizeStatus::MaxIterations;

  double step = cfg.initial_step;
  for (int restart = 0; restart <= std::max(0, cfg.restarts); ++restart) {
    // Simplex around the incumbent.
    std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(n) + 1, best_x);
    std::vector<double> fs(xs.size());
    fs[0] = best_f;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd v = best_x;
      const double h = step * std::max(1.0, std::abs(best_x(i)));
      v(i) += h;
      v = clamp_to(v, bounds);
      if ((v - best_x).norm() == 0.0) {
        v(i) -= h;
        v = clamp_to(v, bounds);
      }
      xs[static_cast<std::size_t>(i) + 1] = v;
      fs[static_cast<std::size_t>(i) + 1] = eval(v);
    }

    constexpr double kAlpha = 1.0;  // reflection
    constexpr double kGamma = 2.0;  // expansion
    constexpr double kRho = 0.5;    // contraction
    constexpr double kSigma = 0.5;  // shrink

    std::vector<std::size_t> ord(xs.size());
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      std::iota(ord.begin(), ord.end(), std::size_t{0});
      std::sort(ord.begin(), ord.end(),
                [&](std::size_t a, std::size_t b) { return fs[a] > fs[b]; });
      const std::size_t ibest = ord.front();
      const std::size_t iworst = ord.back();
      const std::size_t isecond = ord[ord.size() - 2];

      if (fs[ibest] > best_f) {
        best_f = fs[ibest];
        best_x = xs[ibest];
      }

      const double spread = fs[ibest] - fs[iworst];
      if (std::isfinite(spread) &&
          spread <= cfg.rel_tol * (std::abs(fs[ibest]) + std::abs(fs[iworst]) +
                                   cfg.rel_tol)) {
        status = MaximizeStatus::Converged;
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (j != iworst) centroid += xs[j];
      centroid /= static_cast<double>(n);

      const Eigen::VectorXd xr =
          clamp_to(centroid + kAlpha * (centroid - xs[iworst]), bounds);
      const double fr = eval(xr);

      if (fr > fs[ibest]) {
        const Eigen::VectorXd xe =
            clamp_to(centroid + kGamma * (xr - centroid), bounds);
        const double fe = eval(xe);
        if (fe > fr) {
          xs[iworst] = xe;
          fs[iworst] = fe;
        } else {
          xs[iworst] = xr;
          fs[iworst] = fr;
        }
      } else if (fr > fs[isecond]) {
        xs[iworst] = xr;
        fs[iworst] = fr;
      } else {
        const bool outside = fr > fs[iworst];
        const Eigen::VectorXd xc = clamp_to(
            centroid + kRho * ((outside ? xr : xs[iworst]) - centroid), bounds);
        const double fc = eval(xc);
        if (fc > (outside ? fr : fs[iworst])) {
          xs[iworst] = xc;
          fs[iworst] = fc;
        } else {
          for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == ibest) continue;
            xs[j] = clamp_to(xs[ibest] + kSigma * (xs[j] - xs[ibest]), bounds);
            fs[j] = eval(xs[j]);
          }
        }
      }
    }

    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (fs[j] > best_f) {
        best_f = fs[j];
        best_x = xs[j];
      }
    }
    step *= 0.5;  // tighter probe on each restart
  }

  if (!saw_variation) {
    // Every evaluation matched the initial value: flat objective.
    return MaximizeResult{x_init, f_init, MaximizeStatus::Flat, n_evals};
  }
  return MaximizeResult{best_x, best_f, status, n_evals};
}

}  // namespace cnr
