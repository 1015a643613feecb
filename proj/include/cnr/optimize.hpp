#ifndef CNR_OPTIMIZE_HPP
#define CNR_OPTIMIZE_HPP

#include <functional>
#include <optional>

#include <Eigen/Core>

namespace cnr {

struct OptimizerConfig {
  int max_iters = 500;     // per restart
  double rel_tol = 1e-8;   // relative spread of simplex objective values
  int restarts = 2;
  double initial_step = 0.5;
};

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class MaximizeStatus { Converged, MaxIterations, Flat };

struct MaximizeResult {
  Eigen::VectorXd argmax;
  double value = 0.0;
  MaximizeStatus status = MaximizeStatus::Converged;
  int n_evals = 0;
};

// Derivative-free simplex maximization (Nelder-Mead). The returned value is
// never below the objective at init; candidate points are clamped into the
// bounds when given. Positive parameters are expected to be passed on the
// log scale by the caller. Non-finite objective values are treated as -inf;
// throws numeric_error if the objective is non-finite at init.
MaximizeResult maximize(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& init, const OptimizerConfig& cfg = {},
    const std::optional<Bounds>& bounds = std::nullopt);

}  // namespace cnr

#endif  // CNR_OPTIMIZE_HPP
