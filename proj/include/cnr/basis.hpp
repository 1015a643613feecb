#ifndef CNR_BASIS_HPP
#define CNR_BASIS_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

namespace cnr {

// Basis expansion applied to one covariate inside the regression.
struct BasisSpec {
  enum class Kind { Linear, Polynomial, NaturalCubicSpline };

  Kind kind = Kind::Linear;
  int degree = 1;             // Polynomial only, >= 1
  int n_interior_knots = 4;   // NaturalCubicSpline only, >= 1

  int dim() const;  // columns contributed to the design matrix

  static BasisSpec linear() { return {}; }
  static BasisSpec polynomial(int degree);
  static BasisSpec natural_cubic_spline(int n_interior_knots);
};

/* Regression design matrix: an intercept column of ones followed by the
 * per-covariate basis blocks. Knot vectors (boundary plus interior, sorted)
 * are recorded so refits on new data can reuse them verbatim. */
struct DesignMatrix {
  Eigen::MatrixXd b;
  std::vector<BasisSpec> specs;
  std::vector<std::pair<int, int>> column_range;  // [begin, end) per covariate
  std::vector<Eigen::VectorXd> knots;             // empty unless spline

  int p() const { return static_cast<int>(b.cols()); }
  int n_covariates() const { return static_cast<int>(specs.size()); }
};

// Basis evaluation plan without data: the specs plus frozen knots. Used to
// rebuild design rows for new covariate values (smoothers, simulated data).
struct DesignRule {
  std::vector<BasisSpec> specs;
  std::vector<Eigen::VectorXd> knots;
};

// f_k(x) for one covariate.
Eigen::VectorXd basis_eval(const BasisSpec& spec, const Eigen::VectorXd& knots,
                           double x);

/* Builds the design matrix from an N x K covariate matrix. When knots_in is
 * absent, spline knots are placed at the interior quantiles of each column
 * (j/(m+1) for j = 1..m) with boundary knots at the min and max, and the
 * result is recorded; when present they are used verbatim. Throws on
 * duplicate knots, too few rows (N >= p + 5), or a rank-deficient design,
 * naming the offending columns. */
DesignMatrix build_design(const Eigen::MatrixXd& x_hat,
                          const std::vector<BasisSpec>& specs,
                          const std::vector<Eigen::VectorXd>* knots_in = nullptr);

// Design matrix evaluation only (no identifiability or rank checks); for
// generator-side use where the matrix is only multiplied, never inverted.
Eigen::MatrixXd design_matrix_from_rule(const Eigen::MatrixXd& x,
                                        const DesignRule& rule);

// Human-readable name of design column j ("intercept", "x2^3", "x1:ns4").
std::string design_column_name(const std::vector<BasisSpec>& specs, int j);

}  // namespace cnr

#endif  // CNR_BASIS_HPP
