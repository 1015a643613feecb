#include "cnr/basis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "cnr/errors.hpp"
#include "cnr/stats.hpp"

namespace cnr {

int BasisSpec::dim() const {
  switch (kind) {
    case Kind::Linear:
      return 1;
    case Kind::Polynomial:
      return degree;
    case Kind::NaturalCubicSpline:
      return n_interior_knots + 1;
  }
  return 0;
}

BasisSpec BasisSpec::polynomial(int degree) {
  if (degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
  return BasisSpec{Kind::Polynomial, degree, 4};
}

BasisSpec BasisSpec::natural_cubic_spline(int n_interior_knots) {
  if (n_interior_knots < 1)
    throw std::invalid_argument("need at least one interior knot");
  return BasisSpec{Kind::NaturalCubicSpline, 1, n_interior_knots};
}

namespace {

double cube_pos(double v) { return v > 0.0 ? v * v * v : 0.0; }

/* Natural cubic spline basis on knots k_0 < ... < k_{T-1}:
 *   col 0:      x
 *   col 1+j:    d_j(x) - d_{T-2}(x),  j = 0..T-3,
 * with d_i(x) = [ (x-k_i)_+^3 - (x-k_{T-1})_+^3 ] / (k_{T-1} - k_i).
 * Linear beyond the boundary knots; second derivative vanishes there. */
void natural_spline_row(const Eigen::VectorXd& knots, double x, double* out) {
  const Eigen::Index t = knots.size();
  out[0] = x;
  const double k_last = knots(t - 1);
  auto d = [&](Eigen::Index i) {
    return (cube_pos(x - knots(i)) - cube_pos(x - k_last)) /
           (k_last - knots(i));
  };
  const double d_ref = d(t - 2);
  for (Eigen::Index j = 0; j + 2 < t; ++j) out[j + 1] = d(j) - d_ref;
}

}  // namespace

Eigen::VectorXd basis_eval(const BasisSpec& spec, const Eigen::VectorXd& knots,
                           double x) {
  Eigen::VectorXd v(spec.dim());
  switch (spec.kind) {
    case BasisSpec::Kind::Linear:
      v(0) = x;
      break;
    case BasisSpec::Kind::Polynomial: {
      double acc = 1.0;
      for (int j = 0; j < spec.degree; ++j) {
        acc *= x;
        v(j) = acc;
      }
      break;
    }
    case BasisSpec::Kind::NaturalCubicSpline:
      if (knots.size() != spec.n_interior_knots + 2)
        throw std::invalid_argument("spline knot vector has wrong length");
      natural_spline_row(knots, x, v.data());
      break;
  }
  return v;
}

std::string design_column_name(const std::vector<BasisSpec>& specs, int j) {
  if (j == 0) return "intercept";
  int col = 1;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const int d = specs[k].dim();
    if (j < col + d) {
      const int local = j - col;
      switch (specs[k].kind) {
        case BasisSpec::Kind::Linear:
          return "x" + std::to_string(k + 1);
        case BasisSpec::Kind::Polynomial:
          return "x" + std::to_string(k + 1) + "^" + std::to_string(local + 1);
        case BasisSpec::Kind::NaturalCubicSpline:
          return "x" + std::to_string(k + 1) + ":ns" + std::to_string(local + 1);
      }
    }
    col += d;
  }
  return "col" + std::to_string(j);
}

DesignMatrix build_design(const Eigen::MatrixXd& x_hat,
                          const std::vector<BasisSpec>& specs,
                          const std::vector<Eigen::VectorXd>* knots_in) {
  const Eigen::Index n = x_hat.rows();
  const auto k = static_cast<Eigen::Index>(specs.size());
  if (x_hat.cols() != k)
    throw std::invalid_argument("build_design: specs/covariate count mismatch");
  if (knots_in && static_cast<Eigen::Index>(knots_in->size()) != k)
    throw std::invalid_argument("build_design: knots/covariate count mismatch");

  int p = 1;
  for (const auto& s : specs) p += s.dim();
  if (n < p + 5)
    throw data_error("build_design: need at least p + 5 = " +
                     std::to_string(p + 5) + " rows, got " + std::to_string(n));

  DesignMatrix dm;
  dm.specs = specs;
  dm.knots.resize(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& spec = specs[static_cast<std::size_t>(j)];
    if (spec.kind != BasisSpec::Kind::NaturalCubicSpline) continue;
    Eigen::VectorXd knots;
    if (knots_in) {
      knots = (*knots_in)[static_cast<std::size_t>(j)];
    } else {
      const int m = spec.n_interior_knots;
      std::vector<double> col(x_hat.col(j).data(), x_hat.col(j).data() + n);
      knots.resize(m + 2);
      knots(0) = *std::min_element(col.begin(), col.end());
      knots(m + 1) = *std::max_element(col.begin(), col.end());
      for (int q = 1; q <= m; ++q)
        knots(q) = quantile_type7(col, static_cast<double>(q) /
                                           static_cast<double>(m + 1));
    }
    for (Eigen::Index q = 1; q < knots.size(); ++q)
      if (!(knots(q) > knots(q - 1)))
        throw data_error("build_design: duplicate knots for covariate " +
                         std::to_string(j + 1));
    dm.knots[static_cast<std::size_t>(j)] = std::move(knots);
  }

  dm.b.resize(n, p);
  dm.b.col(0).setOnes();
  int col = 1;
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& spec = specs[static_cast<std::size_t>(j)];
    const int d = spec.dim();
    dm.column_range.emplace_back(col, col + d);
    for (Eigen::Index i = 0; i < n; ++i)
      dm.b.row(i).segment(col, d) =
          basis_eval(spec, dm.knots[static_cast<std::size_t>(j)], x_hat(i, j))
              .transpose();
    col += d;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dm.b);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string cols;
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < p; ++i) {
      if (!cols.empty()) cols += ", ";
      cols += design_column_name(specs, perm(i));
    }
    throw data_error("build_design: rank-deficient design; dependent columns: " +
                     cols);
  }
  return dm;
}

Eigen::MatrixXd design_matrix_from_rule(const Eigen::MatrixXd& x,
                                        const DesignRule& rule) {
  const Eigen::Index n = x.rows();
  const auto k = static_cast<Eigen::Index>(rule.specs.size());
  if (x.cols() != k)
    throw std::invalid_argument("design rule/covariate count mismatch");
  int p = 1;
  for (const auto& s : rule.specs) p += s.dim();
  Eigen::MatrixXd b(n, p);
  b.col(0).setOnes();
  int col = 1;
  static const Eigen::VectorXd no_knots;
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& spec = rule.specs[static_cast<std::size_t>(j)];
    const Eigen::VectorXd& knots =
        rule.knots.empty() ? no_knots : rule.knots[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i)
      b.row(i).segment(col, spec.dim()) =
          basis_eval(spec, knots, x(i, j)).transpose();
    col += spec.dim();
  }
  return b;
}

}  // namespace cnr
