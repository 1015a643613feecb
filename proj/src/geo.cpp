#include "cnr/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cnr {

namespace {

constexpr double kEarthRadiusKm = 6371.0;

double deg2rad(double deg) { return deg * M_PI / 180.0; }

void check_coords(const Location& p, Metric metric) {
  if (!std::isfinite(p.coord1) || !std::isfinite(p.coord2))
    throw std::invalid_argument("location has non-finite coordinates");
  if (metric == Metric::GreatCircleKm) {
    if (p.coord2 < -90.0 || p.coord2 > 90.0)
      throw std::invalid_argument("latitude outside [-90, 90]");
    if (p.coord1 < -180.0 || p.coord1 > 180.0)
      throw std::invalid_argument("longitude outside [-180, 180]");
  }
}

double haversine_km(const Location& a, const Location& b) {
  const double lat1 = deg2rad(a.coord2);
  const double lat2 = deg2rad(b.coord2);
  const double dlat = deg2rad(b.coord2 - a.coord2);
  const double dlon = deg2rad(b.coord1 - a.coord1);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace

double distance(const Location& a, const Location& b, Metric metric) {
  check_coords(a, metric);
  check_coords(b, metric);
  if (a.coord1 == b.coord1 && a.coord2 == b.coord2) return 0.0;
  if (metric == Metric::GreatCircleKm) return haversine_km(a, b);
  return std::hypot(a.coord1 - b.coord1, a.coord2 - b.coord2);
}

LocationSet::LocationSet(std::vector<Location> locations, Metric metric,
                         bool allow_duplicates)
    : locations_(std::move(locations)), metric_(metric) {
  if (locations_.empty()) throw std::invalid_argument("empty location set");
  for (const auto& p : locations_) check_coords(p, metric_);
  if (!allow_duplicates) {
    // Exact-equality duplicate scan via lexicographic sort.
    std::vector<std::size_t> order(locations_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      const auto& a = locations_[i];
      const auto& b = locations_[j];
      return a.coord1 != b.coord1 ? a.coord1 < b.coord1 : a.coord2 < b.coord2;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
      const auto& a = locations_[order[i - 1]];
      const auto& b = locations_[order[i]];
      if (a.coord1 == b.coord1 && a.coord2 == b.coord2)
        throw data_error("duplicate locations in set (indices " +
                         std::to_string(order[i - 1]) + ", " +
                         std::to_string(order[i]) + ")");
    }
  }
}

LocationSet concat(const LocationSet& a, const LocationSet& b) {
  if (a.metric() != b.metric())
    throw std::invalid_argument("cannot concatenate location sets with different metrics");
  std::vector<Location> pts = a.locations();
  pts.insert(pts.end(), b.locations().begin(), b.locations().end());
  return LocationSet(std::move(pts), a.metric(), /*allow_duplicates=*/true);
}

Eigen::MatrixXd pairwise_distances(const LocationSet& locs) {
  const Eigen::Index n = static_cast<Eigen::Index>(locs.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = distance(locs[i], locs[j], locs.metric());
      d(j, i) = d(i, j);
    }
  }
  return d;
}

Eigen::MatrixXd cross_distances(const LocationSet& a, const LocationSet& b) {
  if (a.metric() != b.metric())
    throw std::invalid_argument("location sets have different metrics");
  Eigen::MatrixXd d(a.size(), b.size());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      d(i, j) = distance(a[i], b[j], a.metric());
  return d;
}

double median_pairwise_distance(const LocationSet& locs) {
  const std::size_t n = locs.size();
  if (n < 2) throw std::invalid_argument("need at least two locations");
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d.push_back(distance(locs[i], locs[j], locs.metric()));
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  double hi = *mid;
  double lo = *std::max_element(d.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace cnr
