#ifndef CNR_GEO_HPP
#define CNR_GEO_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "cnr/errors.hpp"

namespace cnr {

enum class Metric { Euclidean, GreatCircleKm };

// A point in the spatial domain. Under GreatCircleKm, coord1 is longitude
// and coord2 is latitude in degrees; under Euclidean they are planar x, y.
struct Location {
  double coord1 = 0.0;
  double coord2 = 0.0;
};

// Distance between two locations. GreatCircleKm uses the haversine formula
// with mean earth radius 6371.0 km.
double distance(const Location& a, const Location& b, Metric metric);

/* An ordered set of spatial locations sharing one distance metric.
 * Exact duplicate points are rejected unless allow_duplicates is set
 * (needed when stacking observed and target locations that may coincide). */
class LocationSet {
 public:
  LocationSet(std::vector<Location> locations, Metric metric,
              bool allow_duplicates = false);

  std::size_t size() const { return locations_.size(); }
  const Location& operator[](std::size_t i) const { return locations_[i]; }
  const std::vector<Location>& locations() const { return locations_; }
  Metric metric() const { return metric_; }

 private:
  std::vector<Location> locations_;
  Metric metric_;
};

// Stacks a before b into one set; coincident points across the two inputs
// are tolerated.
LocationSet concat(const LocationSet& a, const LocationSet& b);

Eigen::MatrixXd pairwise_distances(const LocationSet& locs);
Eigen::MatrixXd cross_distances(const LocationSet& a, const LocationSet& b);

// Median of the n(n-1)/2 distinct pairwise distances; used to scale initial
// range parameters.
double median_pairwise_distance(const LocationSet& locs);

}  // namespace cnr

#endif  // CNR_GEO_HPP
