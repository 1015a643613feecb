#ifndef CNR_DATASET_HPP
#define CNR_DATASET_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cnr/geo.hpp"

namespace cnr {

// Responses observed at one set of locations, covariates at another.
struct MisalignedDataset {
  LocationSet locs_response;    // N locations carrying y
  Eigen::VectorXd y;
  LocationSet locs_covariates;  // M locations carrying the covariate matrix
  Eigen::MatrixXd x_tilde;      // M x K
  std::vector<std::string> covariate_names;

  int n() const { return static_cast<int>(locs_response.size()); }
  int m() const { return static_cast<int>(locs_covariates.size()); }
  int k() const { return static_cast<int>(x_tilde.cols()); }

  void validate() const {
    if (y.size() != n()) throw std::invalid_argument("response size mismatch");
    if (x_tilde.rows() != m())
      throw std::invalid_argument("covariate matrix size mismatch");
    if (locs_response.metric() != locs_covariates.metric())
      throw std::invalid_argument("location sets use different metrics");
    if (!covariate_names.empty() &&
        static_cast<int>(covariate_names.size()) != k())
      throw std::invalid_argument("covariate name count mismatch");
  }
};

}  // namespace cnr

#endif  // CNR_DATASET_HPP
