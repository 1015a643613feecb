#ifndef CNR_ERRORS_HPP
#define CNR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cnr {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files, configs, or CLI usage (exit code 2).
struct schema_error : error {
  using error::error;
};

// Factorization or optimizer failures (exit code 3).
struct numeric_error : error {
  using error::error;
};

// Degenerate data: constant covariates, rank deficiency, empty inputs (exit code 4).
struct data_error : error {
  using error::error;
};

}  // namespace cnr

#endif  // CNR_ERRORS_HPP
