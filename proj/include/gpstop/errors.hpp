#pragma once

#include <stdexcept>
#include <string>

namespace gpstop {

/// Malformed or inconsistent input data (CSV files, model directories).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear-algebra or optimization failure (Cholesky breakdown, fit divergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gpstop
