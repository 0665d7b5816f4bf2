#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace conehull {

// Row-major dense matrix of 64-bit reals. Rows are data points throughout;
// the binary/text file formats are row-major as well, so this layout keeps
// serialization a plain memcpy.
using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool all_finite(const DenseMatrix& m) {
  return m.allFinite();
}

// Entry validation used by every public builder: no NaN/Inf may enter.
inline void require_finite(const DenseMatrix& m, const std::string& name) {
  if (!m.allFinite()) {
    throw std::invalid_argument(name + ": matrix contains NaN or Inf entries");
  }
}

inline void require_nonnegative(const DenseMatrix& m, const std::string& name) {
  if (m.size() > 0 && m.minCoeff() < 0.0) {
    throw std::invalid_argument(name + ": matrix has negative entries");
  }
}

}  // namespace conehull
