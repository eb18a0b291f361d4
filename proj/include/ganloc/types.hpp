#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ganloc {

using Scalar = double;
using Index = Eigen::Index;

// Dense row-major types. Row-major storage so that the in-memory buffer of a
// sample batch matches the on-disk layout (one sample per row).
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;

using Matrix = Mat<Scalar>;
using RowVector = RowVec<Scalar>;
using MatrixI = Mat<long>;

// Error categories map onto CLI exit codes: ConfigError -> 1, DataError -> 2,
// TrainingError -> 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ganloc
