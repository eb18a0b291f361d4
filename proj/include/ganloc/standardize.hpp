#pragma once

#include <filesystem>
#include <vector>

#include "ganloc/dataset.hpp"
#include "ganloc/types.hpp"

namespace ganloc {

// Per-feature affine transform to zero mean / unit variance. Fit on the
// training split only; population standard deviation (divide by K). Columns
// with zero spread keep std 1 and are recorded so callers can warn.
class Standardizer {
 public:
  static Standardizer fit(const Dataset& train);

  Matrix apply(const Matrix& m) const;
  Dataset apply(const Dataset& ds) const;
  Matrix invert(const Matrix& m) const;

  const RowVector& mean() const { return mean_; }
  const RowVector& stddev() const { return std_; }
  const std::vector<Index>& constant_columns() const {
    return constant_columns_;
  }

  void save(const std::filesystem::path& path) const;
  static Standardizer load(const std::filesystem::path& path);

 private:
  RowVector mean_;
  RowVector std_;
  std::vector<Index> constant_columns_;
};

}  // namespace ganloc
