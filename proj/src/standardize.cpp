#include "ganloc/standardize.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <string>

namespace ganloc {

Standardizer Standardizer::fit(const Dataset& train) {
  if (train.samples.empty()) {
    throw DataError("standardizer: empty training set");
  }
  const Matrix x = train.features();
  const Scalar k = static_cast<Scalar>(x.rows());
  Standardizer s;
  s.mean_ = x.colwise().sum() / k;
  Matrix centered = x.rowwise() - s.mean_;
  s.std_ = (centered.array().square().colwise().sum() / k).sqrt();
  for (Index j = 0; j < s.std_.cols(); ++j) {
    if (s.std_(j) <= 0.0 || !std::isfinite(s.std_(j))) {
      s.std_(j) = 1.0;
      s.constant_columns_.push_back(j);
    }
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& m) const {
  if (m.cols() != mean_.cols()) {
    throw DataError("standardizer: expected " + std::to_string(mean_.cols()) +
                    " features, got " + std::to_string(m.cols()));
  }
  Matrix out = m.rowwise() - mean_;
  out.array().rowwise() /= std_.array();
  return out;
}

Dataset Standardizer::apply(const Dataset& ds) const {
  Dataset out = ds;
  for (RssSample& s : out.samples) {
    s.rss = ((s.rss - mean_).array() / std_.array()).matrix();
  }
  return out;
}

Matrix Standardizer::invert(const Matrix& m) const {
  if (m.cols() != mean_.cols()) {
    throw DataError("standardizer: expected " + std::to_string(mean_.cols()) +
                    " features, got " + std::to_string(m.cols()));
  }
  Matrix out = m;
  out.array().rowwise() *= std_.array();
  out.rowwise() += mean_;
  return out;
}

void Standardizer::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["version"] = 1;
  j["mean"] = std::vector<Scalar>(mean_.data(), mean_.data() + mean_.cols());
  j["std"] = std::vector<Scalar>(std_.data(), std_.data() + std_.cols());
  j["constant_columns"] = constant_columns_;
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open for writing: " + path.string());
  }
  out << j.dump(2) << '\n';
}

Standardizer Standardizer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open standardizer file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (!j.contains("version") || j["version"].get<int>() != 1 ||
      !j.contains("mean") || !j.contains("std")) {
    throw DataError(path.string() + ": not a standardizer file");
  }
  const auto mean = j["mean"].get<std::vector<Scalar>>();
  const auto stddev = j["std"].get<std::vector<Scalar>>();
  if (mean.size() != stddev.size() || mean.empty()) {
    throw DataError(path.string() + ": mean/std length mismatch");
  }
  Standardizer s;
  s.mean_ = RowVector(static_cast<Index>(mean.size()));
  s.std_ = RowVector(static_cast<Index>(stddev.size()));
  for (std::size_t i = 0; i < mean.size(); ++i) {
    s.mean_(static_cast<Index>(i)) = mean[i];
    s.std_(static_cast<Index>(i)) = stddev[i];
  }
  if (j.contains("constant_columns")) {
    s.constant_columns_ = j["constant_columns"].get<std::vector<Index>>();
  }
  return s;
}

}  // namespace ganloc
