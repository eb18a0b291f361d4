#include "ganloc/loss.hpp"

#include <cmath>
#include <string>

namespace ganloc {

namespace {

// Tolerance for floating-point spill just outside [0, 1]; anything beyond it
// is a genuine invalid probability.
constexpr Scalar kProbTol = 1e-12;

void check_inputs(const Matrix& predicted, const Matrix& labels) {
  if (predicted.rows() != labels.rows() ||
      predicted.cols() != labels.cols()) {
    throw DataError("cross_entropy: prediction " +
                    std::to_string(predicted.rows()) + "x" +
                    std::to_string(predicted.cols()) + " vs labels " +
                    std::to_string(labels.rows()) + "x" +
                    std::to_string(labels.cols()));
  }
  if (predicted.rows() == 0) {
    throw DataError("cross_entropy: empty batch");
  }
  if ((predicted.array() < -kProbTol).any() ||
      (predicted.array() > 1.0 + kProbTol).any()) {
    throw TrainingError(
        "cross_entropy: prediction outside [0,1] beyond clamping window");
  }
  for (Index r = 0; r < labels.rows(); ++r) {
    Scalar sum = 0.0;
    for (Index c = 0; c < labels.cols(); ++c) {
      const Scalar v = labels(r, c);
      if (v != 0.0 && v != 1.0) {
        throw DataError("cross_entropy: labels row " + std::to_string(r) +
                        " is not one-hot");
      }
      sum += v;
    }
    if (sum != 1.0) {
      throw DataError("cross_entropy: labels row " + std::to_string(r) +
                      " is not one-hot");
    }
  }
}

Matrix clamped(const Matrix& p) {
  return p.array().max(kProbClamp).min(1.0 - kProbClamp).matrix();
}

}  // namespace

Scalar cross_entropy(const Matrix& predicted, const Matrix& labels) {
  check_inputs(predicted, labels);
  const Matrix p = clamped(predicted);
  return -(labels.array() * p.array().log()).sum();
}

Matrix cross_entropy_grad(const Matrix& predicted, const Matrix& labels) {
  check_inputs(predicted, labels);
  const Matrix p = clamped(predicted);
  return (-(labels.array() / p.array())).matrix();
}

}  // namespace ganloc
