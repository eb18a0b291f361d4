#pragma once

#include "ganloc/types.hpp"

namespace ganloc {

// Probabilities are clamped into [kProbClamp, 1 - kProbClamp] before any log.
inline constexpr Scalar kProbClamp = 1e-7;

// Multi-class cross-entropy, natural log, summed over the batch (callers
// divide by the batch size when they want the per-sample mean). labels must
// be one-hot rows; predicted must hold probabilities in [0, 1].
Scalar cross_entropy(const Matrix& predicted, const Matrix& labels);

// Gradient of the summed cross-entropy w.r.t. predicted: -y / clamp(y_hat).
// The clamp is treated as pass-through so the gradient stays bounded.
Matrix cross_entropy_grad(const Matrix& predicted, const Matrix& labels);

}  // namespace ganloc
