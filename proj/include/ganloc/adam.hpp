#pragma once

#include <vector>

#include "ganloc/mlp.hpp"
#include "ganloc/types.hpp"

namespace ganloc {

struct AdamConfig {
  Scalar alpha = 1e-3;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar epsilon = 1e-8;
};

// First/second moment accumulators mirroring one parameter set.
struct AdamState {
  std::vector<LayerGrads> m;
  std::vector<LayerGrads> v;
  long t = 0;
  AdamConfig cfg;

  static AdamState init(const MlpParams& params, AdamConfig cfg = {});
};

// One bias-corrected update, in place:
//   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;  t <- t+1
//   theta <- theta - alpha * m/(1-b1^t) / (sqrt(v/(1-b2^t)) + eps)
// Non-finite gradients abort with TrainingError.
void adam_step(MlpParams& params, const Gradients& grads, AdamState& state);

}  // namespace ganloc
