#pragma once

// Test-only central finite-difference oracle for parameter gradients. Kept
// independent of the backward pass: it only ever calls the loss functional.

#include <cmath>
#include <functional>

#include "ganloc/mlp.hpp"

namespace ganloc::testing {

using LossFn = std::function<Scalar(const MlpParams&)>;

inline Gradients finite_difference(const MlpParams& params, const LossFn& f,
                                   Scalar h = 1e-4) {
  Gradients grads;
  grads.layers.resize(params.layers.size());
  MlpParams p = params;
  for (std::size_t li = 0; li < p.layers.size(); ++li) {
    DenseLayer& l = p.layers[li];
    grads.layers[li].weights = Matrix::Zero(l.in_dim(), l.out_dim());
    grads.layers[li].bias = RowVector::Zero(l.out_dim());
    for (Index r = 0; r < l.in_dim(); ++r) {
      for (Index c = 0; c < l.out_dim(); ++c) {
        const Scalar orig = l.weights(r, c);
        l.weights(r, c) = orig + h;
        const Scalar up = f(p);
        l.weights(r, c) = orig - h;
        const Scalar down = f(p);
        l.weights(r, c) = orig;
        grads.layers[li].weights(r, c) = (up - down) / (2.0 * h);
      }
    }
    for (Index c = 0; c < l.out_dim(); ++c) {
      const Scalar orig = l.bias(c);
      l.bias(c) = orig + h;
      const Scalar up = f(p);
      l.bias(c) = orig - h;
      const Scalar down = f(p);
      l.bias(c) = orig;
      grads.layers[li].bias(c) = (up - down) / (2.0 * h);
    }
  }
  return grads;
}

// Worst relative mismatch between analytic and finite-difference gradients,
// with an absolute floor for near-zero entries.
inline Scalar max_grad_mismatch(const Gradients& analytic,
                                const Gradients& numeric,
                                Scalar abs_floor = 1e-7) {
  Scalar worst = 0.0;
  auto compare = [&](Scalar a, Scalar n) {
    const Scalar diff = std::abs(a - n);
    if (diff <= abs_floor) {
      return;
    }
    const Scalar scale = std::max(std::abs(a), std::abs(n));
    worst = std::max(worst, diff / scale);
  };
  for (std::size_t li = 0; li < analytic.layers.size(); ++li) {
    const auto& aw = analytic.layers[li].weights;
    const auto& nw = numeric.layers[li].weights;
    for (Index r = 0; r < aw.rows(); ++r) {
      for (Index c = 0; c < aw.cols(); ++c) {
        compare(aw(r, c), nw(r, c));
      }
    }
    for (Index c = 0; c < analytic.layers[li].bias.cols(); ++c) {
      compare(analytic.layers[li].bias(c), numeric.layers[li].bias(c));
    }
  }
  return worst;
}

}  // namespace ganloc::testing
