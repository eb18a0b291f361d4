#pragma once

#include <vector>

#include "ganloc/activation.hpp"
#include "ganloc/rng.hpp"
#include "ganloc/types.hpp"

namespace ganloc {

struct DenseLayer {
  Matrix weights;   // in_dim x out_dim
  RowVector bias;   // 1 x out_dim
  Activation activation = Activation::Identity;
  Scalar leaky_alpha = 0.2;  // only read when activation == LeakyReLU

  Index in_dim() const { return weights.rows(); }
  Index out_dim() const { return weights.cols(); }
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  Index input_dim() const { return layers.front().in_dim(); }
  Index output_dim() const { return layers.back().out_dim(); }

  // Checks the dimension chain and LeakyReLU slopes. Throws ConfigError.
  void validate() const;
};

// Builds an MLP with He-style uniform fan-in init for ReLU/LeakyReLU layers
// and Xavier uniform for everything else. Biases start at zero.
// sizes = {in, h1, ..., out}; activations has sizes.size()-1 entries.
MlpParams make_mlp(const std::vector<Index>& sizes,
                   const std::vector<Activation>& activations, Rng& rng,
                   Scalar leaky_alpha = 0.2);

struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre;   // pre-activation per layer
  std::vector<Matrix> post;  // activation per layer
};

// Batch forward pass; each input row is one sample. Populates the cache for a
// later backward() when one is supplied.
Matrix forward(const MlpParams& params, const Matrix& input,
               ForwardCache* cache = nullptr);

struct LayerGrads {
  Matrix weights;
  RowVector bias;
};

struct Gradients {
  std::vector<LayerGrads> layers;
  Matrix input;  // d(loss)/d(input); lets losses chain through stacked nets
};

// Backpropagation from loss_grad = d(loss)/d(final activations). Softmax
// layers apply the full per-row Jacobian, so a cross-entropy gradient fed in
// here comes out of the last layer as (y_hat - y) at the pre-activations.
Gradients backward(const MlpParams& params, const ForwardCache& cache,
                   const Matrix& loss_grad);

// Convenience: grads1 + grads2, same shapes required.
Gradients add(const Gradients& a, const Gradients& b);
void scale(Gradients& g, Scalar factor);

}  // namespace ganloc
