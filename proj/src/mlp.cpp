#include "ganloc/mlp.hpp"

#include <cmath>
#include <string>

namespace ganloc {

void MlpParams::validate() const {
  if (layers.empty()) {
    throw ConfigError("mlp has no layers");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& l = layers[i];
    if (l.weights.rows() < 1 || l.weights.cols() < 1) {
      throw ConfigError("layer " + std::to_string(i) + " has empty weights");
    }
    if (l.bias.cols() != l.weights.cols()) {
      throw ConfigError("layer " + std::to_string(i) +
                        " bias length does not match weight columns");
    }
    if (l.activation == Activation::LeakyReLU &&
        (l.leaky_alpha <= 0.0 || l.leaky_alpha >= 1.0)) {
      throw ConfigError("layer " + std::to_string(i) +
                        " leaky slope must be in (0,1)");
    }
    if (i + 1 < layers.size() &&
        l.weights.cols() != layers[i + 1].weights.rows()) {
      throw ConfigError("layer " + std::to_string(i) + " out_dim " +
                        std::to_string(l.weights.cols()) +
                        " does not chain into layer " + std::to_string(i + 1) +
                        " in_dim " +
                        std::to_string(layers[i + 1].weights.rows()));
    }
  }
}

MlpParams make_mlp(const std::vector<Index>& sizes,
                   const std::vector<Activation>& activations, Rng& rng,
                   Scalar leaky_alpha) {
  if (sizes.size() < 2) {
    throw ConfigError("mlp needs at least one weight layer");
  }
  if (activations.size() != sizes.size() - 1) {
    throw ConfigError("expected " + std::to_string(sizes.size() - 1) +
                      " activations, got " +
                      std::to_string(activations.size()));
  }
  MlpParams params;
  params.layers.reserve(activations.size());
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const Index fan_in = sizes[i];
    const Index fan_out = sizes[i + 1];
    const Activation act = activations[i];
    const bool rectified =
        act == Activation::ReLU || act == Activation::LeakyReLU;
    const Scalar limit =
        rectified ? std::sqrt(6.0 / static_cast<Scalar>(fan_in))
                  : std::sqrt(6.0 / static_cast<Scalar>(fan_in + fan_out));
    DenseLayer layer;
    layer.weights = Matrix(fan_in, fan_out);
    for (Index r = 0; r < fan_in; ++r) {
      for (Index c = 0; c < fan_out; ++c) {
        layer.weights(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
      }
    }
    layer.bias = RowVector::Zero(fan_out);
    layer.activation = act;
    layer.leaky_alpha = leaky_alpha;
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

Matrix forward(const MlpParams& params, const Matrix& input,
               ForwardCache* cache) {
  if (params.layers.empty()) {
    throw ConfigError("forward on empty mlp");
  }
  if (cache != nullptr) {
    cache->input = input;
    cache->pre.clear();
    cache->post.clear();
    cache->pre.reserve(params.layers.size());
    cache->post.reserve(params.layers.size());
  }
  Matrix x = input;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const DenseLayer& l = params.layers[i];
    if (x.cols() != l.in_dim()) {
      throw DataError("forward: input has " + std::to_string(x.cols()) +
                      " columns but layer " + std::to_string(i) + " expects " +
                      std::to_string(l.in_dim()));
    }
    Matrix pre = x * l.weights;
    pre.rowwise() += l.bias;
    Matrix post = activate(l.activation, pre, l.leaky_alpha);
    if (!post.allFinite()) {
      throw TrainingError("forward: non-finite activation at layer " +
                          std::to_string(i));
    }
    if (cache != nullptr) {
      cache->pre.push_back(pre);
      cache->post.push_back(post);
    }
    x = std::move(post);
  }
  return x;
}

namespace {

void check_cache(const MlpParams& params, const ForwardCache& cache) {
  if (cache.pre.size() != params.layers.size() ||
      cache.post.size() != params.layers.size()) {
    throw DataError("backward: cache does not match network depth");
  }
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    if (cache.pre[i].cols() != params.layers[i].out_dim()) {
      throw DataError("backward: cache mismatch at layer " +
                      std::to_string(i));
    }
  }
  if (cache.input.cols() != params.input_dim()) {
    throw DataError("backward: cached input width does not match network");
  }
}

}  // namespace

Gradients backward(const MlpParams& params, const ForwardCache& cache,
                   const Matrix& loss_grad) {
  check_cache(params, cache);
  const std::size_t n_layers = params.layers.size();
  if (loss_grad.rows() != cache.input.rows() ||
      loss_grad.cols() != params.output_dim()) {
    throw DataError("backward: loss gradient shape does not match output");
  }

  Gradients grads;
  grads.layers.resize(n_layers);

  Matrix delta = loss_grad;  // d(loss)/d(activation of current layer)
  for (std::size_t li = n_layers; li-- > 0;) {
    const DenseLayer& l = params.layers[li];
    Matrix delta_pre;  // d(loss)/d(pre-activation)
    if (l.activation == Activation::Softmax) {
      // Per-row Jacobian: d_i = y_i * (g_i - sum_j g_j y_j).
      const Matrix& y = cache.post[li];
      delta_pre = Matrix(delta.rows(), delta.cols());
      for (Index r = 0; r < delta.rows(); ++r) {
        const Scalar dot = delta.row(r).dot(y.row(r));
        delta_pre.row(r) =
            (y.row(r).array() * (delta.row(r).array() - dot)).matrix();
      }
    } else {
      delta_pre = delta.cwiseProduct(
          activate_derivative(l.activation, cache.pre[li], cache.post[li],
                              l.leaky_alpha));
    }
    const Matrix& below = li == 0 ? cache.input : cache.post[li - 1];
    grads.layers[li].weights = below.transpose() * delta_pre;
    grads.layers[li].bias = delta_pre.colwise().sum();
    if (!grads.layers[li].weights.allFinite()) {
      throw TrainingError("backward: non-finite gradient at layer " +
                          std::to_string(li));
    }
    delta = delta_pre * l.weights.transpose();
  }
  grads.input = std::move(delta);
  return grads;
}

Gradients add(const Gradients& a, const Gradients& b) {
  if (a.layers.size() != b.layers.size()) {
    throw DataError("gradient addition: layer counts differ");
  }
  Gradients out = a;
  for (std::size_t i = 0; i < out.layers.size(); ++i) {
    out.layers[i].weights += b.layers[i].weights;
    out.layers[i].bias += b.layers[i].bias;
  }
  return out;
}

void scale(Gradients& g, Scalar factor) {
  for (auto& l : g.layers) {
    l.weights *= factor;
    l.bias *= factor;
  }
  if (g.input.size() > 0) {
    g.input *= factor;
  }
}

}  // namespace ganloc
