#include "ganloc/adam.hpp"

#include <cmath>
#include <string>

namespace ganloc {

AdamState AdamState::init(const MlpParams& params, AdamConfig cfg) {
  AdamState state;
  state.cfg = cfg;
  state.m.reserve(params.layers.size());
  state.v.reserve(params.layers.size());
  for (const DenseLayer& l : params.layers) {
    LayerGrads zero;
    zero.weights = Matrix::Zero(l.weights.rows(), l.weights.cols());
    zero.bias = RowVector::Zero(l.bias.cols());
    state.m.push_back(zero);
    state.v.push_back(zero);
  }
  return state;
}

namespace {

template <typename Plain>
void update_tensor(Plain& theta, const Plain& g, Plain& m, Plain& v,
                   const AdamConfig& c, Scalar bc1, Scalar bc2) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
  theta.array() -=
      c.alpha * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.epsilon);
}

}  // namespace

void adam_step(MlpParams& params, const Gradients& grads, AdamState& state) {
  if (grads.layers.size() != params.layers.size() ||
      state.m.size() != params.layers.size()) {
    throw DataError("adam_step: gradient/state layer count mismatch");
  }
  for (std::size_t i = 0; i < grads.layers.size(); ++i) {
    if (!grads.layers[i].weights.allFinite() ||
        !grads.layers[i].bias.allFinite()) {
      throw TrainingError("adam_step: non-finite gradient at layer " +
                          std::to_string(i));
    }
    if (grads.layers[i].weights.rows() != params.layers[i].weights.rows() ||
        grads.layers[i].weights.cols() != params.layers[i].weights.cols()) {
      throw DataError("adam_step: gradient shape mismatch at layer " +
                      std::to_string(i));
    }
  }
  state.t += 1;
  const AdamConfig& c = state.cfg;
  const Scalar bc1 = 1.0 - std::pow(c.beta1, static_cast<Scalar>(state.t));
  const Scalar bc2 = 1.0 - std::pow(c.beta2, static_cast<Scalar>(state.t));
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    update_tensor(params.layers[i].weights, grads.layers[i].weights,
                  state.m[i].weights, state.v[i].weights, c, bc1, bc2);
    update_tensor(params.layers[i].bias, grads.layers[i].bias,
                  state.m[i].bias, state.v[i].bias, c, bc1, bc2);
    if (!params.layers[i].weights.allFinite() ||
        !params.layers[i].bias.allFinite()) {
      throw TrainingError("adam_step: parameters became non-finite at layer " +
                          std::to_string(i));
    }
  }
}

}  // namespace ganloc
