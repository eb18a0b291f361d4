#pragma once

#include <vector>

#include "ganloc/adam.hpp"
#include "ganloc/dataset.hpp"
#include "ganloc/mlp.hpp"
#include "ganloc/rng.hpp"
#include "ganloc/types.hpp"

namespace ganloc {

struct ClassifierConfig {
  // Six weight layers: input -> 5 hidden -> class scores.
  std::vector<Index> layer_sizes{7, 64, 64, 32, 32, 16, 4};
  // Empty means ReLU on hidden layers and Softmax on the output layer.
  std::vector<Activation> activations{};
  int epochs = 300;
  Index batch_size = 32;
  AdamConfig adam{};
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<Activation> resolved_activations() const;
};

struct EpochTrace {
  int epoch = 0;
  Scalar mean_loss = 0.0;
};

struct TrainedClassifier {
  MlpParams params;
  std::vector<EpochTrace> trace;
};

struct EvalResult {
  Scalar accuracy = 0.0;
  Scalar log_loss = 0.0;
  // confusion(i, j) counts samples of true class i+1 predicted as j+1.
  MatrixI confusion;
};

// Minibatch SGD with Adam over shuffled epochs. Loss gradients are
// mean-reduced over the batch so the step size is independent of batch size.
TrainedClassifier train_classifier(const Dataset& train,
                                   const ClassifierConfig& config);

// Class probabilities, one row per sample.
Matrix predict_proba(const MlpParams& params, const Matrix& features);

// 1-based labels; ties resolve to the lowest class id.
std::vector<int> predict(const MlpParams& params, const Matrix& features);

EvalResult evaluate(const MlpParams& params, const Dataset& test);

}  // namespace ganloc
