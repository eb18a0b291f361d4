#include "ganloc/classifier.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ganloc/loss.hpp"

namespace ganloc {

void ClassifierConfig::validate() const {
  if (layer_sizes.size() != 7) {
    throw ConfigError("classifier must have exactly 6 weight layers, got " +
                      std::to_string(layer_sizes.size() < 1
                                         ? 0
                                         : layer_sizes.size() - 1));
  }
  for (Index dim : layer_sizes) {
    if (dim < 1) throw ConfigError("classifier layer sizes must be positive");
  }
  if (!activations.empty()) {
    if (activations.size() != layer_sizes.size() - 1) {
      throw ConfigError("classifier needs one activation per weight layer");
    }
    if (activations.back() != Activation::Softmax) {
      throw ConfigError("classifier output activation must be softmax");
    }
  }
  if (epochs < 0) throw ConfigError("classifier epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("classifier batch_size must be >= 1");
}

std::vector<Activation> ClassifierConfig::resolved_activations() const {
  if (!activations.empty()) return activations;
  std::vector<Activation> acts(layer_sizes.size() - 1, Activation::ReLU);
  acts.back() = Activation::Softmax;
  return acts;
}

TrainedClassifier train_classifier(const Dataset& train,
                                   const ClassifierConfig& config) {
  config.validate();
  if (train.samples.empty()) {
    throw DataError("train_classifier: training set is empty");
  }
  if (train.feature_count != config.layer_sizes.front()) {
    throw DataError("train_classifier: data has " +
                    std::to_string(train.feature_count) +
                    " features but the network expects " +
                    std::to_string(config.layer_sizes.front()));
  }
  const int class_count = static_cast<int>(config.layer_sizes.back());
  for (const RssSample& s : train.samples) {
    if (s.label < 1 || s.label > class_count) {
      throw DataError("train_classifier: label " + std::to_string(s.label) +
                      " outside 1.." + std::to_string(class_count));
    }
  }

  Rng rng(config.seed);
  TrainedClassifier out;
  out.params =
      make_mlp(config.layer_sizes, config.resolved_activations(), rng);
  if (config.epochs == 0) return out;

  const Index n = static_cast<Index>(train.samples.size());
  Matrix features = train.features();
  Matrix labels(n, class_count);
  for (Index i = 0; i < n; ++i) {
    labels.row(i) = one_hot(train.samples[i].label, class_count);
  }

  AdamState adam = AdamState::init(out.params, config.adam);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    Scalar loss_sum = 0.0;
    for (Index start = 0; start < n; start += config.batch_size) {
      const Index rows = std::min(config.batch_size, n - start);
      Matrix bx(rows, features.cols());
      Matrix by(rows, class_count);
      for (Index r = 0; r < rows; ++r) {
        bx.row(r) = features.row(order[static_cast<std::size_t>(start + r)]);
        by.row(r) = labels.row(order[static_cast<std::size_t>(start + r)]);
      }
      const int batch_index = static_cast<int>(start / config.batch_size);
      try {
        ForwardCache cache;
        Matrix proba = forward(out.params, bx, &cache);
        const Scalar batch_loss = cross_entropy(proba, by);
        if (!std::isfinite(batch_loss)) {
          throw TrainingError("training loss is not finite");
        }
        loss_sum += batch_loss;
        // Mean reduction keeps the effective step size independent of the
        // (possibly ragged) batch size.
        Matrix grad = cross_entropy_grad(proba, by) / Scalar(rows);
        Gradients grads = backward(out.params, cache, grad);
        adam_step(out.params, grads, adam);
      } catch (const TrainingError& e) {
        throw TrainingError(std::string(e.what()) + " (epoch " +
                            std::to_string(epoch) + ", batch " +
                            std::to_string(batch_index) + ")");
      }
    }
    out.trace.push_back({epoch, loss_sum / Scalar(n)});
  }
  return out;
}

Matrix predict_proba(const MlpParams& params, const Matrix& features) {
  return forward(params, features);
}

std::vector<int> predict(const MlpParams& params, const Matrix& features) {
  Matrix proba = predict_proba(params, features);
  std::vector<int> labels(static_cast<std::size_t>(proba.rows()));
  for (Index i = 0; i < proba.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < proba.cols(); ++j) {
      if (proba(i, j) > proba(i, best)) best = j;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return labels;
}

EvalResult evaluate(const MlpParams& params, const Dataset& test) {
  if (test.samples.empty()) {
    throw DataError("evaluate: test set is empty");
  }
  const int class_count = static_cast<int>(params.output_dim());
  Matrix features = test.features();
  Matrix proba = predict_proba(params, features);
  Matrix labels(proba.rows(), class_count);
  for (Index i = 0; i < proba.rows(); ++i) {
    labels.row(i) = one_hot(test.samples[static_cast<std::size_t>(i)].label,
                            class_count);
  }

  EvalResult result;
  result.confusion = MatrixI::Zero(class_count, class_count);
  std::vector<int> predicted = predict(params, features);
  Index correct = 0;
  for (Index i = 0; i < proba.rows(); ++i) {
    const int truth = test.samples[static_cast<std::size_t>(i)].label;
    const int guess = predicted[static_cast<std::size_t>(i)];
    result.confusion(truth - 1, guess - 1) += 1;
    if (truth == guess) ++correct;
  }
  result.accuracy = 100.0 * Scalar(correct) / Scalar(proba.rows());
  result.log_loss = cross_entropy(proba, labels) / Scalar(proba.rows());
  return result;
}

}  // namespace ganloc
