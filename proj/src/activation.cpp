#include "ganloc/activation.hpp"

#include <cmath>

namespace ganloc {

const char* to_string(Activation a) {
  switch (a) {
    case Activation::Identity:
      return "identity";
    case Activation::ReLU:
      return "relu";
    case Activation::LeakyReLU:
      return "leaky_relu";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Tanh:
      return "tanh";
    case Activation::Softmax:
      return "softmax";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::ReLU;
  if (name == "leaky_relu") return Activation::LeakyReLU;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "tanh") return Activation::Tanh;
  if (name == "softmax") return Activation::Softmax;
  throw ConfigError("unknown activation: " + std::string(name));
}

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Matrix activate(Activation a, const Matrix& pre, Scalar alpha) {
  switch (a) {
    case Activation::Identity:
      return pre;
    case Activation::ReLU:
      return pre.array().max(0.0).matrix();
    case Activation::LeakyReLU:
      return (pre.array() > 0.0).select(pre, alpha * pre);
    case Activation::Sigmoid:
      return pre.unaryExpr([](Scalar x) { return stable_sigmoid(x); });
    case Activation::Tanh:
      return pre.unaryExpr([](Scalar x) { return std::tanh(x); });
    case Activation::Softmax: {
      Matrix out(pre.rows(), pre.cols());
      for (Index i = 0; i < pre.rows(); ++i) {
        const Scalar row_max = pre.row(i).maxCoeff();
        out.row(i) = (pre.row(i).array() - row_max).exp();
        out.row(i) /= out.row(i).sum();
      }
      return out;
    }
  }
  throw ConfigError("unknown activation enum value");
}

Matrix activate_derivative(Activation a, const Matrix& pre, const Matrix& post,
                           Scalar alpha) {
  switch (a) {
    case Activation::Identity:
      return Matrix::Ones(pre.rows(), pre.cols());
    case Activation::ReLU:
      return (pre.array() > 0.0).select(Matrix::Ones(pre.rows(), pre.cols()),
                                        Matrix::Zero(pre.rows(), pre.cols()));
    case Activation::LeakyReLU:
      return (pre.array() > 0.0)
          .select(Matrix::Ones(pre.rows(), pre.cols()),
                  Matrix::Constant(pre.rows(), pre.cols(), alpha));
    case Activation::Sigmoid:
      return (post.array() * (1.0 - post.array())).matrix();
    case Activation::Tanh:
      return (1.0 - post.array().square()).matrix();
    case Activation::Softmax:
      throw TrainingError(
          "softmax has no elementwise derivative; use the backward pass");
  }
  throw ConfigError("unknown activation enum value");
}

}  // namespace ganloc
