#pragma once

#include <string>
#include <string_view>

#include "ganloc/types.hpp"

namespace ganloc {

enum class Activation { Identity, ReLU, LeakyReLU, Sigmoid, Tanh, Softmax };

const char* to_string(Activation a);
Activation activation_from_string(std::string_view name);

// Elementwise activation applied row-batch-wise. Softmax acts per row with
// max-shift stabilization. alpha is the LeakyReLU slope, ignored otherwise.
Matrix activate(Activation a, const Matrix& pre, Scalar alpha);

// Derivative for the elementwise activations, expressed from pre-activation z
// and activation y. Softmax has no elementwise derivative; the backward pass
// applies its full per-row Jacobian instead and must not call this.
Matrix activate_derivative(Activation a, const Matrix& pre, const Matrix& post,
                           Scalar alpha);

}  // namespace ganloc
