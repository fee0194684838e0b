#include "space/approx/optimizer.hpp"

#include <cmath>
#include <string>

#include "space/core/errors.hpp"

namespace space::approx {

std::string_view to_string(OptimizerKind kind) noexcept {
  return kind == OptimizerKind::sgd ? "sgd" : "adam";
}

OptimizerKind optimizer_kind_from_string(std::string_view name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw invalid_argument_error("unknown optimizer: '" + std::string(name) + "'");
}

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate,
                              const MlpParams& params) {
  if (!(learning_rate > 0.0)) throw invalid_argument_error("learning rate must be positive");
  OptimizerState state;
  state.kind = kind;
  state.learning_rate = learning_rate;
  state.first_moment = zero_gradients(params).layers;
  state.second_moment = zero_gradients(params).layers;
  return state;
}

void optimizer_step(OptimizerState& state, MlpParams& params, const MlpGradients& gradients) {
  if (gradients.layers.size() != params.layers.size()) {
    throw shape_error("gradient layer count does not match parameters");
  }
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& g = gradients.layers[l];
    const auto& p = params.layers[l];
    if (g.weights.rows() != p.weights.rows() || g.weights.cols() != p.weights.cols() ||
        g.bias.size() != p.bias.size()) {
      throw shape_error("gradient shape mismatch in layer " + std::to_string(l));
    }
    if (!g.weights.allFinite() || !g.bias.allFinite()) {
      throw numeric_domain_error("non-finite gradient in layer " + std::to_string(l));
    }
  }
  if (state.kind == OptimizerKind::adam &&
      (state.first_moment.size() != params.layers.size() ||
       state.second_moment.size() != params.layers.size())) {
    throw shape_error("optimizer moments do not match parameters");
  }

  ++state.step;
  const double lr = state.learning_rate;
  if (state.kind == OptimizerKind::sgd) {
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      params.layers[l].weights -= lr * gradients.layers[l].weights;
      params.layers[l].bias -= lr * gradients.layers[l].bias;
    }
    return;
  }

  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    param.array() -= lr * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + state.epsilon);
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weights, state.first_moment[l].weights,
           state.second_moment[l].weights, gradients.layers[l].weights);
    update(params.layers[l].bias, state.first_moment[l].bias, state.second_moment[l].bias,
           gradients.layers[l].bias);
  }
}

}  // namespace space::approx
