#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "space/approx/mlp.hpp"

namespace space::approx {

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind kind) noexcept;
OptimizerKind optimizer_kind_from_string(std::string_view name);

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  std::uint64_t step = 0;
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate,
                              const MlpParams& params);

// sgd: p -= lr g. adam: bias-corrected moments. Throws numeric_domain_error on
// non-finite gradients (parameters untouched) and shape_error on mismatch.
void optimizer_step(OptimizerState& state, MlpParams& params, const MlpGradients& gradients);

}  // namespace space::approx
