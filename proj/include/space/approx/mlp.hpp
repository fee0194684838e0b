#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace space::approx {

enum class Activation { relu, tanh };

std::string_view to_string(Activation activation) noexcept;
Activation activation_from_string(std::string_view name);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out

  bool operator==(const DenseLayer& other) const {
    return weights.rows() == other.weights.rows() && weights.cols() == other.weights.cols() &&
           bias.size() == other.bias.size() && weights == other.weights && bias == other.bias;
  }
};

/// Feed-forward network: hidden layers use `activation`, the last layer is linear.
struct MlpParams {
  std::vector<DenseLayer> layers;
  Activation activation = Activation::relu;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;

  // Throws shape_error if layer dimensions do not chain, numeric_domain_error on
  // non-finite values.
  void validate() const;

  bool operator==(const MlpParams&) const = default;
};

// Same layout as MlpParams::layers.
struct MlpGradients {
  std::vector<DenseLayer> layers;
};

// `layer_sizes` = {input, hidden..., output}. Weights and biases are drawn
// uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
MlpParams make_mlp(std::span<const std::size_t> layer_sizes, Activation activation,
                   std::uint64_t seed);

MlpGradients zero_gradients(const MlpParams& params);

Eigen::VectorXd mlp_forward(const MlpParams& params, std::span<const double> input);

// Columns of `inputs` are samples.
Eigen::MatrixXd mlp_forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs);

// Reverse-mode gradient of <output_gradient, f(input)> with respect to every parameter.
MlpGradients mlp_gradient(const MlpParams& params, std::span<const double> input,
                          std::span<const double> output_gradient);

// Sum over columns of the per-sample gradients.
MlpGradients mlp_gradient_batch(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                const Eigen::MatrixXd& output_gradients);

// Max relative error between mlp_gradient and central finite differences
// (step 1e-5) of output `probe`, over every parameter. The denominator is
// max(|analytic|, |numeric|, 1e-8).
double gradient_check(const MlpParams& params, std::span<const double> input,
                      std::size_t probe);

// Layer-major CSV checkpoint, exact round trip.
std::string format_mlp(const MlpParams& params);
MlpParams parse_mlp(std::string_view text);

}  // namespace space::approx
