#include "space/approx/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "space/core/csv.hpp"
#include "space/core/errors.hpp"
#include "space/core/rng.hpp"

namespace space::approx {
namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation activation) {
  if (activation == Activation::relu) return z.cwiseMax(0.0);
  return z.array().tanh().matrix();
}

// Derivative of the activation expressed through its pre-activation and output.
Eigen::MatrixXd activation_derivative(const Eigen::MatrixXd& pre, const Eigen::MatrixXd& post,
                                      Activation activation) {
  if (activation == Activation::relu) {
    return (pre.array() > 0.0).cast<double>().matrix();
  }
  return (1.0 - post.array().square()).matrix();
}

struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // input to each layer
  std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
  Eigen::MatrixXd output;
};

void check_input_rows(const MlpParams& params, Eigen::Index rows) {
  if (params.layers.empty()) throw shape_error("network has no layers");
  if (static_cast<std::size_t>(rows) != params.input_dim()) {
    throw shape_error("input has dimension " + std::to_string(rows) + ", network expects " +
                      std::to_string(params.input_dim()));
  }
}

ForwardCache forward_with_cache(const MlpParams& params, const Eigen::MatrixXd& inputs) {
  check_input_rows(params, inputs.rows());
  ForwardCache cache;
  Eigen::MatrixXd x = inputs;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    Eigen::MatrixXd z = layer.weights * x;
    z.colwise() += layer.bias;
    cache.inputs.push_back(std::move(x));
    x = l + 1 < params.layers.size() ? activate(z, params.activation) : z;
    cache.pre.push_back(std::move(z));
  }
  cache.output = std::move(x);
  return cache;
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> values) {
  return {values.data(), static_cast<Eigen::Index>(values.size())};
}

}  // namespace

std::string_view to_string(Activation activation) noexcept {
  return activation == Activation::relu ? "relu" : "tanh";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw invalid_argument_error("unknown activation: '" + std::string(name) + "'");
}

std::size_t MlpParams::input_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols());
}

std::size_t MlpParams::output_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weights.rows());
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.size() + layer.bias.size();
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw shape_error("network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.bias.size() != layer.weights.rows()) {
      throw shape_error("layer " + std::to_string(l) + " bias does not match weight rows");
    }
    if (l > 0 && layer.weights.cols() != layers[l - 1].weights.rows()) {
      throw shape_error("layer " + std::to_string(l) + " does not chain with its predecessor");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw numeric_domain_error("layer " + std::to_string(l) + " has non-finite values");
    }
  }
}

MlpParams make_mlp(std::span<const std::size_t> layer_sizes, Activation activation,
                   std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw shape_error("an MLP needs input and output sizes");
  Rng rng(seed);
  MlpParams params;
  params.activation = activation;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(layer_sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(layer_sizes[l + 1]);
    if (fan_in < 1 || fan_out < 1) throw shape_error("layer sizes must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd(fan_out)};
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = rng.uniform(-bound, bound);
    }
    for (Eigen::Index r = 0; r < fan_out; ++r) layer.bias(r) = rng.uniform(-bound, bound);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

MlpGradients zero_gradients(const MlpParams& params) {
  MlpGradients grads;
  for (const auto& layer : params.layers) {
    grads.layers.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                            Eigen::VectorXd::Zero(layer.bias.size())});
  }
  return grads;
}

Eigen::VectorXd mlp_forward(const MlpParams& params, std::span<const double> input) {
  check_input_rows(params, static_cast<Eigen::Index>(input.size()));
  Eigen::VectorXd x = as_vector(input);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    Eigen::VectorXd z = layer.weights * x + layer.bias;
    x = l + 1 < params.layers.size() ? Eigen::VectorXd(activate(z, params.activation)) : z;
  }
  return x;
}

Eigen::MatrixXd mlp_forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs) {
  check_input_rows(params, inputs.rows());
  Eigen::MatrixXd x = inputs;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    Eigen::MatrixXd z = layer.weights * x;
    z.colwise() += layer.bias;
    x = l + 1 < params.layers.size() ? activate(z, params.activation) : std::move(z);
  }
  return x;
}

MlpGradients mlp_gradient_batch(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                const Eigen::MatrixXd& output_gradients) {
  ForwardCache cache = forward_with_cache(params, inputs);
  if (output_gradients.rows() != cache.output.rows() ||
      output_gradients.cols() != cache.output.cols()) {
    throw shape_error("output gradient shape does not match network output");
  }
  MlpGradients grads;
  grads.layers.resize(params.layers.size());
  Eigen::MatrixXd delta = output_gradients;  // d loss / d pre-activation
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    grads.layers[l].weights = delta * cache.inputs[l].transpose();
    grads.layers[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd upstream = params.layers[l].weights.transpose() * delta;
    delta = upstream.cwiseProduct(
        activation_derivative(cache.pre[l - 1], cache.inputs[l], params.activation));
  }
  return grads;
}

MlpGradients mlp_gradient(const MlpParams& params, std::span<const double> input,
                          std::span<const double> output_gradient) {
  check_input_rows(params, static_cast<Eigen::Index>(input.size()));
  if (output_gradient.size() != params.output_dim()) {
    throw shape_error("output gradient has dimension " + std::to_string(output_gradient.size()) +
                      ", network output is " + std::to_string(params.output_dim()));
  }
  return mlp_gradient_batch(params, Eigen::MatrixXd(as_vector(input)),
                            Eigen::MatrixXd(as_vector(output_gradient)));
}

double gradient_check(const MlpParams& params, std::span<const double> input,
                      std::size_t probe) {
  if (probe >= params.output_dim()) throw shape_error("probe index beyond network output");
  std::vector<double> one_hot(params.output_dim(), 0.0);
  one_hot[probe] = 1.0;
  const MlpGradients analytic = mlp_gradient(params, input, one_hot);

  constexpr double step = 1e-5;
  MlpParams probe_params = params;
  double worst = 0.0;
  auto compare = [&](double& slot, double analytic_value) {
    const double saved = slot;
    slot = saved + step;
    const double plus = mlp_forward(probe_params, input)(static_cast<Eigen::Index>(probe));
    slot = saved - step;
    const double minus = mlp_forward(probe_params, input)(static_cast<Eigen::Index>(probe));
    slot = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    const double denom = std::max({std::abs(analytic_value), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic_value - numeric) / denom);
  };
  for (std::size_t l = 0; l < probe_params.layers.size(); ++l) {
    auto& layer = probe_params.layers[l];
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        compare(layer.weights(r, c), analytic.layers[l].weights(r, c));
      }
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
      compare(layer.bias(r), analytic.layers[l].bias(r));
    }
  }
  return worst;
}

std::string format_mlp(const MlpParams& params) {
  std::ostringstream out;
  out << "mlp," << to_string(params.activation) << ',' << params.layers.size() << '\n';
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    out << "layer," << l << ',' << layer.weights.rows() << ',' << layer.weights.cols() << '\n';
    out << 'w';
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        out << ',' << csv::format_double(layer.weights(r, c));
      }
    }
    out << "\nb";
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
      out << ',' << csv::format_double(layer.bias(r));
    }
    out << '\n';
  }
  return out.str();
}

MlpParams parse_mlp(std::string_view text) {
  std::vector<std::string> lines = csv::split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw invalid_argument_error("empty network checkpoint");
  const auto head = csv::split(lines[0], ',');
  if (head.size() != 3 || head[0] != "mlp") throw invalid_argument_error("bad checkpoint header");
  MlpParams params;
  params.activation = activation_from_string(head[1]);
  const auto count = static_cast<std::size_t>(csv::parse_int(head[2]));
  if (lines.size() != 1 + 3 * count) throw invalid_argument_error("truncated network checkpoint");
  for (std::size_t l = 0; l < count; ++l) {
    const auto shape = csv::split(lines[1 + 3 * l], ',');
    if (shape.size() != 4 || shape[0] != "layer") throw invalid_argument_error("bad layer header");
    const auto rows = static_cast<Eigen::Index>(csv::parse_int(shape[2]));
    const auto cols = static_cast<Eigen::Index>(csv::parse_int(shape[3]));
    const auto w = csv::split(lines[2 + 3 * l], ',');
    const auto b = csv::split(lines[3 + 3 * l], ',');
    if (w.empty() || w[0] != "w" || static_cast<Eigen::Index>(w.size()) != rows * cols + 1 ||
        b.empty() || b[0] != "b" || static_cast<Eigen::Index>(b.size()) != rows + 1) {
      throw shape_error("layer " + std::to_string(l) + " values do not match its shape");
    }
    DenseLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        layer.weights(r, c) = csv::parse_double(w[1 + r * cols + c]);
      }
      layer.bias(r) = csv::parse_double(b[1 + r]);
    }
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

}  // namespace space::approx
