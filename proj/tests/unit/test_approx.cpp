#include <gtest/gtest.h>

#include <cmath>

#include "space/approx/mlp.hpp"
#include "space/approx/optimizer.hpp"
#include "space/core/errors.hpp"
#include "space/core/rng.hpp"

using namespace space;
using namespace space::approx;

namespace {

MlpParams single_linear(double w, double b) {
  MlpParams p;
  DenseLayer layer;
  layer.weights = Eigen::MatrixXd::Constant(1, 1, w);
  layer.bias = Eigen::VectorXd::Constant(1, b);
  p.layers.push_back(layer);
  return p;
}

std::vector<double> random_input(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

// Central differences of <g, f(x)> with respect to one parameter.
double numeric_partial(MlpParams params, std::size_t layer, bool bias, Eigen::Index r,
                       Eigen::Index c, std::span<const double> x, std::span<const double> g) {
  const double h = 1e-6;
  auto objective = [&](const MlpParams& p) {
    const auto y = mlp_forward(p, x);
    double s = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) s += g[k] * y[k];
    return s;
  };
  double& slot = bias ? params.layers[layer].bias(r) : params.layers[layer].weights(r, c);
  const double original = slot;
  slot = original + h;
  const double up = objective(params);
  slot = original - h;
  const double down = objective(params);
  return (up - down) / (2 * h);
}

}  // namespace

TEST(Mlp, ZeroWeightsGiveZeroOutput) {
  const std::vector<std::size_t> sizes{3, 4, 2};
  auto p = make_mlp(sizes, Activation::relu, 1);
  for (auto& l : p.layers) {
    l.weights.setZero();
    l.bias.setZero();
  }
  const std::vector<double> x{1.0, -2.0, 3.0};
  EXPECT_EQ(mlp_forward(p, x), Eigen::VectorXd::Zero(2));
}

TEST(Mlp, AffineSingleLayer) {
  const auto p = single_linear(2.0, 1.0);
  const std::vector<double> x{3.0};
  EXPECT_DOUBLE_EQ(mlp_forward(p, x)(0), 7.0);
}

TEST(Mlp, ForwardIsPure) {
  const std::vector<std::size_t> sizes{4, 8, 3};
  const auto p = make_mlp(sizes, Activation::tanh, 5);
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(mlp_forward(p, x), mlp_forward(p, x));
  EXPECT_EQ(p.input_dim(), 4u);
  EXPECT_EQ(p.output_dim(), 3u);
  EXPECT_EQ(p.parameter_count(), 4u * 8 + 8 + 8 * 3 + 3);
}

TEST(Mlp, InitializationRange) {
  const std::vector<std::size_t> sizes{16, 4};
  const auto p = make_mlp(sizes, Activation::relu, 2);
  EXPECT_LE(p.layers[0].weights.cwiseAbs().maxCoeff(), 0.25);
  EXPECT_EQ(p, make_mlp(sizes, Activation::relu, 2));
  EXPECT_NE(p, make_mlp(sizes, Activation::relu, 3));
}

TEST(Mlp, ShapeErrors) {
  const std::vector<std::size_t> sizes{3, 2};
  const auto p = make_mlp(sizes, Activation::relu, 1);
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(mlp_forward(p, wrong), shape_error);
}

TEST(MlpGradient, LinearCase) {
  const auto p = single_linear(2.0, 1.0);
  const std::vector<double> x{3.0}, g{1.0};
  const auto grads = mlp_gradient(p, x, g);
  EXPECT_DOUBLE_EQ(grads.layers[0].weights(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(grads.layers[0].bias(0), 1.0);
}

TEST(MlpGradient, DeadReluUnits) {
  const std::vector<std::size_t> sizes{2, 3, 1};
  auto p = make_mlp(sizes, Activation::relu, 4);
  p.layers[0].weights.setZero();
  p.layers[0].bias.setConstant(-1.0);
  const std::vector<double> x{0.5, -0.5}, g{1.0};
  const auto grads = mlp_gradient(p, x, g);
  EXPECT_EQ(grads.layers[0].weights, Eigen::MatrixXd::Zero(3, 2));
  EXPECT_EQ(grads.layers[0].bias, Eigen::VectorXd::Zero(3));
}

TEST(MlpGradient, MatchesFiniteDifferences) {
  Rng rng(17);
  for (auto act : {Activation::relu, Activation::tanh}) {
    const std::vector<std::size_t> sizes{3, 5, 2};
    const auto p = make_mlp(sizes, act, 8);
    const auto x = random_input(3, rng);
    const std::vector<double> g{0.7, -1.3};
    const auto grads = mlp_gradient(p, x, g);
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
      for (Eigen::Index r = 0; r < p.layers[l].weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.layers[l].weights.cols(); ++c) {
          const double num = numeric_partial(p, l, false, r, c, x, g);
          const double ana = grads.layers[l].weights(r, c);
          EXPECT_LE(std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), 1e-6}), 1e-4);
        }
        const double num = numeric_partial(p, l, true, r, 0, x, g);
        const double ana = grads.layers[l].bias(r);
        EXPECT_LE(std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), 1e-6}), 1e-4);
      }
    }
  }
}

TEST(MlpGradient, BatchSumsSamples) {
  Rng rng(2);
  const std::vector<std::size_t> sizes{3, 4, 2};
  const auto p = make_mlp(sizes, Activation::tanh, 3);
  Eigen::MatrixXd X(3, 2), G(2, 2);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-1, 1);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.uniform(-1, 1);
  const auto batch = mlp_gradient_batch(p, X, G);
  const auto forward = mlp_forward_batch(p, X);
  auto col = [](const Eigen::MatrixXd& m, Eigen::Index j) {
    return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
  };
  const auto g0 = mlp_gradient(p, col(X, 0), col(G, 0));
  const auto g1 = mlp_gradient(p, col(X, 1), col(G, 1));
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    EXPECT_TRUE(batch.layers[l].weights.isApprox(g0.layers[l].weights + g1.layers[l].weights));
    EXPECT_TRUE(batch.layers[l].bias.isApprox(g0.layers[l].bias + g1.layers[l].bias));
  }
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_TRUE(forward.col(j).isApprox(mlp_forward(p, col(X, j))));
  }
}

TEST(GradientCheck, Examples) {
  const std::vector<std::size_t> linear{3, 2};
  const std::vector<double> x3{0.3, -0.2, 0.9};
  EXPECT_LT(gradient_check(make_mlp(linear, Activation::relu, 1), x3, 1), 1e-9);

  const std::vector<std::size_t> tanh_sizes{2, 8, 2};
  const std::vector<double> x2{0.4, -0.7};
  EXPECT_LT(gradient_check(make_mlp(tanh_sizes, Activation::tanh, 6), x2, 0), 1e-4);

  auto zero = make_mlp(tanh_sizes, Activation::tanh, 6);
  for (auto& l : zero.layers) {
    l.weights.setZero();
    l.bias.setZero();
  }
  const double err = gradient_check(zero, x2, 1);
  EXPECT_TRUE(std::isfinite(err));
  EXPECT_LT(err, 1e-6);
  EXPECT_THROW(gradient_check(zero, x2, 2), shape_error);
}

TEST(MlpCheckpoint, ExactRoundTrip) {
  const std::vector<std::size_t> sizes{5, 7, 3};
  const auto p = make_mlp(sizes, Activation::tanh, 12);
  EXPECT_EQ(parse_mlp(format_mlp(p)), p);
  EXPECT_THROW(parse_mlp("mlp,relu,1\nlayer,0,2,2\nw,1,2,3\nb,1,2\n"), std::exception);
}

TEST(Optimizer, SgdStep) {
  auto p = single_linear(1.0, 0.0);
  auto state = make_optimizer(OptimizerKind::sgd, 0.1, p);
  auto g = zero_gradients(p);
  g.layers[0].weights(0, 0) = 2.0;
  optimizer_step(state, p, g);
  EXPECT_DOUBLE_EQ(p.layers[0].weights(0, 0), 0.8);
  EXPECT_EQ(state.step, 1u);
}

TEST(Optimizer, AdamFirstStepIsLearningRate) {
  auto p = single_linear(1.0, 0.0);
  auto state = make_optimizer(OptimizerKind::adam, 0.001, p);
  auto g = zero_gradients(p);
  g.layers[0].weights(0, 0) = 1.0;
  optimizer_step(state, p, g);
  // t = 1: m = 0.1, v = 0.001; m_hat = 1, v_hat = 1; step = lr / (1 + eps).
  EXPECT_NEAR(p.layers[0].weights(0, 0), 1.0 - 0.001 / (1.0 + 1e-8), 1e-15);
  EXPECT_DOUBLE_EQ(p.layers[0].bias(0), 0.0);
}

TEST(Optimizer, ZeroGradientKeepsParams) {
  const std::vector<std::size_t> sizes{2, 3, 1};
  auto p = make_mlp(sizes, Activation::relu, 1);
  const auto before = p;
  auto state = make_optimizer(OptimizerKind::adam, 0.01, p);
  optimizer_step(state, p, zero_gradients(p));
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.step, 1u);
}

TEST(Optimizer, RejectsBadGradientsWithoutMutation) {
  const std::vector<std::size_t> sizes{2, 3, 1};
  auto p = make_mlp(sizes, Activation::relu, 1);
  const auto before = p;
  auto state = make_optimizer(OptimizerKind::adam, 0.01, p);
  auto g = zero_gradients(p);
  g.layers[1].bias(0) = std::nan("");
  EXPECT_THROW(optimizer_step(state, p, g), numeric_domain_error);
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.step, 0u);
  MlpGradients wrong;
  EXPECT_THROW(optimizer_step(state, p, wrong), shape_error);
}
