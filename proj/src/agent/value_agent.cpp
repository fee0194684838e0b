#include "space/agent/value_agent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "space/core/csv.hpp"
#include "space/core/errors.hpp"

namespace space::agent {

void AgentConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw invalid_argument_error("gamma must lie in [0, 1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
        epsilon_end <= 1.0)) {
    throw invalid_argument_error("epsilon schedule must lie in [0, 1]");
  }
  if (batch_size < 1) throw invalid_argument_error("batch size must be at least 1");
  if (replay_capacity < batch_size) {
    throw invalid_argument_error("replay capacity must be at least the batch size");
  }
  if (target_sync_interval < 1) throw invalid_argument_error("target sync interval must be >= 1");
  if (!(learning_rate > 0.0)) throw invalid_argument_error("learning rate must be positive");
  if (!(gradient_clip >= 0.0)) throw invalid_argument_error("gradient clip must be >= 0");
}

std::size_t greedy_action(std::span<const double> q_values) {
  if (q_values.empty()) throw shape_error("no action values");
  std::size_t best = 0;
  for (std::size_t a = 1; a < q_values.size(); ++a) {
    if (q_values[a] > q_values[best]) best = a;
  }
  return best;
}

namespace {

std::vector<std::size_t> network_shape(std::size_t in, const std::vector<std::size_t>& hidden,
                                       std::size_t out) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

ValueAgent::ValueAgent(std::size_t observation_dim, std::size_t action_count,
                       AgentConfig config, std::uint64_t seed)
    : observation_dim_(observation_dim),
      action_count_(action_count),
      config_((config.validate(), std::move(config))),
      online_(approx::make_mlp(network_shape(observation_dim, config_.hidden_sizes, action_count),
                               config_.activation, derive_seed(seed, "network-init"))),
      target_(online_),
      optimizer_(approx::make_optimizer(config_.optimizer, config_.learning_rate, online_)),
      replay_(config_.replay_capacity),
      exploration_rng_(derive_seed(seed, "epsilon-greedy")),
      replay_rng_(derive_seed(seed, "replay-sampling")) {
  if (action_count_ < 1) throw invalid_argument_error("agent needs at least one action");
}

std::vector<double> ValueAgent::q_values(std::span<const double> observation) const {
  if (observation.size() != observation_dim_) {
    throw shape_error("observation has length " + std::to_string(observation.size()) +
                      ", agent expects " + std::to_string(observation_dim_));
  }
  const Eigen::VectorXd q = approx::mlp_forward(online_, observation);
  return {q.data(), q.data() + q.size()};
}

double ValueAgent::epsilon() const noexcept {
  if (config_.epsilon_decay_steps == 0) return config_.epsilon_end;
  const double progress =
      std::min(1.0, static_cast<double>(env_steps_) /
                        static_cast<double>(config_.epsilon_decay_steps));
  return config_.epsilon_start + (config_.epsilon_end - config_.epsilon_start) * progress;
}

std::size_t ValueAgent::act(std::span<const double> observation, bool greedy) {
  const auto q = q_values(observation);
  if (greedy) return greedy_action(q);
  if (exploration_rng_.uniform() < epsilon()) {
    return static_cast<std::size_t>(exploration_rng_.uniform_index(action_count_));
  }
  return greedy_action(q);
}

double ValueAgent::td_update(std::span<const Transition> batch) {
  if (batch.empty()) throw invalid_argument_error("TD batch must not be empty");
  const auto n = static_cast<Eigen::Index>(batch.size());
  const auto dim = static_cast<Eigen::Index>(observation_dim_);
  Eigen::MatrixXd obs(dim, n);
  Eigen::MatrixXd next_obs(dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& tr = batch[static_cast<std::size_t>(j)];
    if (tr.observation.size() != observation_dim_ ||
        tr.next_observation.size() != observation_dim_) {
      throw shape_error("transition observation has the wrong length");
    }
    if (tr.action >= action_count_) throw invalid_action_error("transition action out of range");
    obs.col(j) = Eigen::Map<const Eigen::VectorXd>(tr.observation.data(), dim);
    next_obs.col(j) = Eigen::Map<const Eigen::VectorXd>(tr.next_observation.data(), dim);
  }

  const Eigen::MatrixXd q = approx::mlp_forward_batch(online_, obs);
  const Eigen::MatrixXd q_next = approx::mlp_forward_batch(target_, next_obs);

  Eigen::MatrixXd output_grad = Eigen::MatrixXd::Zero(q.rows(), n);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& tr = batch[static_cast<std::size_t>(j)];
    double target = tr.reward;
    if (!tr.done) target += config_.gamma * q_next.col(j).maxCoeff();
    const auto a = static_cast<Eigen::Index>(tr.action);
    const double error = q(a, j) - target;
    loss += error * error;
    output_grad(a, j) = 2.0 * error / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw numeric_domain_error("TD loss is not finite");

  approx::MlpGradients grads = approx::mlp_gradient_batch(online_, obs, output_grad);
  if (config_.gradient_clip > 0.0) {
    double sq = 0.0;
    for (const auto& g : grads.layers) sq += g.weights.squaredNorm() + g.bias.squaredNorm();
    const double norm = std::sqrt(sq);
    if (norm > config_.gradient_clip) {
      const double scale = config_.gradient_clip / norm;
      for (auto& g : grads.layers) {
        g.weights *= scale;
        g.bias *= scale;
      }
    }
  }
  approx::optimizer_step(optimizer_, online_, grads);
  if (optimizer_.step % config_.target_sync_interval == 0) sync_target();
  return loss;
}

double ValueAgent::evaluate_value(ContextualEnvironment& env, const Instance& instance) const {
  const auto q = q_values(env.reset(instance));
  return *std::max_element(q.begin(), q.end());
}

TrainingStats ValueAgent::train_on_instances(ContextualEnvironment& env,
                                             std::span<const Instance> instances,
                                             std::size_t episodes_per_instance) {
  if (instances.empty()) throw invalid_argument_error("no instances to train on");
  if (env.observation_dimension() != observation_dim_ || env.action_count() != action_count_) {
    throw shape_error("environment does not match the agent's network");
  }
  TrainingStats stats;
  const std::uint64_t steps_before = optimizer_.step;
  for (const Instance& instance : instances) {
    double total = 0.0;
    for (std::size_t e = 0; e < episodes_per_instance; ++e) {
      std::vector<double> obs = env.reset(instance);
      double episode_return = 0.0;
      for (std::size_t t = 0; t < env.episode_cap(); ++t) {
        const std::size_t action = act(obs, false);
        StepResult step = env.step(action);
        episode_return += step.reward;
        ++env_steps_;
        ++stats.env_steps;
        const bool done = step.done;
        replay_.push(Transition{obs, action, step.reward, step.observation, done});
        obs = std::move(step.observation);
        if (replay_.size() >= config_.batch_size) {
          const auto batch = replay_.sample(config_.batch_size, replay_rng_);
          td_update(batch);
        }
        if (done) break;
      }
      total += episode_return;
      stats.episode_returns.push_back(episode_return);
      ++stats.episodes;
    }
    stats.per_instance.push_back(
        {instance.id, episodes_per_instance ? total / double(episodes_per_instance) : 0.0});
  }
  stats.optimizer_steps = static_cast<std::size_t>(optimizer_.step - steps_before);
  return stats;
}

Policy ValueAgent::greedy_policy() const {
  return [this](std::span<const double> obs) { return greedy_action(q_values(obs)); };
}

std::string ValueAgent::format_checkpoint() const {
  std::ostringstream out;
  out << "space-agent\n"
      << "gamma," << csv::format_double(config_.gamma) << '\n'
      << "epsilon," << csv::format_double(epsilon()) << '\n'
      << "env_steps," << env_steps_ << '\n'
      << "optimizer_steps," << optimizer_.step << '\n'
      << "online\n"
      << approx::format_mlp(online_) << "target\n"
      << approx::format_mlp(target_);
  return out.str();
}

void ValueAgent::load_checkpoint(const std::string& text) {
  const auto online_at = text.find("\nonline\n");
  const auto target_at = text.find("\ntarget\n");
  if (text.rfind("space-agent\n", 0) != 0 || online_at == std::string::npos ||
      target_at == std::string::npos || target_at < online_at) {
    throw invalid_argument_error("not an agent checkpoint");
  }
  std::uint64_t env_steps = 0;
  std::uint64_t optimizer_steps = 0;
  for (const auto& line : csv::split(text.substr(0, online_at), '\n')) {
    const auto fields = csv::split(line, ',');
    if (fields.size() != 2) continue;
    if (fields[0] == "gamma") config_.gamma = csv::parse_double(fields[1]);
    if (fields[0] == "env_steps") env_steps = static_cast<std::uint64_t>(csv::parse_int(fields[1]));
    if (fields[0] == "optimizer_steps") {
      optimizer_steps = static_cast<std::uint64_t>(csv::parse_int(fields[1]));
    }
  }
  auto online = approx::parse_mlp(text.substr(online_at + 8, target_at + 1 - (online_at + 8)));
  auto target = approx::parse_mlp(text.substr(target_at + 8));
  if (online.input_dim() != observation_dim_ || online.output_dim() != action_count_ ||
      target.input_dim() != observation_dim_ || target.output_dim() != action_count_) {
    throw shape_error("checkpoint networks do not match this agent");
  }
  online_ = std::move(online);
  target_ = std::move(target);
  env_steps_ = env_steps;
  optimizer_ = approx::make_optimizer(config_.optimizer, config_.learning_rate, online_);
  optimizer_.step = optimizer_steps;
}

bool ValueAgent::same_state(const ValueAgent& other) const {
  auto same_layers = [](const std::vector<approx::DenseLayer>& a,
                        const std::vector<approx::DenseLayer>& b) { return a == b; };
  return online_ == other.online_ && target_ == other.target_ &&
         optimizer_.step == other.optimizer_.step &&
         same_layers(optimizer_.first_moment, other.optimizer_.first_moment) &&
         same_layers(optimizer_.second_moment, other.optimizer_.second_moment) &&
         replay_.size() == other.replay_.size() && env_steps_ == other.env_steps_ &&
         exploration_rng_ == other.exploration_rng_ && replay_rng_ == other.replay_rng_;
}

}  // namespace space::agent
