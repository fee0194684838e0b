#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "chain_mdp.hpp"
#include "space/agent/replay_buffer.hpp"
#include "space/agent/value_agent.hpp"
#include "space/core/errors.hpp"
#include "space/envs/sampling.hpp"

using namespace space;
using namespace space::agent;

namespace {

Instance chain_instance(InstanceId id = 0, double c = 0.0) {
  return Instance{id, Context{{c}, {"c"}, std::nullopt}};
}

Transition transition(std::vector<double> obs, std::size_t a, double r,
                      std::vector<double> next, bool done) {
  return Transition{std::move(obs), a, r, std::move(next), done};
}

void zero_network(ValueAgent& agent) {
  for (auto& l : agent.mutable_online().layers) {
    l.weights.setZero();
    l.bias.setZero();
  }
  agent.sync_target();
}

AgentConfig chain_config() {
  AgentConfig c;
  c.gamma = 0.95;
  c.epsilon_start = 1.0;
  c.epsilon_end = 0.1;
  c.epsilon_decay_steps = 2000;
  c.replay_capacity = 5000;
  c.batch_size = 32;
  c.target_sync_interval = 100;
  c.learning_rate = 2e-3;
  c.hidden_sizes = {16};
  return c;
}

}  // namespace

TEST(GreedyAction, ArgmaxWithLowIndexTies) {
  const std::vector<double> q{1, 3, 2};
  EXPECT_EQ(greedy_action(q), 1u);
  const std::vector<double> tie{2, 2};
  EXPECT_EQ(greedy_action(tie), 0u);
  EXPECT_THROW(greedy_action({}), shape_error);
}

TEST(ValueAgent, UniformExplorationAtEpsilonOne) {
  AgentConfig c;
  c.epsilon_start = 1.0;
  c.epsilon_end = 1.0;
  ValueAgent agent(3, 2, c, 4);
  const std::vector<double> obs{0.1, 0.2, 0.3};
  std::size_t ones = 0;
  for (int i = 0; i < 10000; ++i) ones += agent.act(obs, false);
  const double freq = double(ones) / 10000.0;
  EXPECT_GE(freq, 0.45);
  EXPECT_LE(freq, 0.55);
}

TEST(ValueAgent, EpsilonDecaysLinearly) {
  AgentConfig c;
  c.epsilon_start = 1.0;
  c.epsilon_end = 0.0;
  c.epsilon_decay_steps = 10;
  c.batch_size = 1000;
  c.replay_capacity = 1000;
  ValueAgent agent(3, 2, c, 0);
  oracle::ChainEnv env(5);
  EXPECT_DOUBLE_EQ(agent.epsilon(), 1.0);
  const Instance inst = chain_instance();
  while (agent.env_steps() < 5) agent.train_on_instances(env, std::span(&inst, 1), 1);
  EXPECT_NEAR(agent.epsilon(), 1.0 - double(agent.env_steps()) / 10.0, 1e-12);
}

TEST(ValueAgent, TerminalTargetIsReward) {
  AgentConfig c;
  c.optimizer = approx::OptimizerKind::sgd;
  ValueAgent agent(3, 2, c, 1);
  zero_network(agent);
  const std::vector<Transition> batch{transition({1, 0, 0}, 1, 1.0, {0, 1, 0}, true)};
  EXPECT_DOUBLE_EQ(agent.td_update(batch), 1.0);
}

TEST(ValueAgent, ZeroDiscountTargetIsReward) {
  AgentConfig c;
  c.gamma = 0.0;
  ValueAgent agent(3, 2, c, 1);
  zero_network(agent);
  agent.mutable_online().layers.back().bias.setConstant(5.0);
  agent.sync_target();
  agent.mutable_online().layers.back().bias.setZero();
  const std::vector<Transition> batch{transition({1, 0, 0}, 0, 2.0, {0, 1, 0}, false)};
  EXPECT_DOUBLE_EQ(agent.td_update(batch), 4.0);
}

TEST(ValueAgent, BootstrapUsesTargetNetwork) {
  AgentConfig c;
  c.gamma = 0.5;
  ValueAgent agent(3, 2, c, 1);
  zero_network(agent);
  agent.mutable_online().layers.back().bias << 0.0, 3.0;
  agent.sync_target();
  // Online Q(s, 0) = 0, target max = 3, so error = 0 - (1 + 0.5 * 3).
  const std::vector<Transition> batch{transition({1, 0, 0}, 0, 1.0, {0, 1, 0}, false)};
  EXPECT_DOUBLE_EQ(agent.td_update(batch), 2.5 * 2.5);
}

TEST(ValueAgent, ZeroNetworkValueIsZero) {
  ValueAgent agent(3, 2, AgentConfig{}, 1);
  zero_network(agent);
  oracle::ChainEnv env;
  EXPECT_EQ(agent.evaluate_value(env, chain_instance()), 0.0);
}

TEST(ValueAgent, IdenticalContextsIdenticalValues) {
  ValueAgent agent(3, 2, AgentConfig{}, 9);
  oracle::ChainEnv env;
  EXPECT_EQ(agent.evaluate_value(env, chain_instance(0, 0.3)),
            agent.evaluate_value(env, chain_instance(7, 0.3)));
}

TEST(ValueAgent, ChainMdpMatchesValueIteration) {
  const auto oracle = oracle::solve_chain(0.95);
  ASSERT_NEAR(oracle.value[0], 0.95, 1e-12);
  ASSERT_NEAR(oracle.value[1], 1.0, 1e-12);

  ValueAgent agent(3, 2, chain_config(), 21);
  oracle::ChainEnv env;
  const Instance inst = chain_instance();
  agent.train_on_instances(env, std::span(&inst, 1), 3000);

  EXPECT_NEAR(agent.evaluate_value(env, inst), oracle.value[0], 0.05);
  for (int s = 0; s < 2; ++s) {
    env.reset(inst);
    const auto obs = env.observation_for(s);
    const auto q = agent.q_values(obs);
    EXPECT_NEAR(q[0], oracle.q[s][0], 0.05) << "state " << s;
    EXPECT_NEAR(q[1], oracle.q[s][1], 0.05) << "state " << s;
    EXPECT_EQ(agent.act(obs, true), oracle.policy[s]);
  }
}

TEST(ValueAgent, TrainingBookkeeping) {
  AgentConfig c;
  c.batch_size = 10000;
  c.replay_capacity = 10000;
  ValueAgent agent(3, 2, c, 2);
  oracle::ChainEnv env;
  const std::vector<Instance> instances{chain_instance(0), chain_instance(1, 0.5),
                                        chain_instance(2, 1.0)};
  const auto stats = agent.train_on_instances(env, instances, 1);
  EXPECT_EQ(stats.episodes, 3u);
  EXPECT_EQ(stats.per_instance.size(), 3u);
  EXPECT_EQ(stats.optimizer_steps, 0u);
  EXPECT_EQ(agent.optimizer_steps(), 0u);
  EXPECT_EQ(agent.replay().size(), stats.env_steps);
}

TEST(ValueAgent, DeterministicTraining) {
  auto env = envs::make_environment(envs::EnvKind::cartpole, envs::EnvParams{}, 3);
  const auto set = envs::sample_instances(envs::EnvKind::cartpole, 3, 0);
  AgentConfig c;
  c.batch_size = 8;
  ValueAgent a(5, 2, c, 11), b(5, 2, c, 11);
  const auto sa = a.train_on_instances(*env, set.instances(), 2);
  const auto sb = b.train_on_instances(*env, set.instances(), 2);
  EXPECT_EQ(sa.episode_returns, sb.episode_returns);
  EXPECT_EQ(sa.env_steps, sb.env_steps);
  EXPECT_TRUE(a.same_state(b));
  EXPECT_GT(sa.optimizer_steps, 0u);
}

TEST(ValueAgent, CheckpointRoundTrip) {
  oracle::ChainEnv env;
  const Instance inst = chain_instance();
  ValueAgent a(3, 2, chain_config(), 5);
  a.train_on_instances(env, std::span(&inst, 1), 50);
  ValueAgent b(3, 2, chain_config(), 6);
  b.load_checkpoint(a.format_checkpoint());
  EXPECT_EQ(b.online(), a.online());
  EXPECT_EQ(b.target(), a.target());
  EXPECT_EQ(b.env_steps(), a.env_steps());
  EXPECT_THROW(b.load_checkpoint("nonsense"), std::exception);
}

TEST(ValueAgent, ShapeChecks) {
  ValueAgent agent(3, 2, AgentConfig{}, 0);
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(agent.q_values(wrong), shape_error);
  auto env = envs::make_environment(envs::EnvKind::maze, envs::EnvParams{}, 0);
  const auto set = envs::sample_instances(envs::EnvKind::maze, 1, 0);
  EXPECT_THROW(agent.train_on_instances(*env, set.instances(), 1), shape_error);
  AgentConfig bad;
  bad.gamma = 2.0;
  EXPECT_THROW(ValueAgent(3, 2, bad, 0), invalid_argument_error);
}

TEST(ReplayBuffer, RingOverwriteAndSampling) {
  ReplayBuffer buffer(3);
  for (int i = 0; i < 5; ++i) buffer.push(transition({double(i)}, 0, double(i), {0.0}, false));
  EXPECT_EQ(buffer.size(), 3u);
  std::set<double> rewards;
  for (std::size_t i = 0; i < buffer.size(); ++i) rewards.insert(buffer[i].reward);
  EXPECT_EQ(rewards, (std::set<double>{2, 3, 4}));
  Rng rng(1);
  const auto sample = buffer.sample(50, rng);
  EXPECT_EQ(sample.size(), 50u);
  for (const auto& t : sample) EXPECT_TRUE(rewards.contains(t.reward));
  ReplayBuffer empty(2);
  EXPECT_THROW(empty.sample(1, rng), std::exception);
  EXPECT_THROW(ReplayBuffer(0), invalid_argument_error);
}
