#include "space/harness/config.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "space/core/csv.hpp"
#include "space/core/errors.hpp"

namespace space::harness {

std::string_view to_string(SchedulerKind kind) noexcept {
  switch (kind) {
    case SchedulerKind::space: return "space";
    case SchedulerKind::cspace: return "cspace";
    case SchedulerKind::round_robin: return "round_robin";
  }
  return "unknown";
}

SchedulerKind scheduler_kind_from_string(std::string_view name) {
  if (name == "space") return SchedulerKind::space;
  if (name == "cspace") return SchedulerKind::cspace;
  if (name == "round_robin") return SchedulerKind::round_robin;
  throw invalid_argument_error("unknown scheduler: '" + std::string(name) + "'");
}

std::vector<std::string> ExperimentConfig::validation_errors() const {
  std::vector<std::string> errors;
  auto collect = [&](auto&& check) {
    try {
      check();
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  };
  collect([&] { scheduler_config.validate(); });
  collect([&] { agent.validate(); });
  if (n_train < 1) errors.emplace_back("n_train must be at least 1");
  if (iterations < 1) errors.emplace_back("iterations must be at least 1");
  if (seeds.empty()) errors.emplace_back("at least one agent seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    errors.emplace_back("agent seeds must be distinct");
  }
  if (workers < 1) errors.emplace_back("workers must be at least 1");
  if (output_dir.empty()) errors.emplace_back("output_dir must not be empty");
  if (agent.hidden_sizes.empty()) errors.emplace_back("agent.hidden_sizes must not be empty");
  return errors;
}

void ExperimentConfig::validate() const {
  const auto errors = validation_errors();
  if (errors.empty()) return;
  std::string message = "invalid configuration: ";
  for (std::size_t i = 0; i < errors.size(); ++i) message += (i ? "; " : "") + errors[i];
  throw invalid_argument_error(message);
}

ExperimentConfig default_config(envs::EnvKind kind) {
  ExperimentConfig config;
  config.environment = kind;
  switch (kind) {
    case envs::EnvKind::cartpole:
      config.scheduler_config.eta = 0.025;
      config.n_train = 3;
      config.n_test = 0;
      config.iterations = 100000;
      config.max_episodes = 2000;
      config.agent.hidden_sizes = {64, 64};
      config.agent.epsilon_decay_steps = 10000;
      config.output_dir = "runs/cartpole";
      break;
    case envs::EnvKind::pointmass:
      config.scheduler_config.eta = 0.05;
      config.n_train = 100;
      config.n_test = 100;
      config.iterations = 100000;
      config.max_episodes = 2000;
      config.agent.hidden_sizes = {64, 64, 64};
      config.agent.epsilon_decay_steps = 20000;
      config.output_dir = "runs/pointmass";
      break;
    case envs::EnvKind::maze:
      config.scheduler_config.eta = 0.05;
      config.n_train = 100;
      config.n_test = 100;
      config.iterations = 100000;
      config.max_episodes = 1000;
      config.agent.hidden_sizes = {64, 64};
      config.agent.epsilon_decay_steps = 10000;
      config.output_dir = "runs/maze";
      break;
  }
  return config;
}

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw invalid_argument_error("not a boolean: '" + value + "'");
}

std::size_t parse_count(const std::string& value) {
  const long long v = csv::parse_int(value);
  if (v < 0) throw invalid_argument_error("expected a non-negative integer, got '" + value + "'");
  return static_cast<std::size_t>(v);
}

std::string format_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? "," : "") + std::to_string(sizes[i]);
  return out;
}

std::string format_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) out += (i ? "," : "") + std::to_string(seeds[i]);
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field real_field(T ExperimentConfig::*group, double T::*member) {
  return {[=](ExperimentConfig& c, const std::string& v) { (c.*group).*member = csv::parse_double(v); },
          [=](const ExperimentConfig& c) { return csv::format_double((c.*group).*member); }};
}

template <typename T>
Field count_field(T ExperimentConfig::*group, std::size_t T::*member) {
  return {[=](ExperimentConfig& c, const std::string& v) { (c.*group).*member = parse_count(v); },
          [=](const ExperimentConfig& c) { return std::to_string((c.*group).*member); }};
}

template <typename P>
Field env_real(P envs::EnvParams::*group, double P::*member) {
  return {[=](ExperimentConfig& c, const std::string& v) {
            (c.env_params.*group).*member = csv::parse_double(v);
          },
          [=](const ExperimentConfig& c) {
            return csv::format_double((c.env_params.*group).*member);
          }};
}

template <typename P>
Field env_count(P envs::EnvParams::*group, std::size_t P::*member) {
  return {[=](ExperimentConfig& c, const std::string& v) {
            (c.env_params.*group).*member = parse_count(v);
          },
          [=](const ExperimentConfig& c) { return std::to_string((c.env_params.*group).*member); }};
}

// Ordered key table; `environment` is handled before the others.
const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  using S = curriculum::SchedulerConfig;
  using A = agent::AgentConfig;
  using envs::CartPoleParams;
  using envs::EnvParams;
  using envs::MazeParams;
  using envs::PointMassParams;
  static const std::vector<std::pair<std::string, Field>> table{
      {"environment",
       {[](C& c, const std::string& v) { c.environment = envs::env_kind_from_string(v); },
        [](const C& c) { return std::string(envs::to_string(c.environment)); }}},
      {"scheduler",
       {[](C& c, const std::string& v) { c.scheduler = scheduler_kind_from_string(v); },
        [](const C& c) { return std::string(to_string(c.scheduler)); }}},
      {"eta", real_field(&C::scheduler_config, &S::eta)},
      {"kappa", count_field(&C::scheduler_config, &S::kappa)},
      {"kappa_mode",
       {[](C& c, const std::string& v) {
          c.scheduler_config.kappa_mode = curriculum::kappa_mode_from_string(v);
        },
        [](const C& c) { return std::string(curriculum::to_string(c.scheduler_config.kappa_mode)); }}},
      {"dynamic_eta",
       {[](C& c, const std::string& v) { c.scheduler_config.dynamic_eta = parse_bool(v); },
        [](const C& c) { return std::string(c.scheduler_config.dynamic_eta ? "true" : "false"); }}},
      {"epsilon_dyn", real_field(&C::scheduler_config, &S::epsilon_dyn)},
      {"patience", count_field(&C::scheduler_config, &S::patience)},
      {"max_eta", real_field(&C::scheduler_config, &S::max_eta)},
      {"n_train",
       {[](C& c, const std::string& v) { c.n_train = parse_count(v); },
        [](const C& c) { return std::to_string(c.n_train); }}},
      {"n_test",
       {[](C& c, const std::string& v) { c.n_test = parse_count(v); },
        [](const C& c) { return std::to_string(c.n_test); }}},
      {"instance_seed",
       {[](C& c, const std::string& v) { c.instance_seed = parse_count(v); },
        [](const C& c) { return std::to_string(c.instance_seed); }}},
      {"seeds",
       {[](C& c, const std::string& v) { c.seeds = parse_seed_list(v); },
        [](const C& c) { return format_seeds(c.seeds); }}},
      {"iterations",
       {[](C& c, const std::string& v) { c.iterations = parse_count(v); },
        [](const C& c) { return std::to_string(c.iterations); }}},
      {"max_episodes",
       {[](C& c, const std::string& v) { c.max_episodes = parse_count(v); },
        [](const C& c) { return std::to_string(c.max_episodes); }}},
      {"eval_interval",
       {[](C& c, const std::string& v) { c.eval_interval = parse_count(v); },
        [](const C& c) { return std::to_string(c.eval_interval); }}},
      {"workers",
       {[](C& c, const std::string& v) { c.workers = parse_count(v); },
        [](const C& c) { return std::to_string(c.workers); }}},
      {"output_dir",
       {[](C& c, const std::string& v) { c.output_dir = v; },
        [](const C& c) { return c.output_dir; }}},
      {"agent.gamma", real_field(&C::agent, &A::gamma)},
      {"agent.epsilon_start", real_field(&C::agent, &A::epsilon_start)},
      {"agent.epsilon_end", real_field(&C::agent, &A::epsilon_end)},
      {"agent.epsilon_decay_steps", count_field(&C::agent, &A::epsilon_decay_steps)},
      {"agent.replay_capacity", count_field(&C::agent, &A::replay_capacity)},
      {"agent.batch_size", count_field(&C::agent, &A::batch_size)},
      {"agent.target_sync_interval", count_field(&C::agent, &A::target_sync_interval)},
      {"agent.learning_rate", real_field(&C::agent, &A::learning_rate)},
      {"agent.optimizer",
       {[](C& c, const std::string& v) { c.agent.optimizer = approx::optimizer_kind_from_string(v); },
        [](const C& c) { return std::string(approx::to_string(c.agent.optimizer)); }}},
      {"agent.hidden_sizes",
       {[](C& c, const std::string& v) {
          c.agent.hidden_sizes.clear();
          for (const auto& part : csv::split(v, ',')) c.agent.hidden_sizes.push_back(parse_count(part));
        },
        [](const C& c) { return format_sizes(c.agent.hidden_sizes); }}},
      {"agent.activation",
       {[](C& c, const std::string& v) { c.agent.activation = approx::activation_from_string(v); },
        [](const C& c) { return std::string(approx::to_string(c.agent.activation)); }}},
      {"agent.gradient_clip", real_field(&C::agent, &A::gradient_clip)},
      {"cartpole.gravity", env_real(&EnvParams::cartpole, &CartPoleParams::gravity)},
      {"cartpole.cart_mass", env_real(&EnvParams::cartpole, &CartPoleParams::cart_mass)},
      {"cartpole.pole_mass", env_real(&EnvParams::cartpole, &CartPoleParams::pole_mass)},
      {"cartpole.force_magnitude", env_real(&EnvParams::cartpole, &CartPoleParams::force_magnitude)},
      {"cartpole.timestep", env_real(&EnvParams::cartpole, &CartPoleParams::timestep)},
      {"cartpole.angle_limit", env_real(&EnvParams::cartpole, &CartPoleParams::angle_limit)},
      {"cartpole.position_limit", env_real(&EnvParams::cartpole, &CartPoleParams::position_limit)},
      {"cartpole.episode_cap", env_count(&EnvParams::cartpole, &CartPoleParams::episode_cap)},
      {"cartpole.start_spread", env_real(&EnvParams::cartpole, &CartPoleParams::start_spread)},
      {"pointmass.mass", env_real(&EnvParams::pointmass, &PointMassParams::mass)},
      {"pointmass.force_magnitude",
       env_real(&EnvParams::pointmass, &PointMassParams::force_magnitude)},
      {"pointmass.timestep", env_real(&EnvParams::pointmass, &PointMassParams::timestep)},
      {"pointmass.position_limit",
       env_real(&EnvParams::pointmass, &PointMassParams::position_limit)},
      {"pointmass.episode_cap", env_count(&EnvParams::pointmass, &PointMassParams::episode_cap)},
      {"pointmass.goal_bonus", env_real(&EnvParams::pointmass, &PointMassParams::goal_bonus)},
      {"pointmass.start_x",
       {[](C& c, const std::string& v) { c.env_params.pointmass.start[0] = csv::parse_double(v); },
        [](const C& c) { return csv::format_double(c.env_params.pointmass.start[0]); }}},
      {"pointmass.start_y",
       {[](C& c, const std::string& v) { c.env_params.pointmass.start[1] = csv::parse_double(v); },
        [](const C& c) { return csv::format_double(c.env_params.pointmass.start[1]); }}},
      {"maze.step_penalty", env_real(&EnvParams::maze, &MazeParams::step_penalty)},
      {"maze.goal_reward", env_real(&EnvParams::maze, &MazeParams::goal_reward)},
      {"maze.episode_cap", env_count(&EnvParams::maze, &MazeParams::episode_cap)},
  };
  return table;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : csv::split(text, ',')) {
    const std::string token = trim(part);
    if (token.empty()) continue;
    seeds.push_back(parse_count(token));
  }
  if (seeds.empty()) throw invalid_argument_error("empty seed list");
  return seeds;
}

ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::string> errors;
  std::size_t line_no = 0;
  for (const auto& raw : csv::split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  envs::EnvKind kind = envs::EnvKind::pointmass;
  for (const auto& [key, value] : entries) {
    if (key != "environment") continue;
    try {
      kind = envs::env_kind_from_string(value);
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  }
  ExperimentConfig config = default_config(kind);

  std::map<std::string, const Field*> lookup;
  for (const auto& [key, field] : fields()) lookup[key] = &field;
  for (const auto& [key, value] : entries) {
    if (key == "environment") continue;
    auto it = lookup.find(key);
    if (it == lookup.end()) {
      errors.push_back("unknown key '" + key + "'");
      continue;
    }
    try {
      it->second->set(config, value);
    } catch (const std::exception& e) {
      errors.push_back(key + ": " + e.what());
    }
  }
  for (auto& e : config.validation_errors()) errors.push_back(std::move(e));
  if (!errors.empty()) {
    std::string message = "invalid configuration: ";
    for (std::size_t i = 0; i < errors.size(); ++i) message += (i ? "; " : "") + errors[i];
    throw invalid_argument_error(message);
  }
  return config;
}

ExperimentConfig read_config(const std::string& path) {
  std::string text;
  for (const auto& line : csv::read_lines(path)) text += line + "\n";
  return parse_config(text);
}

std::string format_config(const ExperimentConfig& config) {
  std::ostringstream out;
  for (const auto& [key, field] : fields()) out << key << " = " << field.get(config) << '\n';
  return out.str();
}

}  // namespace space::harness
