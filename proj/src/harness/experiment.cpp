#include "space/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "space/agent/value_agent.hpp"
#include "space/core/csv.hpp"
#include "space/core/errors.hpp"
#include "space/core/instance_io.hpp"
#include "space/core/rng.hpp"
#include "space/core/rollout.hpp"

namespace space::harness {

namespace fs = std::filesystem;

std::pair<InstanceSet, InstanceSet> split_instances(envs::EnvKind kind, std::size_t n_train,
                                                    std::size_t n_test, std::uint64_t seed) {
  InstanceSet train = envs::sample_instances(kind, n_train, seed, SetKind::train);
  std::set<std::vector<double>> seen;
  for (const auto& inst : train) seen.insert(inst.context.features);

  std::vector<Instance> test;
  const std::uint64_t stream = derive_seed(seed, "test-instances");
  const std::uint64_t max_draws = 1000 * (n_test + 1) + 100000;
  std::uint64_t index = 0;
  while (test.size() < n_test) {
    if (index >= max_draws) {
      throw invalid_argument_error("cannot draw " + std::to_string(n_test) +
                                   " test instances disjoint from the train set");
    }
    Context ctx = envs::draw_context(kind, stream, index++);
    if (seen.contains(ctx.features)) continue;
    test.push_back(Instance{static_cast<InstanceId>(n_train + test.size()), std::move(ctx)});
  }
  return {std::move(train), InstanceSet(std::move(test), SetKind::test)};
}

SeedResult run_seed(const ExperimentConfig& config, const InstanceSet& train,
                    const InstanceSet& test, std::uint64_t seed) {
  config.validate();
  if (train.empty()) throw invalid_argument_error("empty train set");

  const auto& params = config.env_params;
  auto env = envs::make_environment(config.environment, params, derive_seed(seed, "environment"));
  auto eval_env =
      envs::make_environment(config.environment, params, derive_seed(seed, "environment"));
  agent::ValueAgent learner(env->observation_dimension(), env->action_count(), config.agent,
                            seed);

  SeedResult result;
  result.seed = seed;
  result.train_ids = train.ids();
  std::sort(result.train_ids.begin(), result.train_ids.end());

  const std::size_t interval = config.effective_eval_interval();
  const std::size_t budget =
      config.max_episodes == 0 ? std::numeric_limits<std::size_t>::max() : config.max_episodes;
  std::size_t iteration = 0;
  std::size_t last_eval = std::numeric_limits<std::size_t>::max();

  auto evaluate = [&] {
    const Policy policy = learner.greedy_policy();
    const double gamma = config.agent.gamma;
    InstanceEvalRow row{iteration, result.env_steps, {}};
    double train_total = 0.0;
    for (InstanceId id : result.train_ids) {
      const auto r = rollout(*eval_env, train.by_id(id), policy, eval_env->episode_cap(), gamma);
      row.returns.push_back(r.undiscounted_return);
      train_total += r.undiscounted_return;
    }
    double test_mean = std::numeric_limits<double>::quiet_NaN();
    if (!test.empty()) {
      test_mean = mean_return_over_set(*eval_env, test, policy, eval_env->episode_cap(), gamma);
    }
    result.curve.push_back(CurvePoint{seed, iteration, result.episodes, result.env_steps,
                                      train_total / double(result.train_ids.size()), test_mean});
    result.instance_evals.push_back(std::move(row));
    last_eval = result.episodes;
  };

  auto train_one = [&](const Instance& instance) {
    const auto stats = learner.train_on_instances(*env, std::span(&instance, 1), 1);
    result.episodes += stats.episodes;
    result.env_steps += stats.env_steps;
    if (result.episodes % interval == 0) evaluate();
  };

  evaluate();

  if (config.scheduler == SchedulerKind::round_robin) {
    for (InstanceId id : result.train_ids) result.additions.push_back({1, id});
    std::size_t cursor = 0;
    for (std::size_t it = 1; it <= config.iterations && result.episodes < budget; ++it) {
      iteration = it;
      result.curriculum_log.push_back({iteration, result.train_ids.size(), result.train_ids});
      for (std::size_t k = 0; k < train.size() && result.episodes < budget; ++k) {
        const auto pick = curriculum::round_robin_next(cursor, train);
        cursor = pick.cursor;
        train_one(pick.instance);
      }
    }
  } else {
    const ContextMap contexts = context_map(train);
    curriculum::CurriculumState state =
        curriculum::initial_state(result.train_ids, seed);
    for (std::size_t it = 1; it <= config.iterations && result.episodes < budget; ++it) {
      iteration = it;
      result.curriculum_log.push_back({iteration, state.current_ids.size(), state.current_ids});
      for (InstanceId id : state.current_ids) {
        if (result.episodes >= budget) break;
        train_one(train.by_id(id));
      }
      if (iteration == config.iterations || result.episodes >= budget) break;
      curriculum::ValueMap values;
      for (InstanceId id : result.train_ids) {
        values[id] = learner.evaluate_value(*eval_env, train.by_id(id));
      }
      state = config.scheduler == SchedulerKind::space
                  ? curriculum::scheduler_step(state, values, config.scheduler_config)
                  : curriculum::cspace_scheduler_step(state, values, config.scheduler_config,
                                                      contexts);
      result.scheduler_trace.push_back({iteration, state.last_mean_abs, state.last_eta,
                                        state.last_grew, state.last_dynamic});
    }
    result.additions = state.addition_log;
  }
  if (last_eval != result.episodes) evaluate();
  return result;
}

namespace {

std::string seed_dir(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

void write_file(const fs::path& root, const std::string& relative, std::string_view text,
                std::vector<std::string>& files) {
  csv::write_text((root / relative).string(), text);
  files.push_back(relative);
}

double final_smoothed(const std::vector<double>& series) {
  if (series.empty()) return std::numeric_limits<double>::quiet_NaN();
  return smooth(series).back();
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path root(config.output_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) {
    throw io_error("cannot create output directory '" + config.output_dir + "'");
  }
  RunArtifacts artifacts;
  artifacts.output_dir = config.output_dir;
  write_file(root, "config.txt", format_config(config), artifacts.files);

  const auto [train, test] =
      split_instances(config.environment, config.n_train, config.n_test, config.instance_seed);
  write_file(root, "train_instances.csv", format_instance_set(train), artifacts.files);
  write_file(root, "test_instances.csv", format_instance_set(test), artifacts.files);

  artifacts.seeds.resize(config.seeds.size());
  std::vector<std::exception_ptr> failures(config.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
      try {
        artifacts.seeds[i] = run_seed(config, train, test, config.seeds[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t thread_count = std::min(config.workers, config.seeds.size());
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<CurvePoint> curve;
  for (const auto& seed : artifacts.seeds) {
    curve.insert(curve.end(), seed.curve.begin(), seed.curve.end());
    const std::string dir = seed_dir(seed.seed);
    fs::create_directories(root / dir, ec);
    if (ec) throw io_error("cannot create directory '" + (root / dir).string() + "'");
    write_file(root, dir + "/curriculum.csv", curriculum::format_curriculum_log(seed.curriculum_log),
               artifacts.files);
    write_file(root, dir + "/additions.csv", curriculum::format_addition_log(seed.additions),
               artifacts.files);
    write_file(root, dir + "/instance_eval.csv",
               format_instance_evals(seed.train_ids, seed.instance_evals), artifacts.files);
    write_file(root, dir + "/scheduler_trace.csv", format_scheduler_trace(seed.scheduler_trace),
               artifacts.files);
  }
  write_file(root, "learning_curve.csv", format_learning_curve(curve), artifacts.files);
  analyze_run(config.output_dir);
  artifacts.files.push_back("analysis.csv");
  return artifacts;
}

std::string analyze_run(const std::string& run_dir) {
  const fs::path root(run_dir);
  auto read = [&](const std::string& relative) {
    std::string text;
    for (const auto& line : csv::read_lines((root / relative).string())) text += line + "\n";
    return text;
  };
  const ExperimentConfig config = parse_config(read("config.txt"));
  const InstanceSet train = parse_instance_set(read("train_instances.csv"));
  const ContextMap contexts = context_map(train);
  const auto curve = parse_learning_curve(read("learning_curve.csv"));

  std::ostringstream out;
  out << "section,seed,key,value\n";
  auto row = [&](std::string_view section, std::uint64_t seed, const std::string& key, double v) {
    out << section << ',' << seed << ',' << key << ',' << csv::format_double(v) << '\n';
  };

  std::vector<std::vector<InstanceId>> orders;
  for (std::uint64_t seed : config.seeds) {
    const std::string dir = seed_dir(seed);
    const auto log = curriculum::parse_curriculum_log(read(dir + "/curriculum.csv"));
    const auto additions = curriculum::parse_addition_log(read(dir + "/additions.csv"));
    const auto evals = parse_instance_evals(read(dir + "/instance_eval.csv"));
    const auto trace = analysis::make_trace(log, additions);
    orders.push_back(trace.addition_order);

    std::vector<double> train_series;
    std::vector<double> test_series;
    for (const auto& p : curve) {
      if (p.seed != seed) continue;
      train_series.push_back(p.train_mean_return);
      test_series.push_back(p.test_mean_return);
    }
    row("curve", seed, "final_train_smoothed", final_smoothed(train_series));
    row("curve", seed, "final_test_smoothed", final_smoothed(test_series));
    row("curve", seed, "iterations", double(log.size()));

    const auto drift = analysis::curriculum_drift(trace, contexts);
    row("drift", seed, "mean_percent", drift.mean_percent);
    row("drift", seed, "max_percent", drift.max_percent);

    const std::size_t points = evals.empty() ? 0 : evals.begin()->second.size();
    const auto forgetting = points >= 2 ? analysis::forgetting_count_relative(evals)
                                        : analysis::Forgetting{};
    row("forgetting", seed, "count", double(forgetting.count));
    for (InstanceId id : forgetting.ids) row("forgetting", seed, "id_" + std::to_string(id), 1.0);

    const auto ids = train.ids();
    if (!trace.iterations.empty()) {
      const auto usage = analysis::usage_frequency(trace, train.size(), ids);
      for (const auto& [id, count] : usage.counts) {
        row("usage_count", seed, "id_" + std::to_string(id), double(count));
      }
      for (const auto& [id, weight] : usage.weighted) {
        row("usage_weighted", seed, "id_" + std::to_string(id), weight);
      }
    }
  }

  const auto tau = analysis::pairwise_kendall(orders);
  for (std::size_t a = 0; a < tau.size(); ++a) {
    for (std::size_t b = 0; b < tau.size(); ++b) {
      row("kendall", config.seeds[a], "seed_" + std::to_string(config.seeds[b]), tau[a][b]);
    }
  }
  const std::string text = out.str();
  csv::write_text((root / "analysis.csv").string(), text);
  return text;
}

std::vector<double> smooth(std::span<const double> series, std::size_t window) {
  if (window < 1) throw invalid_argument_error("smoothing window must be at least 1");
  std::vector<double> out;
  out.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t begin = i + 1 >= window ? i + 1 - window : 0;
    double exact = 0.0;
    for (std::size_t j = begin; j <= i; ++j) exact += series[j];
    out.push_back(exact / double(i + 1 - begin));
  }
  return out;
}

std::string format_learning_curve(std::span<const CurvePoint> points) {
  std::string out = "seed,iteration,episodes,env_steps,train_mean_return,test_mean_return\n";
  for (const auto& p : points) {
    out += std::to_string(p.seed) + ',' + std::to_string(p.iteration) + ',' +
           std::to_string(p.episodes) + ',' + std::to_string(p.env_steps) + ',' +
           csv::format_double(p.train_mean_return) + ',' +
           csv::format_double(p.test_mean_return) + '\n';
  }
  return out;
}

std::vector<CurvePoint> parse_learning_curve(const std::string& text) {
  const auto lines = csv::split(text, '\n');
  if (lines.empty() ||
      lines[0] != "seed,iteration,episodes,env_steps,train_mean_return,test_mean_return") {
    throw invalid_argument_error("learning curve: unexpected header");
  }
  std::vector<CurvePoint> points;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = csv::split(lines[i], ',');
    if (f.size() != 6) throw shape_error("learning curve: expected 6 fields per row");
    points.push_back(CurvePoint{static_cast<std::uint64_t>(csv::parse_int(f[0])),
                                static_cast<std::size_t>(csv::parse_int(f[1])),
                                static_cast<std::size_t>(csv::parse_int(f[2])),
                                static_cast<std::size_t>(csv::parse_int(f[3])),
                                csv::parse_double(f[4]), csv::parse_double(f[5])});
  }
  return points;
}

std::string format_instance_evals(std::span<const InstanceId> ids,
                                  std::span<const InstanceEvalRow> rows) {
  std::string out = "iteration,env_steps";
  for (InstanceId id : ids) out += ',' + std::to_string(id);
  out += '\n';
  for (const auto& row : rows) {
    if (row.returns.size() != ids.size()) throw shape_error("instance eval row width mismatch");
    out += std::to_string(row.iteration) + ',' + std::to_string(row.env_steps);
    for (double r : row.returns) out += ',' + csv::format_double(r);
    out += '\n';
  }
  return out;
}

analysis::InstanceEvalSeries parse_instance_evals(const std::string& text) {
  const auto lines = csv::split(text, '\n');
  if (lines.empty()) throw invalid_argument_error("instance eval: missing header");
  const auto header = csv::split(lines[0], ',');
  if (header.size() < 2 || header[0] != "iteration" || header[1] != "env_steps") {
    throw invalid_argument_error("instance eval: unexpected header");
  }
  std::vector<InstanceId> ids;
  analysis::InstanceEvalSeries series;
  for (std::size_t k = 2; k < header.size(); ++k) {
    ids.push_back(static_cast<InstanceId>(csv::parse_int(header[k])));
    series[ids.back()];
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = csv::split(lines[i], ',');
    if (f.size() != header.size()) throw shape_error("instance eval: row width mismatch");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      series[ids[k]].push_back(csv::parse_double(f[k + 2]));
    }
  }
  return series;
}

std::vector<SweepCell> ablation_sweep(const ExperimentConfig& base, std::span<const double> etas,
                                      std::span<const std::size_t> kappas) {
  if (etas.empty() || kappas.empty()) throw invalid_argument_error("empty sweep grid");
  const fs::path root(base.output_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) {
    throw io_error("cannot create output directory '" + base.output_dir + "'");
  }

  std::vector<SweepCell> cells;
  for (double eta : etas) {
    for (std::size_t kappa : kappas) {
      SweepCell cell;
      cell.eta = eta;
      cell.kappa = kappa;
      ExperimentConfig config = base;
      config.scheduler_config.eta = eta;
      config.scheduler_config.kappa = kappa;
      config.output_dir =
          (root / ("eta_" + csv::format_double(eta) + "_kappa_" + std::to_string(kappa)))
              .string();
      try {
        const auto run = run_experiment(config);
        std::vector<double> finals;
        for (const auto& seed : run.seeds) {
          std::vector<double> series;
          for (const auto& p : seed.curve) {
            series.push_back(config.n_test > 0 ? p.test_mean_return : p.train_mean_return);
          }
          finals.push_back(final_smoothed(series));
        }
        double sum = 0.0;
        for (double v : finals) sum += v;
        cell.mean = sum / double(finals.size());
        double sq = 0.0;
        for (double v : finals) sq += (v - cell.mean) * (v - cell.mean);
        cell.stddev = std::sqrt(sq / double(finals.size()));
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }

  std::string raw = "eta,kappa,ok,mean,stddev,error\n";
  for (const auto& c : cells) {
    std::string error = c.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    raw += csv::format_double(c.eta) + ',' + std::to_string(c.kappa) + ',' +
           (c.ok ? "1" : "0") + ',' + (c.ok ? csv::format_double(c.mean) : "") + ',' +
           (c.ok ? csv::format_double(c.stddev) : "") + ',' + error + '\n';
  }
  csv::write_text((root / "sweep.csv").string(), raw);
  csv::write_text((root / "sweep_table.csv").string(), format_sweep_table(cells, etas, kappas));
  return cells;
}

std::string format_sweep_table(std::span<const SweepCell> cells, std::span<const double> etas,
                               std::span<const std::size_t> kappas) {
  auto fixed = [](double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << v;
    return s.str();
  };
  std::string out = "eta";
  for (std::size_t kappa : kappas) out += ",kappa=" + std::to_string(kappa);
  out += '\n';
  for (double eta : etas) {
    out += csv::format_double(eta);
    for (std::size_t kappa : kappas) {
      auto it = std::find_if(cells.begin(), cells.end(), [&](const SweepCell& c) {
        return c.eta == eta && c.kappa == kappa;
      });
      out += ',';
      if (it == cells.end() || !it->ok) {
        out += "missing";
      } else {
        out += fixed(it->mean) + " +/- " + fixed(it->stddev);
      }
    }
    out += '\n';
  }
  return out;
}

std::string format_scheduler_trace(std::span<const SchedulerTraceRow> rows) {
  std::string out = "iteration,mean_abs_value,eta,grew,dynamic\n";
  for (const auto& row : rows) {
    out += std::to_string(row.iteration) + ',' + csv::format_double(row.mean_abs_value) + ',' +
           csv::format_double(row.eta) + ',' + (row.grew ? "1" : "0") + ',' +
           (row.dynamic ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace space::harness
