#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "space/analysis/curriculum_analysis.hpp"
#include "space/core/context.hpp"
#include "space/curriculum/scheduler.hpp"
#include "space/harness/config.hpp"

namespace space::harness {

struct CurvePoint {
  std::uint64_t seed = 0;
  std::size_t iteration = 0;
  std::size_t episodes = 0;
  std::size_t env_steps = 0;
  double train_mean_return = 0.0;
  double test_mean_return = 0.0;  // NaN without a test set
  bool operator==(const CurvePoint&) const = default;
};

struct InstanceEvalRow {
  std::size_t iteration = 0;
  std::size_t env_steps = 0;
  std::vector<double> returns;  // greedy return per train instance, id order
};

// One scheduler check: mean |V| over the set just trained and the gate outcome.
struct SchedulerTraceRow {
  std::size_t iteration = 0;
  double mean_abs_value = 0.0;
  double eta = 0.0;
  bool grew = false;
  bool dynamic = false;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<CurvePoint> curve;
  std::vector<curriculum::LogRow> curriculum_log;
  std::vector<curriculum::Addition> additions;
  std::vector<InstanceId> train_ids;
  std::vector<InstanceEvalRow> instance_evals;
  std::vector<SchedulerTraceRow> scheduler_trace;  // empty for round robin
  std::size_t episodes = 0;
  std::size_t env_steps = 0;
};

struct RunArtifacts {
  std::string output_dir;
  std::vector<SeedResult> seeds;
  std::vector<std::string> files;  // every file written, relative to output_dir
};

// Train ids 0..n_train-1 from sample_instances; test ids follow and are drawn
// from an independent stream, rejecting contexts that occur in the train set.
std::pair<InstanceSet, InstanceSet> split_instances(envs::EnvKind kind, std::size_t n_train,
                                                    std::size_t n_test, std::uint64_t seed);

// One seed of the curriculum training loop; writes nothing.
SeedResult run_seed(const ExperimentConfig& config, const InstanceSet& train,
                    const InstanceSet& test, std::uint64_t seed);

// Validates the config, prepares the output directory (io_error before any
// training if it is unusable), runs every seed and writes all artifacts.
RunArtifacts run_experiment(const ExperimentConfig& config);

// Reads a finished run directory and writes analysis.csv; returns its text.
std::string analyze_run(const std::string& run_dir);

// Trailing moving average; the first window-1 points average the available prefix.
std::vector<double> smooth(std::span<const double> series, std::size_t window = 10);

// CSV helpers for the harness artifacts.
std::string format_learning_curve(std::span<const CurvePoint> points);
std::vector<CurvePoint> parse_learning_curve(const std::string& text);
std::string format_instance_evals(std::span<const InstanceId> ids,
                                  std::span<const InstanceEvalRow> rows);
// Header `iteration,mean_abs_value,eta,grew,dynamic`; flags are 0/1.
std::string format_scheduler_trace(std::span<const SchedulerTraceRow> rows);
analysis::InstanceEvalSeries parse_instance_evals(const std::string& text);

struct SweepCell {
  std::size_t kappa = 1;
  double eta = 0.05;
  bool ok = false;
  double mean = 0.0;
  double stddev = 0.0;
  std::string error;
};

// run_experiment over eta x kappa; each cell's final (test, or train if there is
// no test set) mean return is aggregated as mean ± population std over seeds.
// Failing cells are recorded and the sweep continues. Writes sweep.csv and
// sweep_table.csv under base.output_dir.
std::vector<SweepCell> ablation_sweep(const ExperimentConfig& base, std::span<const double> etas,
                                      std::span<const std::size_t> kappas);

std::string format_sweep_table(std::span<const SweepCell> cells, std::span<const double> etas,
                               std::span<const std::size_t> kappas);

}  // namespace space::harness
