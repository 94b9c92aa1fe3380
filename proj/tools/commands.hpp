#pragma once

// Subcommand bodies for the volclust CLI. Each takes its options and the
// output streams and returns a process exit code, so tests can drive them
// without spawning a process.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "volclust/pattern_gen.hpp"
#include "volclust/toy_trainer.hpp"

namespace volclust::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kUndefinedStatistic = 3,
};

struct EvaluateOptions {
  std::string input;                // "-" reads stdin
  std::optional<std::string> format;  // inferred from the extension if unset
  double threshold = 0.5;
  std::size_t tau = 5;
  double subsample = 0.5;
  std::uint64_t seed = 42;
  std::size_t density_bins = 100;
  std::string report;  // empty writes the report to `out`
  std::string svg;
  std::string density_csv;
  bool sort = false;
};

int run_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);

struct SynthOptions {
  PatternSpec spec;
  std::string out;  // empty or "-" writes to the stream
  std::string format = "jsonl";
};

int run_synth(const SynthOptions& options, std::ostream& out, std::ostream& err);

struct GradcheckOptions {
  double beta = 2.0;
  std::size_t trials = 100;
  double step = 1e-6;
  std::uint64_t seed = 42;
  /// Fraction of timestamps overwritten with a copy of another one.
  double tie_fraction = 0.0;
  double tolerance = 1e-5;
  double loss_tolerance = 1e-4;
};

struct GradcheckTarget {
  std::string name;
  double tolerance = 0.0;
  double max_rel_error = 0.0;
  std::size_t worst_trial = 0;
  std::size_t worst_coordinate = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked_coordinates = 0;
  std::size_t skipped_coordinates = 0;  // tie-adjacent, non-smooth there
  std::string failure;                  // set when a trial threw

  bool passed() const noexcept { return max_rel_error <= tolerance; }
};

/// soft_nn_distance, weighted_soft_t, the penalty composition and
/// combined_loss, each over `trials` randomized inputs.
std::vector<GradcheckTarget> gradcheck(const GradcheckOptions& options);

int run_gradcheck(const GradcheckOptions& options, std::ostream& out, std::ostream& err);

struct TrainDemoOptions {
  double gamma = 0.1;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t epochs = 200;
  double learning_rate = 0.05;
  std::string out_dir;  // empty skips the history files
  std::size_t tau = 5;
  std::uint64_t vcs_seed = 42;
  DriftSpec drift;
};

struct DemoRun {
  std::uint64_t seed = 0;
  double gamma = 0.0;
  ModelReport report;
  std::vector<LossBreakdown> history;
};

struct DemoRows {
  std::vector<DemoRun> baseline;
  std::vector<DemoRun> vca;
};

/// Paired baseline (gamma 0) and VCA runs on the drift benchmark, one pair
/// per seed. Throws NonFiniteLoss.
DemoRows train_demo(const TrainDemoOptions& options);

int run_train_demo(const TrainDemoOptions& options, std::ostream& out, std::ostream& err);

/// "0..4" or "0,2,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// "a,b" or "a..b".
Period parse_period(std::string_view text);

}  // namespace volclust::cli
