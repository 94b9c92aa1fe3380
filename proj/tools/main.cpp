#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "volclust/error.hpp"

using namespace volclust;

int main(int argc, char** argv) {
  CLI::App app{"Temporal error-pattern evaluation with the volatility-cluster statistic"};
  app.require_subcommand(1);

  cli::EvaluateOptions eval;
  std::string eval_format;
  auto* evaluate = app.add_subcommand("evaluate", "score a prediction log and emit a JSON report");
  evaluate->add_option("--input", eval.input, "JSONL or CSV log, - for stdin")->required();
  evaluate->add_option("--format", eval_format, "jsonl or csv (default: by extension)");
  evaluate->add_option("--threshold", eval.threshold, "decision threshold")->capture_default_str();
  evaluate->add_option("--tau", eval.tau, "VCS repeats")->capture_default_str();
  evaluate->add_option("--subsample", eval.subsample, "fraction of K drawn per repeat")
      ->capture_default_str();
  evaluate->add_option("--seed", eval.seed, "VCS seed")->capture_default_str();
  evaluate->add_option("--density-bins", eval.density_bins, "error density bins")
      ->capture_default_str();
  evaluate->add_option("--report", eval.report, "write the report here instead of stdout");
  evaluate->add_option("--svg", eval.svg, "error density strip");
  evaluate->add_option("--density-csv", eval.density_csv, "error density table");
  evaluate->add_flag("--sort", eval.sort, "sort records by t instead of rejecting disorder");

  cli::SynthOptions synth;
  std::string synth_pattern = "random";
  std::string synth_period = "0,1000";
  auto* synth_cmd = app.add_subcommand("synth", "generate a stream with a planted error pattern");
  synth_cmd->add_option("--pattern", synth_pattern, "random, clustered or regular")
      ->capture_default_str();
  synth_cmd->add_option("--events", synth.spec.n_events, "M")->capture_default_str();
  synth_cmd->add_option("--errors", synth.spec.n_errors, "K")->capture_default_str();
  synth_cmd->add_option("--period", synth_period, "start,end")->capture_default_str();
  synth_cmd->add_option("--seed", synth.spec.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output path, stdout if omitted");
  synth_cmd->add_option("--format", synth.format, "jsonl or csv")->capture_default_str();
  synth_cmd->add_option("--cluster-center", synth.spec.cluster_center,
                        "window center as a fraction of the period")
      ->capture_default_str();
  synth_cmd->add_option("--cluster-width", synth.spec.cluster_width,
                        "window width as a fraction of the period")
      ->capture_default_str();

  cli::GradcheckOptions grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference check of the soft gradients");
  grad_cmd->add_option("--beta", grad.beta)->capture_default_str();
  grad_cmd->add_option("--trials", grad.trials)->capture_default_str();
  grad_cmd->add_option("--step", grad.step)->capture_default_str();
  grad_cmd->add_option("--seed", grad.seed)->capture_default_str();
  grad_cmd->add_option("--tie-fraction", grad.tie_fraction,
                       "share of timestamps duplicated onto others")
      ->capture_default_str();

  cli::TrainDemoOptions demo;
  std::string demo_seeds = "0..4";
  auto* demo_cmd = app.add_subcommand("train-demo", "baseline vs VCA on the drift benchmark");
  demo_cmd->add_option("--gamma", demo.gamma)->capture_default_str();
  demo_cmd->add_option("--seeds", demo_seeds, "a..b or a,b,c")->capture_default_str();
  demo_cmd->add_option("--epochs", demo.epochs)->capture_default_str();
  demo_cmd->add_option("--learning-rate", demo.learning_rate)->capture_default_str();
  demo_cmd->add_option("--out-dir", demo.out_dir, "per-run loss histories");
  demo_cmd->add_option("--tau", demo.tau)->capture_default_str();
  demo_cmd->add_option("--vcs-seed", demo.vcs_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kInputError;
  }

  try {
    if (evaluate->parsed()) {
      if (!eval_format.empty()) eval.format = eval_format;
      return cli::run_evaluate(eval, std::cout, std::cerr);
    }
    if (synth_cmd->parsed()) {
      synth.spec.kind = parse_pattern_kind(synth_pattern);
      synth.spec.period = cli::parse_period(synth_period);
      return cli::run_synth(synth, std::cout, std::cerr);
    }
    if (grad_cmd->parsed()) return cli::run_gradcheck(grad, std::cout, std::cerr);
    if (demo_cmd->parsed()) {
      demo.seeds = cli::parse_seed_list(demo_seeds);
      return cli::run_train_demo(demo, std::cout, std::cerr);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInputError;
  }
  return cli::kInputError;
}
