#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "commands.hpp"
#include "vcs_oracle.hpp"
#include "volclust/error.hpp"
#include "volclust/report.hpp"

using namespace volclust;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "volclust_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

EvalStream two_cluster_stream() {
  std::vector<PredictionRecord> r;
  for (int i = 0; i < 100; ++i) {
    const bool wrong = (i >= 10 && i < 14) || i == 90;
    r.push_back({static_cast<double>(i), 1, wrong ? 0.2 : 0.8, ""});
  }
  r[50].y = 0;
  r[50].p = 0.1;
  return EvalStream::from_records(r);
}

int synth_to(const fs::path& path, PatternKind kind, std::uint64_t seed, const std::string& fmt) {
  cli::SynthOptions o;
  o.spec.kind = kind;
  o.spec.seed = seed;
  o.out = path.string();
  o.format = fmt;
  std::ostringstream out, err;
  return cli::run_synth(o, out, err);
}

}  // namespace

TEST(Report, DensityInvariants) {
  const auto s = two_cluster_stream();
  const auto report = build_report(s, 0.5, {}, 10);
  EXPECT_EQ(report.n_errors, 5u);
  EXPECT_EQ(report.density.bin_edges.front(), s.t_start());
  EXPECT_EQ(report.density.bin_edges.back(), s.t_end());
  EXPECT_EQ(report.density.bin_edges.size(), 11u);
  EXPECT_EQ(std::accumulate(report.density.error_counts.begin(),
                            report.density.error_counts.end(), std::size_t{0}),
            report.n_errors);
  EXPECT_EQ(report.density.error_counts[1], 4u);
  EXPECT_EQ(report.density.error_counts[9], 1u);
  ASSERT_TRUE(report.vcs);
  EXPECT_EQ(report.vcs->value, std::abs(0.5 - report.vcs->t_mean));
  EXPECT_EQ(report.vcs->t_stat.size(), 5u);
}

TEST(Report, JsonRoundTrip) {
  const auto defined = build_report(two_cluster_stream(), 0.5, {}, 7);
  EXPECT_EQ(report_from_json(to_json(defined)), defined);

  const auto perfect = EvalStream::from_records({{0, 1, 0.9, ""}, {1, 0, 0.1, ""}});
  const auto undefined = build_report(perfect, 0.5, {}, 3);
  EXPECT_FALSE(undefined.vcs);
  EXPECT_EQ(undefined.vcs_undefined_reason, kTooFewDisagreements);
  EXPECT_EQ(report_from_json(to_json(undefined)), undefined);

  const auto one_class = EvalStream::from_records({{0, 0, 0.9, ""}, {1, 0, 0.7, ""}});
  const auto r = build_report(one_class, 0.5, {}, 2);
  EXPECT_FALSE(r.ap);
  EXPECT_FALSE(r.auroc);
  EXPECT_NE(to_json(r).find("\"ap\": null"), std::string::npos);
  EXPECT_EQ(report_from_json(to_json(r)), r);
  EXPECT_THROW(report_from_json("{\"n_events\": 1}"), Error);
}

TEST(Report, DensityCsv) {
  DensityBlock d{2, {0.0, 0.5, 1.0}, {3, 0}};
  std::ostringstream out;
  write_density_csv(out, d);
  EXPECT_EQ(out.str(), "bin_start,bin_end,error_count\n0,0.5,3\n0.5,1,0\n");
}

TEST(Svg, OpacityFollowsCounts) {
  auto opacities = [](const DensityBlock& d) {
    std::ostringstream out;
    write_density_svg(out, d);
    const auto text = out.str();
    EXPECT_EQ(text.rfind("<?xml", 0), 0u);
    EXPECT_NE(text.find("version=\"1.1\""), std::string::npos);
    std::vector<std::string> values;
    for (std::size_t pos = 0; (pos = text.find("fill-opacity=\"", pos)) != std::string::npos;) {
      pos += 14;
      values.push_back(text.substr(pos, text.find('"', pos) - pos));
    }
    return values;
  };
  EXPECT_EQ(opacities({3, {0, 1, 2, 3}, {0, 0, 0}}), (std::vector<std::string>(3, "0")));
  EXPECT_EQ(opacities({3, {0, 1, 2, 3}, {0, 6, 0}}), (std::vector<std::string>{"0", "1", "0"}));
  EXPECT_EQ(opacities({2, {0, 1, 2}, {2, 4}}), (std::vector<std::string>{"0.5", "1"}));
}

TEST(Svg, ClusteredPatternLightsUpNearNinetyPercent) {
  PatternSpec spec;
  spec.kind = PatternKind::Clustered;
  const auto s = generate_pattern(spec);
  const auto report = build_report(s, 0.5, {}, 100);
  for (std::size_t i = 0; i < 100; ++i) {
    if (report.density.error_counts[i] > 0) {
      EXPECT_GE(i, 88u);
      EXPECT_LE(i, 91u);
    }
  }
  const auto path = scratch("clustered.svg");
  emit_density_svg(report, path.string());
  EXPECT_NE(slurp(path).find("</svg>"), std::string::npos);
  EXPECT_THROW(emit_density_svg(report, "/nonexistent/dir/x.svg"), Error);
}

TEST(CmdEvaluate, PerfectLogExitsThreeWithMarker) {
  const auto in = scratch("perfect.jsonl");
  std::ofstream(in) << "{\"t\":1,\"y\":1,\"p\":0.9}\n{\"t\":2,\"y\":0,\"p\":0.1}\n";
  cli::EvaluateOptions o;
  o.input = in.string();
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_evaluate(o, out, err), cli::kUndefinedStatistic);
  const auto report = report_from_json(out.str());
  EXPECT_EQ(report.ap, 1.0);
  EXPECT_EQ(report.vcs_undefined_reason, "too_few_disagreements");
}

TEST(CmdEvaluate, InputErrorsExitTwo) {
  const auto bad = scratch("bad.csv");
  std::ofstream(bad) << "t,y,p\n1,1,2.0\n";
  cli::EvaluateOptions o;
  o.input = bad.string();
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_evaluate(o, out, err), cli::kInputError);
  EXPECT_NE(err.str().find("line 2"), std::string::npos);
  o.input = scratch("missing.jsonl").string();
  EXPECT_EQ(cli::run_evaluate(o, out, err), cli::kInputError);
  o.input = bad.string();
  o.format = "xml";
  EXPECT_EQ(cli::run_evaluate(o, out, err), cli::kInputError);
}

TEST(CmdEvaluate, ByteIdenticalReports) {
  const auto in = scratch("random.csv");
  ASSERT_EQ(synth_to(in, PatternKind::Random, 4, "csv"), 0);
  std::string first;
  for (int run = 0; run < 2; ++run) {
    cli::EvaluateOptions o;
    o.input = in.string();
    o.report = scratch("report" + std::to_string(run) + ".json").string();
    o.svg = scratch("strip" + std::to_string(run) + ".svg").string();
    o.density_csv = scratch("density" + std::to_string(run) + ".csv").string();
    std::ostringstream out, err;
    ASSERT_EQ(cli::run_evaluate(o, out, err), 0) << err.str();
    EXPECT_TRUE(out.str().empty());
  }
  EXPECT_EQ(slurp(scratch("report0.json")), slurp(scratch("report1.json")));
  EXPECT_EQ(slurp(scratch("strip0.svg")), slurp(scratch("strip1.svg")));
  EXPECT_EQ(slurp(scratch("density0.csv")), slurp(scratch("density1.csv")));
}

TEST(CmdSynth, RegularFileHoldsMidpoints) {
  cli::SynthOptions o;
  o.spec.kind = PatternKind::Regular;
  o.spec.n_events = 4;
  o.spec.n_errors = 4;
  o.spec.period = cli::parse_period("0..8");
  o.format = "csv";
  std::ostringstream out, err;
  ASSERT_EQ(cli::run_synth(o, out, err), 0);
  EXPECT_EQ(out.str(), "t,y,p,id\n1,1,0.1,0\n3,1,0.1,1\n5,1,0.1,2\n7,1,0.1,3\n");
  o.spec.n_errors = 9;
  EXPECT_EQ(cli::run_synth(o, out, err), cli::kInputError);
}

TEST(CmdSynth, ClusteredThenEvaluateAboveBand) {
  const double band = oracle::uniform_band(200, 0.0, 1000.0, 5);
  for (const char* fmt : {"jsonl", "csv"}) {
    const auto path = scratch(std::string("clustered.") + fmt);
    ASSERT_EQ(synth_to(path, PatternKind::Clustered, 2, fmt), 0);
    cli::EvaluateOptions o;
    o.input = path.string();
    std::ostringstream out, err;
    ASSERT_EQ(cli::run_evaluate(o, out, err), 0);
    const auto r = report_from_json(out.str());
    EXPECT_EQ(r.n_events, 2000u);
    EXPECT_EQ(r.n_errors, 200u);
    EXPECT_GT(r.vcs->value, band);
  }
}

TEST(CmdGradcheck, DefaultsPass) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_gradcheck({}, out, err), 0) << out.str();
}

TEST(CmdGradcheck, CoarseStepFailsAndNamesWorstCoordinate) {
  cli::GradcheckOptions o;
  o.step = 1.0;
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_gradcheck(o, out, err), cli::kCheckFailed);
  EXPECT_NE(out.str().find("worst: trial"), std::string::npos);
}

TEST(CmdGradcheck, TieHeavySharpSetSkipsTieAdjacentPoints) {
  cli::GradcheckOptions o;
  o.beta = 1e6;
  o.tie_fraction = 0.3;
  const auto targets = cli::gradcheck(o);
  EXPECT_GT(targets[0].skipped_coordinates, 0u);
  for (const auto& t : targets) EXPECT_TRUE(t.passed()) << t.name;
}

TEST(CmdTrainDemo, GammaZeroRowsIdentical) {
  cli::TrainDemoOptions o;
  o.gamma = 0.0;
  o.epochs = 20;
  const auto rows = cli::train_demo(o);
  ASSERT_EQ(rows.baseline.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(rows.baseline[i].report.ap, rows.vca[i].report.ap);
    EXPECT_EQ(rows.baseline[i].report.vcs->vcs, rows.vca[i].report.vcs->vcs);
  }
}

TEST(CmdTrainDemo, SingleEpochSmokeWritesHistories) {
  cli::TrainDemoOptions o;
  o.epochs = 1;
  o.seeds = cli::parse_seed_list("0,2");
  o.out_dir = scratch("histories").string();
  std::ostringstream out, err;
  ASSERT_EQ(cli::run_train_demo(o, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("baseline"), std::string::npos);
  EXPECT_NE(out.str().find("VCA gamma=0.1"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(o.out_dir) / "vca_seed2.csv"));
  const auto history = slurp(fs::path(o.out_dir) / "baseline_seed0.csv");
  EXPECT_EQ(history.rfind("epoch,cross_entropy,penalty,total\n0,0.69314718", 0), 0u) << history;
  EXPECT_EQ(std::count(history.begin(), history.end(), '\n'), 2);
}

TEST(CliParsing, SeedsAndPeriods) {
  EXPECT_EQ(cli::parse_seed_list("0..4"), (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(cli::parse_seed_list("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_THROW(cli::parse_seed_list("3..1"), Error);
  EXPECT_THROW(cli::parse_seed_list("a"), Error);
  const auto p = cli::parse_period("2.5,10");
  EXPECT_EQ(p.start, 2.5);
  EXPECT_EQ(p.end, 10.0);
  EXPECT_THROW(cli::parse_period("1"), Error);
}
