#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>

#include "volclust/error.hpp"
#include "volclust/event_stream.hpp"
#include "volclust/report.hpp"
#include "volclust/rng.hpp"
#include "volclust/soft_vca.hpp"

namespace volclust::cli {
namespace {

std::string read_all(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

RecordFormat resolve_format(const std::optional<std::string>& flag, const std::string& path) {
  if (flag) return parse_format(*flag);
  const auto ext = std::filesystem::path(path).extension().string();
  return ext == ".csv" ? RecordFormat::Csv : RecordFormat::Jsonl;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::InvalidArgument, "not a number: " + std::string(text));
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::InvalidArgument, "not an unsigned integer: " + std::string(text));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto pos = text.find(sep, begin);
    parts.push_back(text.substr(begin, pos - begin));
    if (pos == std::string_view::npos) break;
    begin = pos + 1;
  }
  return parts;
}

// --- gradcheck -------------------------------------------------------------

// Keeps log(n) / beta well under a typical gap at the default beta, so the
// soft distances stay positive.
constexpr double kMeanGap = 10.0;

std::vector<double> uniform_times(Rng& rng, std::size_t n, double span, double tie_fraction) {
  std::vector<double> t(n);
  for (auto& x : t) x = rng.uniform01() * span;
  if (tie_fraction > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform01() < tie_fraction) t[i] = t[rng.uniform_index(n)];
    }
  }
  return t;
}

void absorb(GradcheckTarget& target, const GradCheckResult& r, std::size_t trial,
            const std::vector<std::size_t>& coordinates) {
  target.checked_coordinates += coordinates.size();
  if (coordinates.empty() || r.max_rel_error <= target.max_rel_error) return;
  target.max_rel_error = r.max_rel_error;
  target.worst_trial = trial;
  target.worst_coordinate = coordinates[r.worst_coordinate];
  target.worst_analytic = r.worst_analytic;
  target.worst_numeric = r.worst_numeric;
}

// Checks only `free` coordinates; the rest stay pinned at `point`.
GradCheckResult check_subset(const std::function<double(std::span<const double>)>& f,
                             const std::vector<double>& point,
                             const std::vector<double>& analytic,
                             const std::vector<std::size_t>& free, double step) {
  std::vector<double> sub_point, sub_analytic;
  for (auto i : free) {
    sub_point.push_back(point[i]);
    sub_analytic.push_back(analytic[i]);
  }
  auto g = [&](std::span<const double> x) {
    std::vector<double> full = point;
    for (std::size_t j = 0; j < free.size(); ++j) full[free[j]] = x[j];
    return f(full);
  };
  return finite_difference_check(g, sub_point, sub_analytic, step);
}

void check_soft_nn(const GradcheckOptions& o, std::size_t trial, GradcheckTarget& target) {
  Rng rng(o.seed, StreamDomain::GradCheck, 4 * trial);
  const std::size_t n = 3 + rng.uniform_index(18);
  const auto times = uniform_times(rng, n, kMeanGap * static_cast<double>(n), o.tie_fraction);
  const std::size_t self = rng.uniform_index(n);

  // |t_self - t_j| has a kink at zero, so a stencil straddling a tie with
  // self is meaningless and both ends are left out. Neighbours tied in
  // distance are skipped too: at large beta the soft minimum switches between
  // them within one step.
  const double guard = 4.0 * o.step;
  std::vector<std::size_t> free;
  bool self_tied = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == self) continue;
    const double dj = std::abs(times[j] - times[self]);
    bool tied = false;
    for (std::size_t i = 0; i < n && !tied; ++i) {
      tied = i != j && i != self && std::abs(std::abs(times[i] - times[self]) - dj) <= guard;
    }
    if (dj <= guard) {
      self_tied = true;
    } else if (!tied) {
      free.push_back(j);
    }
  }
  if (!self_tied) free.push_back(self);
  target.skipped_coordinates += n - free.size();

  const auto analytic = soft_nn_gradient(times, self, o.beta);
  auto f = [&](std::span<const double> x) { return soft_nn_distance(x, self, o.beta); };
  absorb(target, check_subset(f, times, analytic, free, o.step), trial, free);
}

struct WeightedCase {
  std::vector<double> times;
  std::vector<double> weights;
  std::vector<double> reference;
};

WeightedCase weighted_case(const GradcheckOptions& o, std::size_t trial, std::size_t slot) {
  Rng rng(o.seed, StreamDomain::GradCheck, 4 * trial + slot);
  const std::size_t n = 3 + rng.uniform_index(18);
  WeightedCase c;
  const double span = kMeanGap * static_cast<double>(n);
  c.times = uniform_times(rng, n, span, o.tie_fraction);
  std::sort(c.times.begin(), c.times.end());
  c.weights.resize(n);
  for (auto& w : c.weights) w = 0.05 + 0.95 * rng.uniform01();
  c.reference.resize(n);
  for (auto& r : c.reference) r = rng.uniform01() * span;
  return c;
}

std::vector<std::size_t> all_coordinates(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

void check_weighted(const GradcheckOptions& o, std::size_t trial, GradcheckTarget& target) {
  const auto c = weighted_case(o, trial, 1);
  const auto analytic = weighted_soft_t(c.times, c.weights, c.reference, o.beta).grad_weights;
  auto f = [&](std::span<const double> w) {
    return weighted_soft_t(c.times, w, c.reference, o.beta).t_soft;
  };
  const auto r = finite_difference_check(f, c.weights, analytic, o.step);
  absorb(target, r, trial, all_coordinates(c.weights.size()));
}

void check_penalty(const GradcheckOptions& o, std::size_t trial, GradcheckTarget& target) {
  constexpr double kGamma = 10.0;
  const auto c = weighted_case(o, trial, 2);
  const auto soft = weighted_soft_t(c.times, c.weights, c.reference, o.beta);
  const double outer = vca_penalty(soft.t_soft, kGamma).derivative;
  std::vector<double> analytic(soft.grad_weights.size());
  for (std::size_t i = 0; i < analytic.size(); ++i) analytic[i] = outer * soft.grad_weights[i];
  auto f = [&](std::span<const double> w) {
    return vca_penalty(weighted_soft_t(c.times, w, c.reference, o.beta).t_soft, kGamma).value;
  };
  const auto r = finite_difference_check(f, c.weights, analytic, o.step);
  absorb(target, r, trial, all_coordinates(c.weights.size()));
}

void check_combined_loss(const GradcheckOptions& o, std::size_t trial, GradcheckTarget& target) {
  Rng rng(o.seed, StreamDomain::GradCheck, 4 * trial + 3);
  DriftSpec spec;
  spec.n_events = 40;
  spec.feature_dim = 3;
  spec.seed = rng.next_u64();
  const auto data = generate_drift_dataset(spec);
  TrainConfig config;
  config.gamma = 10.0;
  config.seed = rng.next_u64();
  ToyModel model = ToyModel::zeros(spec.feature_dim);
  for (auto& w : model.weights) w = 0.5 * rng.normal();

  const auto analytic = combined_loss(model, data, config, trial).gradient;
  auto f = [&](std::span<const double> theta) {
    ToyModel m{std::vector<double>(theta.begin(), theta.end())};
    return combined_loss(m, data, config, trial).total;
  };
  const auto r = finite_difference_check(f, model.weights, analytic, o.step);
  absorb(target, r, trial, all_coordinates(model.weights.size()));
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

// --- train demo ------------------------------------------------------------

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;
  std::size_t count = 0;
};

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stdev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::string cell(const Summary& s, double scale, int digits) {
  if (s.count == 0) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f±%.*f", digits, s.mean * scale, digits, s.stdev * scale);
  return buf;
}

// Left-justifies to `width` columns, counting UTF-8 code points.
std::string pad(const std::string& text, std::size_t width) {
  const auto columns = static_cast<std::size_t>(
      std::count_if(text.begin(), text.end(), [](char c) { return (c & 0xC0) != 0x80; }));
  return text + std::string(columns < width ? width - columns : 1, ' ');
}

std::string table_row(const std::string& label, const std::vector<DemoRun>& runs) {
  std::vector<double> ap, vcs_values;
  for (const auto& r : runs) {
    if (r.report.ap) ap.push_back(*r.report.ap);
    if (r.report.vcs) vcs_values.push_back(r.report.vcs->vcs);
  }
  return pad(label, 16) + pad(cell(summarize(ap), 100.0, 2), 18) +
         cell(summarize(vcs_values), 1.0, 3) + "\n";
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_u64(text.substr(0, dots));
    const auto hi = parse_u64(text.substr(dots + 2));
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty seed range");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (auto part : split(text, ',')) seeds.push_back(parse_u64(part));
  return seeds;
}

Period parse_period(std::string_view text) {
  std::string_view a, b;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    a = text.substr(0, dots);
    b = text.substr(dots + 2);
  } else {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw Error(ErrorCode::InvalidArgument, "period must be a,b");
    a = parts[0];
    b = parts[1];
  }
  return Period{parse_double(a), parse_double(b)};
}

int run_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  EvalReport report;
  try {
    const auto format = resolve_format(o.format, o.input);
    const auto stream = parse_records(read_all(o.input), format, ParseOptions{o.sort});
    VcsConfig config;
    config.tau = o.tau;
    config.subsample_fraction = o.subsample;
    config.seed = o.seed;
    report = build_report(stream, o.threshold, config, o.density_bins);

    const auto json = to_json(report);
    if (o.report.empty()) {
      out << json;
    } else {
      write_file(o.report, json);
    }
    if (!o.svg.empty()) emit_density_svg(report, o.svg);
    if (!o.density_csv.empty()) {
      std::ostringstream csv;
      write_density_csv(csv, report.density);
      write_file(o.density_csv, csv.str());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (!report.vcs) {
    err << "vcs undefined: " << report.vcs_undefined_reason << '\n';
    return kUndefinedStatistic;
  }
  return kOk;
}

int run_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto format = parse_format(o.format);
    const auto stream = generate_pattern(o.spec);
    const auto text = write_records(stream, format);
    if (o.out.empty() || o.out == "-") {
      out << text;
    } else {
      write_file(o.out, text);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

std::vector<GradcheckTarget> gradcheck(const GradcheckOptions& o) {
  if (!(o.step > 0.0) || !(o.beta > 0.0) || o.trials == 0) {
    throw Error(ErrorCode::InvalidArgument, "step, beta and trials must be positive");
  }
  std::vector<GradcheckTarget> targets(4);
  targets[0].name = "soft_nn_distance";
  targets[1].name = "weighted_soft_t";
  targets[2].name = "vca_penalty";
  targets[3].name = "combined_loss";
  targets[0].tolerance = targets[1].tolerance = targets[2].tolerance = o.tolerance;
  targets[3].tolerance = o.loss_tolerance;
  using Check = void (*)(const GradcheckOptions&, std::size_t, GradcheckTarget&);
  const Check checks[] = {check_soft_nn, check_weighted, check_penalty, check_combined_loss};
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    for (std::size_t c = 0; c < targets.size(); ++c) {
      auto& target = targets[c];
      if (!target.failure.empty()) continue;
      try {
        checks[c](o, trial, target);
      } catch (const Error& e) {
        // A stencil that leaves the function's domain is a failed check.
        target.failure = e.what();
        target.worst_trial = trial;
        target.max_rel_error = std::numeric_limits<double>::infinity();
      }
    }
  }
  return targets;
}

int run_gradcheck(const GradcheckOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<GradcheckTarget> targets;
  try {
    targets = gradcheck(o);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kInputError : kCheckFailed;
  }
  bool ok = true;
  out << "gradcheck beta=" << fmt("%g", o.beta) << " step=" << fmt("%g", o.step)
      << " trials=" << o.trials << " seed=" << o.seed << '\n';
  for (const auto& t : targets) {
    out << (t.passed() ? "PASS " : "FAIL ") << t.name
        << " max_rel_error=" << fmt("%.3e", t.max_rel_error)
        << " tol=" << fmt("%g", t.tolerance) << " checked=" << t.checked_coordinates
        << " skipped_tie_adjacent=" << t.skipped_coordinates << '\n';
    if (!t.failure.empty()) {
      ok = false;
      out << "  trial " << t.worst_trial << ": " << t.failure << '\n';
    } else if (!t.passed()) {
      ok = false;
      out << "  worst: trial " << t.worst_trial << " coordinate " << t.worst_coordinate
          << " analytic=" << fmt("%.12g", t.worst_analytic)
          << " numeric=" << fmt("%.12g", t.worst_numeric) << '\n';
    }
  }
  return ok ? kOk : kCheckFailed;
}

DemoRows train_demo(const TrainDemoOptions& o) {
  DemoRows rows;
  TrainConfig config;
  config.epochs = o.epochs;
  config.learning_rate = o.learning_rate;
  config.vcs_eval.tau = o.tau;
  config.vcs_eval.seed = o.vcs_seed;
  for (auto seed : o.seeds) {
    const auto bench = make_drift_benchmark(o.drift, seed);
    config.seed = seed;
    auto run_with = [&](double gamma) {
      config.gamma = gamma;
      auto result = train(bench.train, config);
      DemoRun run;
      run.seed = seed;
      run.gamma = gamma;
      run.report = evaluate_model(result.model, bench.test, config.vcs_eval);
      run.history = std::move(result.history);
      return run;
    };
    rows.baseline.push_back(run_with(0.0));
    rows.vca.push_back(run_with(o.gamma));
  }
  return rows;
}

int run_train_demo(const TrainDemoOptions& o, std::ostream& out, std::ostream& err) {
  DemoRows rows;
  try {
    rows = train_demo(o);
    if (!o.out_dir.empty()) {
      std::filesystem::create_directories(o.out_dir);
      auto dump = [&](const DemoRun& run, const char* label) {
        std::ostringstream csv;
        write_history_csv(csv, run.history);
        const auto name = std::string(label) + "_seed" + std::to_string(run.seed) + ".csv";
        write_file((std::filesystem::path(o.out_dir) / name).string(), csv.str());
      };
      for (const auto& run : rows.baseline) dump(run, "baseline");
      for (const auto& run : rows.vca) dump(run, "vca");
    }
  } catch (const NonFiniteLoss& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError || e.code() == ErrorCode::InvalidArgument ||
                   e.code() == ErrorCode::SpecViolation
               ? kInputError
               : kCheckFailed;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  out << "drift benchmark: " << o.seeds.size() << " seeds, " << o.epochs
      << " epochs, tau " << o.tau << ", vcs seed " << o.vcs_seed << '\n';
  out << pad("model", 16) << pad("AP (%)", 18) << "VCS\n";
  out << table_row("baseline", rows.baseline);
  out << table_row("VCA gamma=" + fmt("%g", o.gamma), rows.vca);
  return kOk;
}

}  // namespace volclust::cli
