#include "volclust/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "volclust/error.hpp"
#include "volclust/instance_metrics.hpp"

namespace volclust {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

constexpr double kStripWidth = 1000.0;
constexpr double kStripHeight = 40.0;

}  // namespace

DensityBlock error_density(const EvalStream& stream, const DisagreementSet& set,
                           std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "density needs >= 1 bin");
  DensityBlock out;
  out.bins = bins;
  const double start = stream.t_start();
  const double end = stream.t_end();
  const double length = end - start;
  out.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i < bins; ++i) {
    out.bin_edges[i] = start + length * static_cast<double>(i) / static_cast<double>(bins);
  }
  out.bin_edges[bins] = end;
  out.error_counts.assign(bins, 0);
  for (const auto& e : set.entries) {
    std::size_t idx = 0;
    if (length > 0.0) {
      const double pos = (e.t - start) / length * static_cast<double>(bins);
      idx = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(pos))), bins - 1);
    }
    ++out.error_counts[idx];
  }
  return out;
}

EvalReport build_report(const EvalStream& stream, double threshold,
                        const VcsConfig& vcs_config, std::size_t density_bins) {
  EvalReport report;
  report.n_events = stream.size();
  report.threshold = threshold;
  const auto set = disagreement_set(stream, threshold);
  report.n_errors = set.size();
  try {
    report.ap = average_precision(stream);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPositives) throw;
  }
  try {
    report.auroc = auroc(stream);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OneClassOnly) throw;
  }
  try {
    const auto result = vcs(set, period_of(stream), vcs_config);
    VcsBlock block;
    block.value = result.vcs;
    block.t_mean = result.t_mean;
    block.signed_deviation = result.signed_deviation();
    block.tau = vcs_config.tau;
    block.k = result.k;
    block.seed = vcs_config.seed;
    for (const auto& trial : result.trials) block.t_stat.push_back(trial.t_stat);
    report.vcs = std::move(block);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::TooFewDisagreements) {
      report.vcs_undefined_reason = kTooFewDisagreements;
    } else if (e.code() == ErrorCode::DegenerateDistances) {
      report.vcs_undefined_reason = std::string(to_string(e.code()));
    } else {
      throw;
    }
  }
  report.density = error_density(stream, set, density_bins);
  return report;
}

std::string to_json(const EvalReport& report) {
  ordered_json j;
  j["n_events"] = report.n_events;
  j["n_errors"] = report.n_errors;
  j["threshold"] = report.threshold;
  j["ap"] = optional_number(report.ap);
  j["auroc"] = optional_number(report.auroc);
  if (report.vcs) {
    const auto& v = *report.vcs;
    ordered_json block;
    block["value"] = v.value;
    block["t_mean"] = v.t_mean;
    block["signed_deviation"] = v.signed_deviation;
    block["tau"] = v.tau;
    block["k"] = v.k;
    block["seed"] = v.seed;
    block["t_stat"] = v.t_stat;
    j["vcs"] = std::move(block);
  } else {
    j["vcs"] = ordered_json{{"undefined", true}, {"reason", report.vcs_undefined_reason}};
  }
  j["density"] = ordered_json{{"bins", report.density.bins},
                              {"bin_edges", report.density.bin_edges},
                              {"error_counts", report.density.error_counts}};
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EvalReport report;
    report.n_events = j.at("n_events").get<std::size_t>();
    report.n_errors = j.at("n_errors").get<std::size_t>();
    report.threshold = j.at("threshold").get<double>();
    report.ap = read_optional(j, "ap");
    report.auroc = read_optional(j, "auroc");
    const auto& v = j.at("vcs");
    if (v.contains("undefined")) {
      report.vcs_undefined_reason = v.at("reason").get<std::string>();
    } else {
      VcsBlock block;
      block.value = v.at("value").get<double>();
      block.t_mean = v.at("t_mean").get<double>();
      block.signed_deviation = v.at("signed_deviation").get<double>();
      block.tau = v.at("tau").get<std::size_t>();
      block.k = v.at("k").get<std::size_t>();
      block.seed = v.at("seed").get<std::uint64_t>();
      block.t_stat = v.at("t_stat").get<std::vector<double>>();
      report.vcs = std::move(block);
    }
    const auto& d = j.at("density");
    report.density.bins = d.at("bins").get<std::size_t>();
    report.density.bin_edges = d.at("bin_edges").get<std::vector<double>>();
    report.density.error_counts = d.at("error_counts").get<std::vector<std::size_t>>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad report JSON: ") + e.what());
  }
}

void write_density_csv(std::ostream& out, const DensityBlock& density) {
  out << "bin_start,bin_end,error_count\n";
  for (std::size_t i = 0; i < density.bins; ++i) {
    out << format_double(density.bin_edges[i]) << ','
        << format_double(density.bin_edges[i + 1]) << ',' << density.error_counts[i]
        << '\n';
  }
}

void write_density_svg(std::ostream& out, const DensityBlock& density) {
  const std::size_t peak =
      density.error_counts.empty()
          ? 0
          : *std::max_element(density.error_counts.begin(), density.error_counts.end());
  const double bin_width = kStripWidth / static_cast<double>(density.bins);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << format_double(kStripWidth) << "\" height=\"" << format_double(kStripHeight)
      << "\" viewBox=\"0 0 " << format_double(kStripWidth) << ' '
      << format_double(kStripHeight) << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << format_double(kStripWidth)
      << "\" height=\"" << format_double(kStripHeight)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (std::size_t i = 0; i < density.bins; ++i) {
    const double opacity =
        peak == 0 ? 0.0
                  : static_cast<double>(density.error_counts[i]) / static_cast<double>(peak);
    out << "  <rect x=\"" << format_double(bin_width * static_cast<double>(i))
        << "\" y=\"0\" width=\"" << format_double(bin_width) << "\" height=\""
        << format_double(kStripHeight) << "\" fill=\"#b2182b\" fill-opacity=\""
        << format_double(opacity) << "\"/>\n";
  }
  out << "</svg>\n";
}

void emit_density_svg(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  write_density_svg(out, report.density);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace volclust
