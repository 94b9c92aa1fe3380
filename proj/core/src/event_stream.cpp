#include "volclust/event_stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "volclust/error.hpp"

namespace volclust {
namespace {

// Returns an empty string when the record is valid, else the violation.
std::string record_violation(const PredictionRecord& r) {
  if (!std::isfinite(r.t) || r.t < 0.0) return "t must be finite and >= 0";
  if (r.y != 0 && r.y != 1) return "y must be 0 or 1";
  if (!std::isfinite(r.p) || r.p < 0.0 || r.p > 1.0) return "p must lie in [0, 1]";
  return {};
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

int parse_label(double v, std::size_t line) {
  if (v == 0.0) return 0;
  if (v == 1.0) return 1;
  throw MalformedRecord(line, "y must be 0 or 1");
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

struct NumberedRecord {
  PredictionRecord record;
  std::size_t line;
};

std::vector<NumberedRecord> read_jsonl(std::istream& in) {
  std::vector<NumberedRecord> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = strip_cr(raw);
    if (text.find_first_not_of(" \t") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      throw MalformedRecord(line, "invalid JSON");
    }
    if (!obj.is_object()) throw MalformedRecord(line, "expected a JSON object");
    PredictionRecord r;
    for (const char* key : {"t", "y", "p"}) {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_number()) {
        throw MalformedRecord(line, std::string("missing numeric \"") + key + "\"");
      }
    }
    r.t = obj["t"].get<double>();
    r.y = parse_label(obj["y"].get<double>(), line);
    r.p = obj["p"].get<double>();
    if (auto it = obj.find("id"); it != obj.end()) {
      if (!it->is_string()) throw MalformedRecord(line, "\"id\" must be a string");
      r.id = it->get<std::string>();
    }
    if (auto why = record_violation(r); !why.empty()) throw MalformedRecord(line, why);
    out.push_back({std::move(r), line});
  }
  return out;
}

std::vector<NumberedRecord> read_csv(std::istream& in) {
  std::vector<NumberedRecord> out;
  std::string raw;
  if (!std::getline(in, raw)) return out;
  const auto header = strip_cr(raw);
  bool has_id = false;
  if (header == "t,y,p,id") {
    has_id = true;
  } else if (header != "t,y,p") {
    throw MalformedRecord(1, "header must be t,y,p or t,y,p,id");
  }
  const std::size_t expected = has_id ? 4 : 3;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = strip_cr(raw);
    if (text.empty()) continue;
    const auto fields = split_commas(text);
    if (fields.size() != expected) {
      throw MalformedRecord(line, "expected " + std::to_string(expected) + " fields");
    }
    PredictionRecord r;
    double y = 0.0;
    if (!parse_double(fields[0], r.t)) throw MalformedRecord(line, "bad t");
    if (!parse_double(fields[1], y)) throw MalformedRecord(line, "bad y");
    if (!parse_double(fields[2], r.p)) throw MalformedRecord(line, "bad p");
    r.y = parse_label(y, line);
    if (has_id) r.id = std::string(fields[3]);
    if (auto why = record_violation(r); !why.empty()) throw MalformedRecord(line, why);
    out.push_back({std::move(r), line});
  }
  return out;
}

}  // namespace

EvalStream EvalStream::from_records(std::vector<PredictionRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (auto why = record_violation(records[i]); !why.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  "record " + std::to_string(i) + ": " + why);
    }
    if (i > 0 && records[i].t < records[i - 1].t) {
      throw Error(ErrorCode::UnsortedInput,
                  "record " + std::to_string(i) + " has a decreasing timestamp");
    }
    if (records[i].id.empty()) records[i].id = std::to_string(i);
  }
  return EvalStream(std::move(records));
}

std::vector<int> EvalStream::labels() const {
  std::vector<int> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.y);
  return out;
}

std::vector<double> EvalStream::scores() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.p);
  return out;
}

std::vector<double> EvalStream::timestamps() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.t);
  return out;
}

RecordFormat parse_format(std::string_view name) {
  if (name == "jsonl") return RecordFormat::Jsonl;
  if (name == "csv") return RecordFormat::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown format: " + std::string(name));
}

std::string_view to_string(RecordFormat format) noexcept {
  return format == RecordFormat::Jsonl ? "jsonl" : "csv";
}

EvalStream parse_records(std::istream& input, RecordFormat format,
                         const ParseOptions& options) {
  auto numbered = format == RecordFormat::Jsonl ? read_jsonl(input) : read_csv(input);
  if (numbered.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  if (options.sort_by_time) {
    std::stable_sort(numbered.begin(), numbered.end(),
                     [](const auto& a, const auto& b) { return a.record.t < b.record.t; });
  } else {
    for (std::size_t i = 1; i < numbered.size(); ++i) {
      if (numbered[i].record.t < numbered[i - 1].record.t) {
        throw Error(ErrorCode::UnsortedInput,
                    "line " + std::to_string(numbered[i].line) +
                        ": timestamp decreases");
      }
    }
  }
  std::vector<PredictionRecord> records;
  records.reserve(numbered.size());
  for (auto& n : numbered) records.push_back(std::move(n.record));
  return EvalStream::from_records(std::move(records));
}

EvalStream parse_records(std::string_view text, RecordFormat format,
                         const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_records(in, format, options);
}

void write_records(std::ostream& out, const EvalStream& stream,
                   RecordFormat format) {
  if (format == RecordFormat::Jsonl) {
    for (const auto& r : stream.records()) {
      nlohmann::ordered_json obj;
      obj["t"] = r.t;
      obj["y"] = r.y;
      obj["p"] = r.p;
      obj["id"] = r.id;
      out << obj.dump() << '\n';
    }
    return;
  }
  out << "t,y,p,id\n";
  for (const auto& r : stream.records()) {
    if (r.id.find_first_of(",\r\n") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  "id not representable in CSV: " + r.id);
    }
    out << format_double(r.t) << ',' << r.y << ',' << format_double(r.p) << ','
        << r.id << '\n';
  }
}

std::string write_records(const EvalStream& stream, RecordFormat format) {
  std::ostringstream out;
  write_records(out, stream, format);
  return out.str();
}

std::tuple<EvalStream, EvalStream, EvalStream> chronological_split(
    const EvalStream& stream, const SplitRatios& ratios) {
  if (!(ratios.train > 0.0 && ratios.val > 0.0 && ratios.test > 0.0) ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                "split ratios must be positive and sum to 1");
  }
  const std::size_t m = stream.size();
  const auto first = static_cast<std::size_t>(std::floor(ratios.train * m));
  const auto second =
      static_cast<std::size_t>(std::floor((ratios.train + ratios.val) * m));
  if (first == 0 || second <= first || second >= m) {
    throw Error(ErrorCode::DegenerateSplit,
                "split of " + std::to_string(m) + " records leaves an empty part");
  }
  const auto records = stream.records();
  auto part = [&](std::size_t lo, std::size_t hi) {
    return EvalStream::from_records(
        std::vector<PredictionRecord>(records.begin() + lo, records.begin() + hi));
  };
  return {part(0, first), part(first, second), part(second, m)};
}

std::vector<int> threshold_labels(const EvalStream& stream, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1)");
  }
  std::vector<int> out;
  out.reserve(stream.size());
  for (const auto& r : stream.records()) out.push_back(r.p >= threshold ? 1 : 0);
  return out;
}

std::vector<double> DisagreementSet::timestamps() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.t);
  return out;
}

DisagreementSet disagreement_set(const EvalStream& stream, double threshold) {
  const auto predicted = threshold_labels(stream, threshold);
  DisagreementSet set;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (predicted[i] != stream[i].y) {
      set.entries.push_back({i, stream[i].id, stream[i].t});
    }
  }
  return set;
}

}  // namespace volclust
