#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "histeq/metrics.hpp"
#include "histeq/params.hpp"
#include "histeq/stats.hpp"

namespace histeq {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

/// One processed (input, method) pair with everything needed to replay it.
struct RunRecord {
  std::string input;
  std::string output;  // empty when no image was written
  EnhanceParams params;
  std::optional<SplitDecision> split;
  bool passthrough = false;
  MetricsReport metrics;
  std::string tool_version = kToolVersion;
};

namespace detail {

// Shortest round-trip decimal form.
inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline double number_or_nan(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : j.get<double>();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string method_label(Method m) {
  std::string s(to_string(m));
  for (auto& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const EnhanceParams& p) {
  return {{"method", to_string(p.method)},
          {"tau", p.tau},
          {"gamma", p.gamma ? nlohmann::json(*p.gamma) : nlohmann::json("search")},
          {"mm_scale", to_string(p.mm_scale)},
          {"tiles_x", p.clahe.tiles_x},
          {"tiles_y", p.clahe.tiles_y},
          {"clip_limit", std::isinf(p.clahe.clip_limit)
                             ? nlohmann::json("inf")
                             : nlohmann::json(p.clahe.clip_limit)},
          {"peak_mode", to_string(p.peak_mode)},
          {"on_constant", to_string(p.on_constant)}};
}

inline EnhanceParams params_from_json(const nlohmann::json& j) {
  EnhanceParams p;
  p.method = parse_method(j.at("method").get<std::string>());
  p.tau = j.at("tau").get<double>();
  const auto& g = j.at("gamma");
  if (g.is_string()) {
    if (g.get<std::string>() != "search") {
      throw std::invalid_argument("gamma must be a number or \"search\"");
    }
    p.gamma.reset();
  } else {
    p.gamma = g.get<double>();
  }
  p.mm_scale = parse_mm_scale(j.at("mm_scale").get<std::string>());
  p.clahe.tiles_x = j.at("tiles_x").get<int>();
  p.clahe.tiles_y = j.at("tiles_y").get<int>();
  const auto& c = j.at("clip_limit");
  p.clahe.clip_limit = c.is_string() && c.get<std::string>() == "inf"
                           ? std::numeric_limits<double>::infinity()
                           : c.get<double>();
  p.peak_mode = parse_peak_mode(j.at("peak_mode").get<std::string>());
  p.on_constant = parse_on_constant(j.at("on_constant").get<std::string>());
  validate(p);
  return p;
}

inline nlohmann::json to_json(const SplitDecision& d) {
  return {{"beta", d.beta},
          {"branch", to_string(d.branch)},
          {"gamma_used", d.gamma_used ? nlohmann::json(*d.gamma_used)
                                      : nlohmann::json(nullptr)},
          {"mm_raw", d.mm_raw},
          {"split_level", d.split_level}};
}

inline SplitDecision split_from_json(const nlohmann::json& j) {
  SplitDecision d;
  d.beta = j.at("beta").get<double>();
  d.branch = parse_split_branch(j.at("branch").get<std::string>());
  if (!j.at("gamma_used").is_null()) d.gamma_used = j.at("gamma_used").get<double>();
  d.mm_raw = j.at("mm_raw").get<double>();
  d.split_level = j.at("split_level").get<int>();
  return d;
}

namespace detail {
inline nlohmann::json optional_split(const std::optional<SplitDecision>& d) {
  return d ? to_json(*d) : nlohmann::json(nullptr);
}
inline std::optional<SplitDecision> optional_split_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return split_from_json(j);
}
}  // namespace detail

/// Infinite PSNR and undefined AMMBE never appear as bare numbers: the value
/// is null and a companion boolean states why.
inline nlohmann::json to_json(const MetricsReport& m) {
  return {{"psnr_db", detail::finite_or_null(m.psnr_db)},
          {"psnr_infinite", m.psnr_infinite()},
          {"rmse", m.rmse},
          {"ammbe", detail::finite_or_null(m.ammbe)},
          {"ammbe_defined", !std::isnan(m.ammbe)},
          {"input_split", detail::optional_split(m.input_split)},
          {"output_split", detail::optional_split(m.output_split)}};
}

inline MetricsReport metrics_from_json(const nlohmann::json& j) {
  MetricsReport m;
  m.psnr_db = j.at("psnr_infinite").get<bool>()
                  ? std::numeric_limits<double>::infinity()
                  : j.at("psnr_db").get<double>();
  m.rmse = j.at("rmse").get<double>();
  m.ammbe = detail::number_or_nan(j.at("ammbe"));
  m.input_split = detail::optional_split_from(j.at("input_split"));
  m.output_split = detail::optional_split_from(j.at("output_split"));
  return m;
}

inline nlohmann::json to_json(const RunRecord& r) {
  return {{"input", r.input},
          {"output", r.output},
          {"method", to_string(r.params.method)},
          {"params", to_json(r.params)},
          {"split", detail::optional_split(r.split)},
          {"passthrough", r.passthrough},
          {"metrics", to_json(r.metrics)},
          {"tool_version", r.tool_version}};
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.input = j.at("input").get<std::string>();
  r.output = j.at("output").get<std::string>();
  r.params = params_from_json(j.at("params"));
  r.split = detail::optional_split_from(j.at("split"));
  r.passthrough = j.at("passthrough").get<bool>();
  r.metrics = metrics_from_json(j.at("metrics"));
  r.tool_version = j.at("tool_version").get<std::string>();
  return r;
}

/// Per-method aggregates over the records, keyed by method.
inline CorpusSummary summarize_records(const std::vector<RunRecord>& records) {
  std::map<Method, std::vector<MetricsReport>> by_method;
  for (const auto& r : records) by_method[r.params.method].push_back(r.metrics);
  CorpusSummary out;
  for (const auto& [m, reports] : by_method) out[m] = summarize(reports);
  return out;
}

inline std::string format_mean_std(const MeanStd& v) {
  if (std::isnan(v.mean)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f \xC2\xB1 %.4f", v.mean, v.std);
  return buf;
}

/// Report JSON, schema version 1:
///   { schema, version, tool_version, records: [...],
///     summary: { std_kind, methods: {<method>: {...}},
///                table: { rows, columns, cells: {row: {column: "m ± s"}} } } }
inline nlohmann::json report_json(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to report");
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) recs.push_back(to_json(r));

  const auto summary = summarize_records(records);
  nlohmann::json methods = nlohmann::json::object();
  nlohmann::json columns = nlohmann::json::array();
  nlohmann::json psnr_row = nlohmann::json::object();
  nlohmann::json ammbe_row = nlohmann::json::object();
  for (const auto& [m, s] : summary) {
    methods[std::string(to_string(m))] = {
        {"count", s.count},
        {"psnr_mean", detail::finite_or_null(s.psnr.mean)},
        {"psnr_std", detail::finite_or_null(s.psnr.std)},
        {"ammbe_mean", detail::finite_or_null(s.ammbe.mean)},
        {"ammbe_std", detail::finite_or_null(s.ammbe.std)},
        {"psnr_infinite_excluded", s.psnr_infinite_excluded},
        {"ammbe_undefined_excluded", s.ammbe_undefined_excluded}};
    const auto label = detail::method_label(m);
    columns.push_back(label);
    psnr_row[label] = format_mean_std(s.psnr);
    ammbe_row[label] = format_mean_std(s.ammbe);
  }

  return {{"schema", "histeq-report"},
          {"version", kReportSchemaVersion},
          {"tool_version", kToolVersion},
          {"records", std::move(recs)},
          {"summary",
           {{"std_kind", "population"},
            {"methods", std::move(methods)},
            {"table",
             {{"rows", {"PSNR", "AMMBE"}},
              {"columns", std::move(columns)},
              {"cells", {{"PSNR", std::move(psnr_row)},
                         {"AMMBE", std::move(ammbe_row)}}}}}}}};
}

inline std::string write_report_json(const std::vector<RunRecord>& records) {
  return report_json(records).dump(2) + "\n";
}

inline std::vector<RunRecord> read_report_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("version").get<int>() != kReportSchemaVersion) {
    throw std::invalid_argument("unsupported report version");
  }
  std::vector<RunRecord> out;
  for (const auto& r : j.at("records")) out.push_back(record_from_json(r));
  return out;
}

inline constexpr const char* kCsvHeader =
    "input,method,tau,gamma,mm_scale,tiles_x,tiles_y,clip_limit,beta,branch,"
    "split_level,psnr_db,rmse,ammbe";

/// Flat export, one row per (image, method). Split columns are blank for
/// methods that do not split.
inline std::string write_report_csv(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to report");
  using detail::fmt_double;
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& r : records) {
    const auto& p = r.params;
    os << detail::csv_field(r.input) << ',' << to_string(p.method) << ','
       << fmt_double(p.tau) << ',' << (p.gamma ? fmt_double(*p.gamma) : "search")
       << ',' << to_string(p.mm_scale) << ',' << p.clahe.tiles_x << ','
       << p.clahe.tiles_y << ',' << fmt_double(p.clahe.clip_limit) << ',';
    if (r.split) {
      os << fmt_double(r.split->beta) << ',' << to_string(r.split->branch) << ','
         << r.split->split_level;
    } else {
      os << ",,";
    }
    os << ',' << fmt_double(r.metrics.psnr_db) << ','
       << fmt_double(r.metrics.rmse) << ',' << fmt_double(r.metrics.ammbe)
       << "\n";
  }
  return os.str();
}

/// Human-readable method-by-metric table, the layout printed by `compare`.
inline std::string format_table(const CorpusSummary& summary) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-8s", "");
  os << buf;
  for (const auto& [m, s] : summary) {
    std::snprintf(buf, sizeof buf, "  %-22s", detail::method_label(m).c_str());
    os << buf;
  }
  os << "\n";
  for (const char* row : {"PSNR", "AMMBE"}) {
    std::snprintf(buf, sizeof buf, "%-8s", row);
    os << buf;
    for (const auto& [m, s] : summary) {
      const auto cell = format_mean_std(row[0] == 'P' ? s.psnr : s.ammbe);
      // the ± sign is two bytes but one column
      std::snprintf(buf, sizeof buf, "  %-23s", cell.c_str());
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace histeq
