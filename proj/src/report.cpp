#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "tilestencil/errors.hpp"
#include "tilestencil/harness.hpp"

namespace tilestencil {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "v1";

json config_json(const ExperimentConfig& c) {
  return json{{"method", method_name(c.method)}, {"size", c.size},       {"iterations", c.iterations},
              {"scenario", c.scenario},           {"seed", c.seed},       {"validate", c.validate},
              {"model_only", c.model_only}};
}

json report_json(const Report& r) {
  const PhaseTotals& t = r.totals;
  const PhaseFractions f = phase_fractions(t);
  json j;
  j["config"] = config_json(r.config);
  j["modeled"] = json{{"init_s", t.init_s},
                      {"cpu_preprocess_s", t.cpu_preprocess_s},
                      {"conversion_s", t.conversion_s},
                      {"h2d_s", t.h2d_s},
                      {"kernel_s", t.kernel_s},
                      {"d2h_s", t.d2h_s},
                      {"non_init_s", t.non_init_s()},
                      {"total_s", t.total_s()},
                      {"h2d_bytes", t.h2d_bytes},
                      {"d2h_bytes", t.d2h_bytes},
                      {"tilize_calls", t.tilize_calls},
                      {"untilize_calls", t.untilize_calls}};
  j["fractions"] = json{{"init", f.init}, {"cpu_preprocess", f.cpu_preprocess}, {"h2d", f.h2d},
                        {"kernel", f.kernel}, {"d2h", f.d2h}};
  j["ratios"] = json{{"kernel_over_total", f.kernel},
                     {"kernel_over_non_init", t.non_init_s() > 0.0 ? t.kernel_s / t.non_init_s() : 0.0}};
  const EnergyReport& e = r.energy;
  j["energy"] = json{{"device_j", e.device_j},   {"host_j", e.host_j},   {"total_j", e.total_j},
                     {"init_j", e.init_j},       {"cpu_preprocess_j", e.cpu_preprocess_j},
                     {"h2d_j", e.h2d_j},         {"kernel_j", e.kernel_j}, {"d2h_j", e.d2h_j}};
  if (r.validation) {
    const Validation& v = *r.validation;
    j["validation"] = json{{"passed", v.passed},       {"bit_exact", v.bit_exact},
                           {"max_abs_error", v.max_abs_error}, {"max_ulp_error", v.max_ulp_error},
                           {"max_drift", v.max_drift}, {"criterion", v.criterion},
                           {"tolerance", v.tolerance}};
  } else {
    j["validation"] = nullptr;
  }
  // Wall-clock numbers live only here so the rest stays reproducible.
  if (r.measured_wall_s) {
    j["measured"] = json{{"wall_s", *r.measured_wall_s}, {"threads", r.config.threads}};
  }
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  const json& c = j.at("config");
  r.config.method = parse_method(c.at("method").get<std::string>());
  r.config.size = c.at("size").get<std::size_t>();
  r.config.iterations = c.at("iterations").get<std::size_t>();
  r.config.scenario = c.at("scenario").get<std::string>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.validate = c.at("validate").get<bool>();
  r.config.model_only = c.at("model_only").get<bool>();

  const json& m = j.at("modeled");
  r.totals.init_s = m.at("init_s").get<double>();
  r.totals.cpu_preprocess_s = m.at("cpu_preprocess_s").get<double>();
  r.totals.conversion_s = m.at("conversion_s").get<double>();
  r.totals.h2d_s = m.at("h2d_s").get<double>();
  r.totals.kernel_s = m.at("kernel_s").get<double>();
  r.totals.d2h_s = m.at("d2h_s").get<double>();
  r.totals.h2d_bytes = m.at("h2d_bytes").get<std::uint64_t>();
  r.totals.d2h_bytes = m.at("d2h_bytes").get<std::uint64_t>();
  r.totals.tilize_calls = m.at("tilize_calls").get<std::uint64_t>();
  r.totals.untilize_calls = m.at("untilize_calls").get<std::uint64_t>();

  const json& e = j.at("energy");
  r.energy.device_j = e.at("device_j").get<double>();
  r.energy.host_j = e.at("host_j").get<double>();
  r.energy.total_j = e.at("total_j").get<double>();
  r.energy.init_j = e.at("init_j").get<double>();
  r.energy.cpu_preprocess_j = e.at("cpu_preprocess_j").get<double>();
  r.energy.h2d_j = e.at("h2d_j").get<double>();
  r.energy.kernel_j = e.at("kernel_j").get<double>();
  r.energy.d2h_j = e.at("d2h_j").get<double>();

  if (const json& v = j.at("validation"); !v.is_null()) {
    Validation val;
    val.passed = v.at("passed").get<bool>();
    val.bit_exact = v.at("bit_exact").get<bool>();
    val.max_abs_error = v.at("max_abs_error").get<double>();
    val.max_ulp_error = v.at("max_ulp_error").get<double>();
    val.max_drift = v.at("max_drift").get<double>();
    val.criterion = v.at("criterion").get<std::string>();
    val.tolerance = v.at("tolerance").get<double>();
    r.validation = val;
  }
  if (j.contains("measured")) {
    r.measured_wall_s = j["measured"].at("wall_s").get<double>();
    r.config.threads = j["measured"].at("threads").get<unsigned>();
  }
  return r;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(const Report& r) {
  const PhaseTotals& t = r.totals;
  const PhaseFractions f = phase_fractions(t);
  const auto& v = r.validation;
  std::vector<std::string> cells = {
      std::string(method_name(r.config.method)),
      std::to_string(r.config.size),
      std::to_string(r.config.iterations),
      r.config.scenario,
      std::to_string(r.config.seed),
      r.config.model_only ? "1" : "0",
      fmt_double(t.init_s),
      fmt_double(t.cpu_preprocess_s),
      fmt_double(t.conversion_s),
      fmt_double(t.h2d_s),
      fmt_double(t.kernel_s),
      fmt_double(t.d2h_s),
      fmt_double(t.total_s()),
      std::to_string(t.h2d_bytes),
      std::to_string(t.d2h_bytes),
      std::to_string(t.tilize_calls),
      std::to_string(t.untilize_calls),
      fmt_double(f.kernel),
      fmt_double(r.energy.device_j),
      fmt_double(r.energy.host_j),
      fmt_double(r.energy.total_j),
      fmt_double(r.energy.kernel_j),
      v ? "1" : "0",
      v ? (v->passed ? "1" : "0") : "",
      v ? (v->bit_exact ? "1" : "0") : "",
      v ? fmt_double(v->max_abs_error) : "",
      v ? fmt_double(v->max_ulp_error) : "",
      r.measured_wall_s ? fmt_double(*r.measured_wall_s) : "",
  };
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) line += ',';
    line += cells[i];
  }
  return line;
}

std::string csv_table(const std::vector<Report>& reports) {
  std::string out;
  const auto& header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& r : reports) out += csv_row(r) + '\n';
  return out;
}

}  // namespace

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header = {
      "method",          "size",          "iterations",        "scenario",      "seed",
      "model_only",      "init_s",        "cpu_preprocess_s",  "conversion_s",  "h2d_s",
      "kernel_s",        "d2h_s",         "total_s",           "h2d_bytes",     "d2h_bytes",
      "tilize_calls",    "untilize_calls", "kernel_fraction",  "device_j",      "host_j",
      "total_j",         "kernel_j",      "validated",         "validation_passed", "bit_exact",
      "max_abs_error",   "max_ulp_error", "measured_wall_s",
  };
  return header;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown format '" + name + "' (expected json or csv)");
}

std::string emit_report(const std::vector<Report>& reports, ReportFormat format) {
  if (format == ReportFormat::Csv) return csv_table(reports);
  json j;
  j["schema"] = kSchema;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  return j.dump();
}

std::string emit_sweep(const SweepResult& result, ReportFormat format) {
  if (format == ReportFormat::Csv) return csv_table(result.reports);
  json j;
  j["schema"] = kSchema;
  j["reports"] = json::array();
  for (const auto& r : result.reports) j["reports"].push_back(report_json(r));
  j["failures"] = json::array();
  for (const auto& f : result.failures) {
    j["failures"].push_back(json{{"config", config_json(f.config)}, {"error", f.error}, {"exit_code", f.exit_code}});
  }
  j["ratios"] = json::array();
  for (const auto& row : result.ratios) {
    json r{{"size", row.size}, {"iterations", row.iterations}, {"scenario", row.scenario}};
    r["matmul_over_axpy"] = row.matmul_over_axpy ? json(*row.matmul_over_axpy) : json(nullptr);
    r["cpu_over_axpy"] = row.cpu_over_axpy ? json(*row.cpu_over_axpy) : json(nullptr);
    j["ratios"].push_back(r);
  }
  return j.dump();
}

std::vector<Report> parse_reports(const std::string& json_text) {
  std::vector<Report> out;
  try {
    const json j = json::parse(json_text);
    if (j.at("schema") != kSchema) throw ConfigError("unsupported report schema");
    for (const auto& r : j.at("reports")) out.push_back(report_from_json(r));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file " + path);
  out << content;
  if (content.empty() || content.back() != '\n') out << '\n';
  out.flush();
  if (!out) throw IoError("failed writing output file " + path);
}

}  // namespace tilestencil
