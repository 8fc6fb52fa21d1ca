#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilestencil/costmodel.hpp"
#include "tilestencil/grid.hpp"
#include "tilestencil/machine.hpp"

namespace tilestencil {

struct ExperimentConfig {
  Method method = Method::Axpy;
  std::size_t size = 0;  // square N x N grid
  std::size_t iterations = 0;
  std::string scenario = "pcie";
  std::uint64_t seed = 0;
  bool validate = false;
  // Skip functional execution and report the analytical model only.
  bool model_only = false;
  unsigned threads = 1;
};

struct Validation {
  bool passed = false;
  bool bit_exact = false;
  double max_abs_error = 0.0;  // vs the bf16 reference solver
  double max_ulp_error = 0.0;  // in bf16 ULPs of the reference value
  double max_drift = 0.0;      // vs the double-precision solver
  std::string criterion;
  double tolerance = 0.0;
};

struct Report {
  ExperimentConfig config;
  PhaseTotals totals;
  EnergyReport energy;
  std::optional<Validation> validation;
  std::optional<double> measured_wall_s;  // cpu method only
};

struct PhaseFractions {
  double init = 0.0;
  double cpu_preprocess = 0.0;
  double h2d = 0.0;
  double kernel = 0.0;
  double d2h = 0.0;
};

// Shares of total time; all zero when the total is zero.
PhaseFractions phase_fractions(const PhaseTotals& t);

Report run(const ExperimentConfig& config, const MachineSpec& spec = MachineSpec{});

struct CpuNativeResult {
  Bf16Grid grid;
  double wall_s = 0.0;
};

// Multi-threaded Jacobi on the host with the reference's bf16 semantics.
// Rows are partitioned across threads with a barrier per iteration.
CpuNativeResult cpu_native_run(const Bf16Grid& g, std::size_t iterations, unsigned threads);

// Bit-exact check for axpy/cpu; 1-ULP (single step) or N * 2^-8 drift
// bound (multi-step) for matmul.
Validation validate_output(Method method, const Bf16Grid& input, const Bf16Grid& output, std::size_t iterations);

struct SweepFailure {
  ExperimentConfig config;
  std::string error;
  int exit_code = 0;
};

struct RatioRow {
  std::size_t size = 0;
  std::size_t iterations = 0;
  std::string scenario;
  std::optional<double> matmul_over_axpy;
  std::optional<double> cpu_over_axpy;
};

struct SweepResult {
  std::vector<Report> reports;
  std::vector<SweepFailure> failures;
  std::vector<RatioRow> ratios;
};

// Throws ConfigError when `configs` is empty. A failing config is recorded
// and the rest still run; reports keep config order.
SweepResult sweep(const std::vector<ExperimentConfig>& configs, const MachineSpec& spec = MachineSpec{});

// Cross product helper for sweeps, in method-size-iterations-scenario order.
std::vector<ExperimentConfig> expand_sweep(const std::vector<Method>& methods, const std::vector<std::size_t>& sizes,
                                           const std::vector<std::size_t>& iterations,
                                           const std::vector<std::string>& scenarios, const ExperimentConfig& common);

// Named sweep presets ("full", "profiled", "scenarios").
std::vector<ExperimentConfig> sweep_preset(const std::string& name);

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(const std::string& name);

// Stable field order; JSON carries "schema":"v1".
std::string emit_report(const std::vector<Report>& reports, ReportFormat format);
std::string emit_sweep(const SweepResult& result, ReportFormat format);

// Parses the JSON produced by emit_report.
std::vector<Report> parse_reports(const std::string& json_text);

// Frozen v1 CSV header.
const std::vector<std::string>& csv_header();

// Writes to `path`, throwing IoError when it cannot.
void write_output(const std::string& path, const std::string& content);

}  // namespace tilestencil
