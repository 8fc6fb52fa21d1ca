#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tilestencil/calibrate.hpp"
#include "tilestencil/errors.hpp"
#include "tilestencil/harness.hpp"
#include "tilestencil/machine.hpp"

namespace ts = tilestencil;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kUsage = 2, kIo = 3, kCapacity = 4 };

struct Options {
  std::vector<std::string> methods;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> iterations;
  std::vector<std::string> scenarios;
  std::string machine;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  bool validate = false;
  bool model_only = false;
  std::string preset;
};

void add_common(CLI::App* cmd, Options& o, bool multi) {
  const char* suffix = multi ? " (comma-separated list)" : "";
  auto* m = cmd->add_option("--method", o.methods, std::string("cpu, axpy or matmul") + suffix);
  auto* s = cmd->add_option("--size", o.sizes, std::string("grid edge N for an N x N grid") + suffix);
  auto* i = cmd->add_option("--iterations", o.iterations, std::string("Jacobi iterations") + suffix);
  auto* sc = cmd->add_option("--scenario", o.scenarios, std::string("pcie, uvm or upm") + suffix);
  for (auto* opt : {m, s, i, sc}) {
    opt->delimiter(',');
    if (!multi) opt->expected(1);
  }
  cmd->add_option("--machine", o.machine, "machine config JSON");
  cmd->add_option("--seed", o.seed, "input RNG seed");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--model-only", o.model_only, "skip functional execution");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    ts::write_output(o.out, text);
  }
}

ts::MachineSpec machine_of(const Options& o) {
  return o.machine.empty() ? ts::MachineSpec{} : ts::load_machine(o.machine);
}

ts::ExperimentConfig common_config(const Options& o) {
  ts::ExperimentConfig c;
  c.seed = o.seed;
  c.validate = o.validate;
  c.model_only = o.model_only;
  c.threads = o.threads;
  return c;
}

std::vector<ts::ExperimentConfig> configs_from(const Options& o, bool require_all) {
  if (!o.preset.empty()) {
    auto configs = ts::sweep_preset(o.preset);
    for (auto& c : configs) {
      c.seed = o.seed;
      c.threads = o.threads;
    }
    return configs;
  }
  if (require_all && (o.methods.empty() || o.sizes.empty() || o.iterations.empty())) {
    throw ts::ConfigError("--method, --size and --iterations are required");
  }
  std::vector<ts::Method> methods;
  for (const auto& m : o.methods) methods.push_back(ts::parse_method(m));
  std::vector<std::string> scenarios = o.scenarios.empty() ? std::vector<std::string>{"pcie"} : o.scenarios;
  for (const auto& s : o.sizes) {
    if (s == 0) throw ts::ConfigError("--size must be >= 1");
  }
  return ts::expand_sweep(methods, o.sizes, o.iterations, scenarios, common_config(o));
}

int cmd_run(const Options& o) {
  const ts::MachineSpec spec = machine_of(o);
  const auto configs = configs_from(o, true);
  const ts::Report r = ts::run(configs.front(), spec);
  emit(o, ts::emit_report({r}, ts::parse_format(o.format)));
  return r.validation && !r.validation->passed ? kValidation : kOk;
}

int cmd_sweep(const Options& o) {
  const ts::MachineSpec spec = machine_of(o);
  const auto result = ts::sweep(configs_from(o, true), spec);
  emit(o, ts::emit_sweep(result, ts::parse_format(o.format)));
  for (const auto& f : result.failures) std::cerr << "config failed: " << f.error << "\n";
  for (const auto& r : result.reports) {
    if (r.validation && !r.validation->passed) return kValidation;
  }
  return kOk;
}

int cmd_validate(Options o) {
  const ts::MachineSpec spec = machine_of(o);
  o.validate = true;
  o.model_only = false;
  if (o.methods.empty()) o.methods = {"cpu", "axpy", "matmul"};
  if (o.sizes.empty()) o.sizes = {4, 31, 33, 128};
  if (o.iterations.empty()) o.iterations = {1, 10};
  const auto result = ts::sweep(configs_from(o, false), spec);
  emit(o, ts::emit_sweep(result, ts::parse_format(o.format)));
  int code = kOk;
  for (const auto& r : result.reports) {
    const bool ok = r.validation && r.validation->passed;
    std::cerr << (ok ? "PASS " : "FAIL ") << ts::method_name(r.config.method) << " " << r.config.size << "^2 x"
              << r.config.iterations << " " << r.config.scenario << " (" << r.validation->criterion << ")\n";
    if (!ok) code = kValidation;
  }
  for (const auto& f : result.failures) {
    std::cerr << "ERROR " << f.error << "\n";
    if (code == kOk) code = f.exit_code;
  }
  return code;
}

int cmd_calibrate(const Options& o) {
  const ts::Calibration cal = ts::calibrate(machine_of(o));
  for (const auto& row : cal.rows) {
    std::cerr << row.label << ": target " << row.target << ", modeled " << row.modeled << "\n";
  }
  emit(o, ts::machine_to_json(cal.spec));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tile-accelerator Jacobi stencil simulator"};
  app.require_subcommand(1);

  Options run_opts, sweep_opts, validate_opts, cal_opts;
  auto* run = app.add_subcommand("run", "run one configuration");
  add_common(run, run_opts, false);
  run->add_flag("--validate", run_opts.validate, "check the output against the reference solver");

  auto* sweep = app.add_subcommand("sweep", "run the cross product of the given lists");
  add_common(sweep, sweep_opts, true);
  sweep->add_flag("--validate", sweep_opts.validate, "check outputs against the reference solver");
  sweep->add_option("--preset", sweep_opts.preset, "full, profiled or scenarios");

  auto* validate = app.add_subcommand("validate", "check every pipeline against its oracle");
  add_common(validate, validate_opts, true);

  auto* cal = app.add_subcommand("calibrate", "fit model parameters and print a machine config");
  cal->add_option("--machine", cal_opts.machine, "base machine config JSON");
  cal->add_option("--out", cal_opts.out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (validate->parsed()) return cmd_validate(validate_opts);
    if (cal->parsed()) return cmd_calibrate(cal_opts);
  } catch (const ts::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kCapacity;
  } catch (const ts::IoError& e) {
    std::cerr << "io: " << e.what() << "\n";
    return kIo;
  } catch (const ts::ConfigError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}
