#include "tilestencil/harness.hpp"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>
#include <tuple>

#include "tilestencil/axpy.hpp"
#include "tilestencil/errors.hpp"
#include "tilestencil/matmul.hpp"
#include "tilestencil/reference.hpp"

namespace tilestencil {

PhaseFractions phase_fractions(const PhaseTotals& t) {
  const double total = t.total_s();
  if (total <= 0.0) return {};
  return PhaseFractions{t.init_s / total, t.cpu_preprocess_s / total, t.h2d_s / total, t.kernel_s / total,
                        t.d2h_s / total};
}

CpuNativeResult cpu_native_run(const Bf16Grid& g, std::size_t iterations, unsigned threads) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows)));
  const Bf16 weight = kBf16Quarter;

  std::vector<Bf16> a(g.data().begin(), g.data().end());
  std::vector<Bf16> b(a.size());
  Bf16* cur = a.data();
  Bf16* next = b.data();
  auto swap_buffers = [&]() noexcept { std::swap(cur, next); };
  std::barrier sync(static_cast<std::ptrdiff_t>(n), swap_buffers);

  auto worker = [&](unsigned t) {
    const std::size_t lo = rows * t / n;
    const std::size_t hi = rows * (t + 1) / n;
    for (std::size_t it = 0; it < iterations; ++it) {
      const Bf16* in = cur;
      Bf16* out = next;
      for (std::size_t i = lo; i < hi; ++i) {
        const Bf16* above = i > 0 ? in + (i - 1) * cols : nullptr;
        const Bf16* row = in + i * cols;
        const Bf16* below = i + 1 < rows ? in + (i + 1) * cols : nullptr;
        for (std::size_t j = 0; j < cols; ++j) {
          Bf16 acc = bf16_add(above ? above[j] : kBf16Zero, below ? below[j] : kBf16Zero);
          acc = bf16_add(acc, j > 0 ? row[j - 1] : kBf16Zero);
          acc = bf16_add(acc, j + 1 < cols ? row[j + 1] : kBf16Zero);
          out[i * cols + j] = bf16_mul(acc, weight);
        }
      }
      sync.arrive_and_wait();
    }
  };

  const auto start = std::chrono::steady_clock::now();
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker, t);
    worker(0);
  }
  const auto stop = std::chrono::steady_clock::now();

  std::vector<Bf16> result(cur, cur + rows * cols);
  return CpuNativeResult{Bf16Grid(rows, cols, std::move(result)),
                         std::chrono::duration<double>(stop - start).count()};
}

Validation validate_output(Method method, const Bf16Grid& input, const Bf16Grid& output, std::size_t iterations) {
  const StencilKernel k = StencilKernel::laplace5();
  const Bf16Grid ref = jacobi_run_reference(input, k, iterations);
  const std::vector<double> exact = jacobi_run_double(input, k, iterations);

  Validation v;
  v.bit_exact = ref == output;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double got = output.data()[i].to_f32();
    const double want = ref.data()[i].to_f32();
    const double diff = std::abs(got - want);
    v.max_abs_error = std::max(v.max_abs_error, diff);
    v.max_ulp_error = std::max(v.max_ulp_error, diff / bf16_ulp(ref.data()[i]));
    v.max_drift = std::max(v.max_drift, std::abs(got - exact[i]));
  }

  if (method != Method::Matmul) {
    v.criterion = "bit_exact";
    v.tolerance = 0.0;
    v.passed = v.bit_exact;
  } else if (iterations <= 1) {
    v.criterion = "max_ulp_error";
    v.tolerance = 1.0;
    v.passed = v.max_ulp_error <= v.tolerance;
  } else {
    v.criterion = "max_drift";
    v.tolerance = static_cast<double>(iterations) * 0x1.0p-8;
    v.passed = v.max_drift <= v.tolerance;
  }
  return v;
}

Report run(const ExperimentConfig& config, const MachineSpec& spec) {
  if (config.size == 0) throw ConfigError("size must be >= 1");
  if (config.threads == 0) throw ConfigError("threads must be >= 1");
  if (config.validate && config.model_only) throw ConfigError("validation needs functional execution");
  const Scenario scenario = Scenario::from_name(config.scenario, spec);
  check_capacity(config.method, config.size, config.size, spec);

  Report report;
  report.config = config;
  const RunShape shape{config.method, config.size, config.size, config.iterations};

  if (config.model_only) {
    const PhaseBreakdown b = end_to_end(shape, spec, scenario);
    report.totals = b.totals();
    report.energy = energy(b, spec);
    return report;
  }

  const Bf16Grid input = random_grid(config.size, config.size, config.seed);
  std::optional<Bf16Grid> output;
  PhaseBreakdown breakdown;
  switch (config.method) {
    case Method::Cpu: {
      auto native = cpu_native_run(input, config.iterations, config.threads);
      report.measured_wall_s = native.wall_s;
      output = std::move(native.grid);
      breakdown = end_to_end(shape, spec, scenario);
      break;
    }
    case Method::Axpy: {
      auto r = axpy_run(input, config.iterations, spec, scenario, config.threads);
      output = std::move(r.grid);
      breakdown = std::move(r.breakdown);
      break;
    }
    case Method::Matmul: {
      auto r = matmul_run(input, config.iterations, spec, scenario, config.threads);
      output = std::move(r.grid);
      breakdown = std::move(r.breakdown);
      break;
    }
  }
  report.totals = breakdown.totals();
  report.energy = energy(breakdown, spec);
  if (config.validate) report.validation = validate_output(config.method, input, *output, config.iterations);
  return report;
}

std::vector<ExperimentConfig> expand_sweep(const std::vector<Method>& methods, const std::vector<std::size_t>& sizes,
                                           const std::vector<std::size_t>& iterations,
                                           const std::vector<std::string>& scenarios, const ExperimentConfig& common) {
  std::vector<ExperimentConfig> out;
  for (Method m : methods) {
    for (std::size_t s : sizes) {
      for (std::size_t it : iterations) {
        for (const auto& sc : scenarios) {
          ExperimentConfig c = common;
          c.method = m;
          c.size = s;
          c.iterations = it;
          c.scenario = sc;
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

std::vector<ExperimentConfig> sweep_preset(const std::string& name) {
  ExperimentConfig common;
  common.model_only = true;
  if (name == "full") {
    return expand_sweep({Method::Cpu, Method::Axpy, Method::Matmul}, {1024, 2048, 4096, 8192, 16384, 30720},
                        {100, 500, 1000}, {"pcie"}, common);
  }
  if (name == "profiled") {
    return expand_sweep({Method::Axpy, Method::Matmul}, {128, 1024}, {100, 1000}, {"pcie"}, common);
  }
  if (name == "scenarios") {
    return expand_sweep({Method::Axpy, Method::Matmul}, {1024, 4096}, {1000}, {"pcie", "uvm", "upm"}, common);
  }
  throw ConfigError("unknown sweep preset '" + name + "' (expected full, profiled or scenarios)");
}

SweepResult sweep(const std::vector<ExperimentConfig>& configs, const MachineSpec& spec) {
  if (configs.empty()) throw ConfigError("sweep needs at least one configuration");
  SweepResult result;
  for (const auto& c : configs) {
    try {
      result.reports.push_back(run(c, spec));
    } catch (const CapacityError& e) {
      result.failures.push_back({c, e.what(), 4});
    } catch (const ConfigError& e) {
      result.failures.push_back({c, e.what(), 2});
    } catch (const std::exception& e) {
      result.failures.push_back({c, e.what(), 1});
    }
  }

  using Key = std::tuple<std::size_t, std::size_t, std::string>;
  std::vector<Key> order;
  std::map<Key, std::map<Method, double>> totals;
  for (const auto& r : result.reports) {
    Key key{r.config.size, r.config.iterations, r.config.scenario};
    if (!totals.contains(key)) order.push_back(key);
    totals[key].emplace(r.config.method, r.totals.total_s());
  }
  for (const auto& key : order) {
    const auto& t = totals[key];
    const auto axpy = t.find(Method::Axpy);
    if (axpy == t.end() || axpy->second <= 0.0) continue;
    RatioRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::nullopt, std::nullopt};
    if (auto m = t.find(Method::Matmul); m != t.end()) row.matmul_over_axpy = m->second / axpy->second;
    if (auto c = t.find(Method::Cpu); c != t.end()) row.cpu_over_axpy = c->second / axpy->second;
    if (row.matmul_over_axpy || row.cpu_over_axpy) result.ratios.push_back(row);
  }
  return result;
}

}  // namespace tilestencil
