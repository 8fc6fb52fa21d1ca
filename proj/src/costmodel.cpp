#include "tilestencil/costmodel.hpp"

#include <sstream>
#include <string>

#include "tilestencil/errors.hpp"
#include "tilestencil/tiling.hpp"

namespace tilestencil {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Cpu: return "cpu";
    case Method::Axpy: return "axpy";
    case Method::Matmul: return "matmul";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "cpu") return Method::Cpu;
  if (name == "axpy") return Method::Axpy;
  if (name == "matmul") return Method::Matmul;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected cpu, axpy or matmul)");
}

Scenario Scenario::pcie(const MachineSpec& spec) {
  return Scenario{ScenarioKind::Pcie, spec.pcie_bw_per_dir, false, false};
}

Scenario Scenario::uvm(const MachineSpec& spec) {
  return Scenario{ScenarioKind::Uvm, spec.uvm_bw_per_dir, false, false};
}

Scenario Scenario::upm() { return Scenario{ScenarioKind::Upm, 0.0, true, true}; }

Scenario Scenario::from_name(std::string_view name, const MachineSpec& spec) {
  if (name == "pcie") return pcie(spec);
  if (name == "uvm") return uvm(spec);
  if (name == "upm") return upm();
  throw ConfigError("unknown scenario '" + std::string(name) + "' (expected pcie, uvm or upm)");
}

std::string_view Scenario::name() const noexcept {
  switch (kind) {
    case ScenarioKind::Pcie: return "pcie";
    case ScenarioKind::Uvm: return "uvm";
    case ScenarioKind::Upm: return "upm";
  }
  return "?";
}

double transfer_time(double bytes, const Scenario& scenario) {
  if (scenario.elide_transfers) return 0.0;
  return bytes / scenario.bw_per_dir;
}

std::uint64_t axpy_buffer_elements(std::size_t rows, std::size_t cols) noexcept {
  const std::uint64_t n = static_cast<std::uint64_t>(rows) * cols;
  return (n + kTileElems - 1) / kTileElems * kTileElems;
}

std::uint64_t matmul_lowered_rows(std::size_t rows, std::size_t cols) noexcept {
  const std::uint64_t n = static_cast<std::uint64_t>(rows) * cols;
  return (n + kTileDim - 1) / kTileDim * kTileDim;
}

IterationWorkload axpy_workload(std::size_t rows, std::size_t cols) {
  const std::uint64_t elems = axpy_buffer_elements(rows, cols);
  const std::uint64_t bytes = elems * sizeof(Bf16);
  IterationWorkload w;
  w.h2d_bytes = 4 * bytes;
  w.d2h_bytes = bytes;
  w.extract_elements = 4 * elems;
  w.tiles = static_cast<std::size_t>(elems / kTileElems);
  w.op = kAxpyKernelOp;
  w.dram_bytes = static_cast<double>(5 * bytes);
  return w;
}

IterationWorkload matmul_workload(std::size_t rows, std::size_t cols, bool upload_stencil,
                                  const MachineSpec& spec) {
  const std::uint64_t lowered = matmul_lowered_rows(rows, cols);
  const std::uint64_t elems = lowered * kTileDim;
  const std::uint64_t bytes = elems * sizeof(Bf16);
  IterationWorkload w;
  w.h2d_bytes = bytes + (upload_stencil ? kTileElems * sizeof(Bf16) : 0);
  w.d2h_bytes = bytes;
  // Lowering writes every padded row; extraction reads one value per cell.
  w.extract_elements = elems + static_cast<std::uint64_t>(rows) * cols;
  w.conversion_elements = 2 * elems;
  w.tilize_calls = 1;
  w.untilize_calls = 1;
  w.tiles = static_cast<std::size_t>(lowered / kTileDim);
  w.op = matmul_kernel_op(spec);
  w.dram_bytes = static_cast<double>(2 * bytes);
  return w;
}

double device_footprint_bytes(Method method, std::size_t rows, std::size_t cols) {
  switch (method) {
    case Method::Cpu:
      return 0.0;
    case Method::Axpy:
      // Four shifted inputs plus the output buffer.
      return 5.0 * static_cast<double>(axpy_buffer_elements(rows, cols) * sizeof(Bf16));
    case Method::Matmul:
      // Lowered input tiles, output tiles, stencil tile.
      return 2.0 * static_cast<double>(matmul_lowered_rows(rows, cols) * kTileDim * sizeof(Bf16)) +
             static_cast<double>(kTileElems * sizeof(Bf16));
  }
  return 0.0;
}

void check_capacity(Method method, std::size_t rows, std::size_t cols, const MachineSpec& spec) {
  const double need = device_footprint_bytes(method, rows, cols);
  if (need > spec.dram_capacity_bytes) {
    std::ostringstream msg;
    msg << method_name(method) << " " << rows << "x" << cols << " needs " << need
        << " B of device DRAM, capacity is " << spec.dram_capacity_bytes << " B";
    throw CapacityError(msg.str());
  }
}

IterationPhases iteration_phases(const IterationWorkload& w, const MachineSpec& spec,
                                 const Scenario& scenario) {
  IterationPhases p;
  p.conversion_s = scenario.elide_conversions
                       ? 0.0
                       : cpu_conversion_cost(w.conversion_elements, spec);
  p.cpu_preprocess_s = static_cast<double>(w.extract_elements) / spec.cpu_extract_throughput + p.conversion_s;
  p.h2d_s = transfer_time(static_cast<double>(w.h2d_bytes), scenario);
  p.d2h_s = transfer_time(static_cast<double>(w.d2h_bytes), scenario);
  p.kernel_s = simulate_kernel(w.tiles, w.op, w.dram_bytes, spec).kernel_s;
  p.h2d_bytes = w.h2d_bytes;
  p.d2h_bytes = w.d2h_bytes;
  p.tilize_calls = w.tilize_calls;
  p.untilize_calls = w.untilize_calls;
  return p;
}

PhaseTotals PhaseBreakdown::totals() const noexcept {
  PhaseTotals t;
  t.init_s = init_s;
  for (const auto& it : iterations) {
    t.cpu_preprocess_s += it.cpu_preprocess_s;
    t.conversion_s += it.conversion_s;
    t.h2d_s += it.h2d_s;
    t.kernel_s += it.kernel_s;
    t.d2h_s += it.d2h_s;
    t.h2d_bytes += it.h2d_bytes;
    t.d2h_bytes += it.d2h_bytes;
    t.tilize_calls += it.tilize_calls;
    t.untilize_calls += it.untilize_calls;
  }
  return t;
}

EnergyReport energy(const PhaseBreakdown& b, const MachineSpec& spec) {
  const PhaseTotals t = b.totals();
  const double idle = b.uses_device ? spec.power_idle_w : 0.0;
  const double active = b.uses_device ? spec.power_active_w : 0.0;
  const double host = spec.cpu_tdp_w;

  EnergyReport e;
  e.init_j = t.init_s * idle;
  e.cpu_preprocess_j = t.cpu_preprocess_s * (idle + host);
  e.h2d_j = t.h2d_s * (idle + host);
  e.kernel_j = t.kernel_s * active;
  e.d2h_j = t.d2h_s * (idle + host);

  e.device_j = (t.init_s + t.cpu_preprocess_s + t.h2d_s + t.d2h_s) * idle + t.kernel_s * active;
  e.host_j = (t.cpu_preprocess_s + t.h2d_s + t.d2h_s) * host;
  e.total_j = e.device_j + e.host_j;
  return e;
}

double cpu_baseline_time(std::size_t rows, std::size_t cols, std::size_t iters, const MachineSpec& spec) {
  return static_cast<double>(rows) * static_cast<double>(cols) * static_cast<double>(iters) /
         spec.cpu_stencil_throughput;
}

PhaseBreakdown end_to_end(const RunShape& shape, const MachineSpec& spec, const Scenario& scenario) {
  if (shape.rows == 0 || shape.cols == 0) throw EmptyGridError("grid dimensions must be >= 1");
  PhaseBreakdown b;
  if (shape.method == Method::Cpu) {
    b.uses_device = false;
    IterationPhases p;
    p.cpu_preprocess_s = cpu_baseline_time(shape.rows, shape.cols, 1, spec);
    b.iterations.assign(shape.iterations, p);
    return b;
  }

  check_capacity(shape.method, shape.rows, shape.cols, spec);
  b.init_s = spec.init_time_s;
  b.iterations.reserve(shape.iterations);
  if (shape.method == Method::Axpy) {
    const IterationPhases p = iteration_phases(axpy_workload(shape.rows, shape.cols), spec, scenario);
    b.iterations.assign(shape.iterations, p);
  } else {
    for (std::size_t i = 0; i < shape.iterations; ++i) {
      b.iterations.push_back(
          iteration_phases(matmul_workload(shape.rows, shape.cols, i == 0, spec), spec, scenario));
    }
  }
  return b;
}

}  // namespace tilestencil
