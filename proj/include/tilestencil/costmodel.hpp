#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tilestencil/accelsim.hpp"
#include "tilestencil/machine.hpp"

namespace tilestencil {

enum class Method { Cpu, Axpy, Matmul };

std::string_view method_name(Method m) noexcept;
Method parse_method(std::string_view name);  // ConfigError on unknown names

enum class ScenarioKind { Pcie, Uvm, Upm };

// Host <-> device interconnect model.
//   PCIE: discrete card, per-direction link bandwidth.
//   UVM:  discrete memories joined by a 450 GB/s-class coherent link.
//   UPM:  one physical memory; no transfers and no tilize/untilize.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Pcie;
  double bw_per_dir = 0.0;  // B/s; unused for UPM
  bool elide_transfers = false;
  bool elide_conversions = false;

  static Scenario pcie(const MachineSpec& spec);
  static Scenario uvm(const MachineSpec& spec);
  static Scenario upm();
  static Scenario from_name(std::string_view name, const MachineSpec& spec);

  std::string_view name() const noexcept;
};

double transfer_time(double bytes, const Scenario& scenario);

// What one pipeline iteration asks of the host, the link and the device.
struct IterationWorkload {
  std::uint64_t h2d_bytes = 0;
  std::uint64_t d2h_bytes = 0;
  std::uint64_t extract_elements = 0;     // scalar CPU passes (shift/lowering/extraction)
  std::uint64_t conversion_elements = 0;  // tilize + untilize
  std::uint64_t tilize_calls = 0;
  std::uint64_t untilize_calls = 0;
  std::size_t tiles = 0;
  KernelOp op{};
  double dram_bytes = 0.0;  // device DRAM traffic of the kernel

  friend bool operator==(const IterationWorkload&, const IterationWorkload&) = default;
};

// Padded length of each shifted buffer: N*M rounded up to whole tiles.
std::uint64_t axpy_buffer_elements(std::size_t rows, std::size_t cols) noexcept;
// Row count of the lowered matrix: N*M rounded up to a multiple of 32.
std::uint64_t matmul_lowered_rows(std::size_t rows, std::size_t cols) noexcept;

IterationWorkload axpy_workload(std::size_t rows, std::size_t cols);
// `upload_stencil` adds the one-off 2 KiB stencil tile to h2d.
IterationWorkload matmul_workload(std::size_t rows, std::size_t cols, bool upload_stencil,
                                  const MachineSpec& spec);

// Peak device DRAM bytes a method needs for an N x M grid.
double device_footprint_bytes(Method method, std::size_t rows, std::size_t cols);
// Throws CapacityError naming DRAM when the footprint exceeds capacity.
void check_capacity(Method method, std::size_t rows, std::size_t cols, const MachineSpec& spec);

struct IterationPhases {
  double cpu_preprocess_s = 0.0;
  double conversion_s = 0.0;  // tilize/untilize share of cpu_preprocess_s
  double h2d_s = 0.0;
  double kernel_s = 0.0;
  double d2h_s = 0.0;
  std::uint64_t h2d_bytes = 0;
  std::uint64_t d2h_bytes = 0;
  std::uint64_t tilize_calls = 0;
  std::uint64_t untilize_calls = 0;

  double total_s() const noexcept { return cpu_preprocess_s + h2d_s + kernel_s + d2h_s; }

  friend bool operator==(const IterationPhases&, const IterationPhases&) = default;
};

IterationPhases iteration_phases(const IterationWorkload& w, const MachineSpec& spec,
                                 const Scenario& scenario);

struct PhaseTotals {
  double init_s = 0.0;
  double cpu_preprocess_s = 0.0;
  double conversion_s = 0.0;
  double h2d_s = 0.0;
  double kernel_s = 0.0;
  double d2h_s = 0.0;
  std::uint64_t h2d_bytes = 0;
  std::uint64_t d2h_bytes = 0;
  std::uint64_t tilize_calls = 0;
  std::uint64_t untilize_calls = 0;

  double non_init_s() const noexcept { return cpu_preprocess_s + h2d_s + kernel_s + d2h_s; }
  double total_s() const noexcept { return init_s + non_init_s(); }
};

struct PhaseBreakdown {
  double init_s = 0.0;
  std::vector<IterationPhases> iterations;
  bool uses_device = true;

  PhaseTotals totals() const noexcept;
  double total_s() const noexcept { return totals().total_s(); }
};

struct EnergyReport {
  double device_j = 0.0;
  double host_j = 0.0;
  double total_j = 0.0;
  // Per-phase attribution, device + host.
  double init_j = 0.0;
  double cpu_preprocess_j = 0.0;
  double h2d_j = 0.0;
  double kernel_j = 0.0;
  double d2h_j = 0.0;
};

// Device draws active power during kernels and idle power otherwise; the
// host draws TDP while preprocessing and while driving transfers.
EnergyReport energy(const PhaseBreakdown& b, const MachineSpec& spec);

double cpu_baseline_time(std::size_t rows, std::size_t cols, std::size_t iters, const MachineSpec& spec);

struct RunShape {
  Method method = Method::Axpy;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t iterations = 0;
};

// Analytical end-to-end model: one init charge, then per-iteration phases
// from the method's workload. The CPU method has no device phases.
PhaseBreakdown end_to_end(const RunShape& shape, const MachineSpec& spec, const Scenario& scenario);

}  // namespace tilestencil
