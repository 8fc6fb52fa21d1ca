#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

#include "tilestencil/machine.hpp"

namespace tilestencil {

// Tile indices held by each core, round-robin: tile k lives on core k % P.
struct CoreAssignment {
  std::vector<std::vector<std::size_t>> per_core;

  std::size_t total_tiles() const noexcept;
  std::size_t max_load() const noexcept;
  std::size_t busy_cores() const noexcept;
};

CoreAssignment distribute_tiles(std::size_t tiles, const MachineSpec& spec);
CoreAssignment distribute_tiles(std::size_t tiles, std::size_t cores);

inline constexpr std::size_t ceil_div(std::size_t a, std::size_t b) noexcept {
  return (a + b - 1) / b;
}

// Work one tile costs in eltwise-op units. Each unit occupies every stage
// of the Unpack -> Math -> Pack pipeline for that stage's cycle count.
struct KernelOp {
  double ops_per_tile = 1.0;
};

// Axpy tile: three additions and one product.
inline constexpr KernelOp kAxpyKernelOp{4.0};
inline KernelOp matmul_kernel_op(const MachineSpec& spec) { return KernelOp{spec.matmul_tile_ops}; }

struct KernelTiming {
  double compute_s = 0.0;
  double dram_s = 0.0;
  double kernel_s = 0.0;  // max(compute_s, dram_s)
  bool dram_bound = false;
};

// The three stages overlap across tiles, so a core's throughput is set by
// its slowest stage; the busiest core bounds the launch.
KernelTiming simulate_kernel(std::size_t tiles, KernelOp op, double bytes_moved, const MachineSpec& spec);

// Runs `kernel(tile_index)` for every tile of the assignment. Cores are
// spread over `workers` threads. Kernels must only write their own output
// tile, so the result does not depend on the schedule.
template <class Kernel>
void functional_execute(const CoreAssignment& assignment, Kernel&& kernel, unsigned workers = 1) {
  const std::size_t cores = assignment.per_core.size();
  const std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(workers, cores));
  auto run_cores = [&](std::size_t first) {
    for (std::size_t core = first; core < cores; core += n) {
      for (std::size_t tile : assignment.per_core[core]) kernel(tile);
    }
  };
  if (n == 1) {
    run_cores(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n - 1);
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(run_cores, w);
  run_cores(0);
}

}  // namespace tilestencil
