#include "tilestencil/accelsim.hpp"

#include <algorithm>

namespace tilestencil {

std::size_t CoreAssignment::total_tiles() const noexcept {
  std::size_t n = 0;
  for (const auto& c : per_core) n += c.size();
  return n;
}

std::size_t CoreAssignment::max_load() const noexcept {
  std::size_t m = 0;
  for (const auto& c : per_core) m = std::max(m, c.size());
  return m;
}

std::size_t CoreAssignment::busy_cores() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(per_core.begin(), per_core.end(), [](const auto& c) { return !c.empty(); }));
}

CoreAssignment distribute_tiles(std::size_t tiles, std::size_t cores) {
  CoreAssignment a;
  a.per_core.resize(std::max<std::size_t>(cores, 1));
  const std::size_t per = ceil_div(tiles, a.per_core.size());
  for (auto& c : a.per_core) c.reserve(per);
  for (std::size_t k = 0; k < tiles; ++k) a.per_core[k % a.per_core.size()].push_back(k);
  return a;
}

CoreAssignment distribute_tiles(std::size_t tiles, const MachineSpec& spec) {
  return distribute_tiles(tiles, static_cast<std::size_t>(spec.num_cores));
}

KernelTiming simulate_kernel(std::size_t tiles, KernelOp op, double bytes_moved, const MachineSpec& spec) {
  KernelTiming t;
  if (tiles == 0) return t;
  const auto cores = static_cast<std::size_t>(spec.num_cores);
  const double stage = std::max({spec.tile_cycles_unpack, spec.tile_cycles_math, spec.tile_cycles_pack});
  t.compute_s = static_cast<double>(ceil_div(tiles, cores)) * op.ops_per_tile * stage / spec.clock_hz;
  t.dram_s = bytes_moved / spec.dram_bw;
  t.dram_bound = t.dram_s > t.compute_s;
  t.kernel_s = std::max(t.compute_s, t.dram_s);
  return t;
}

}  // namespace tilestencil
