#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tilestencil/costmodel.hpp"
#include "tilestencil/grid.hpp"
#include "tilestencil/tiling.hpp"

namespace tilestencil {

// The four neighbour planes of an N x M grid, each flattened row-major
// into its own contiguous buffer and zero-filled up to a whole number of
// tiles. Entry i*M+j of `up` holds the value above cell (i, j).
struct ShiftedSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Bf16> up, down, left, right;

  std::size_t logical_elems() const noexcept { return rows * cols; }
  std::size_t buffer_elems() const noexcept { return up.size(); }
  std::size_t tiles() const noexcept { return up.size() / kTileElems; }
};

// Constant scaling operand: a full tile of 0.25.
struct QuarterTile {
  std::array<Bf16, kTileElems> values;

  QuarterTile() { values.fill(kBf16Quarter); }
};

// From a grid that already carries its zero halo.
ShiftedSet extract_shifted(const Bf16Grid& padded);
// Same output as extract_shifted(pad_with_halo(g)) in one pass.
ShiftedSet fused_pad_extract(const Bf16Grid& g);

// out = 0.25 * (((u + d) + l) + r), each operation rounded to bf16.
void axpy_tile_kernel(std::span<const Bf16> up, std::span<const Bf16> down, std::span<const Bf16> left,
                      std::span<const Bf16> right, const QuarterTile& quarter, std::span<Bf16> out);

// Device side of one iteration: every tile of the shifted set through the
// kernel, spread over the machine's cores. Returns the padded output buffer.
std::vector<Bf16> axpy_device_step(const ShiftedSet& s, const MachineSpec& spec, unsigned workers = 1);

enum class ExtractMode { PadThenExtract, Fused };

struct AxpyStep {
  Bf16Grid grid;
  IterationPhases phases;
};

AxpyStep axpy_iteration(const Bf16Grid& g, const MachineSpec& spec, const Scenario& scenario,
                        ExtractMode mode = ExtractMode::Fused, unsigned workers = 1);

struct AxpyRun {
  Bf16Grid grid;
  PhaseBreakdown breakdown;
  EnergyReport energy;
};

// First iteration pads then extracts; later ones use the fused routine.
AxpyRun axpy_run(const Bf16Grid& g, std::size_t iters, const MachineSpec& spec, const Scenario& scenario,
                 unsigned workers = 1);

}  // namespace tilestencil
