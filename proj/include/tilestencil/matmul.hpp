#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "tilestencil/costmodel.hpp"
#include "tilestencil/grid.hpp"
#include "tilestencil/tiling.hpp"

namespace tilestencil {

inline constexpr std::size_t kStencilPoints = 9;

// im2col lowering of the 3x3 neighbourhoods: one 32-wide row per grid
// point (9 taps then zeros), rows ordered i*M+j, row count padded to 32.
struct StencilRowMatrix {
  std::size_t n_points = 0;
  std::size_t rows = 0;  // padded, multiple of 32
  std::vector<Bf16> data;  // rows x kTileDim, row-major

  static constexpr std::size_t row_width = kTileDim;

  Bf16 at(std::size_t r, std::size_t c) const { return data[r * row_width + c]; }
  std::size_t bytes() const noexcept { return data.size() * sizeof(Bf16); }
};

// Flattened kernel as a 32x1 column replicated across 32 columns.
struct StencilTile {
  std::array<Bf16, kTileElems> row_major{};

  Bf16 at(std::size_t r, std::size_t c) const { return row_major[r * kTileDim + c]; }
  // Same tile in device (face) layout, ready to upload.
  std::array<Bf16, kTileElems> device_layout() const;
};

StencilRowMatrix stencil_to_row(const Bf16Grid& padded);
StencilTile build_stencil_tile(const StencilKernel& k);

// out_k = in_k * stencil for every tile k. Each element is a 32-term dot
// product accumulated in binary32 and rounded to bf16 once.
// Requires in_tiles.tile_cols == 1.
TileBuffer batched_tile_matmul(const TileBuffer& in_tiles, const StencilTile& stencil, const MachineSpec& spec,
                               unsigned workers = 1);
TileBuffer batched_tile_matmul(const TileBuffer& in_tiles, const StencilTile& stencil);

// grid[i][j] = out[i*M + j][0] from an untilized (rows x 32) result.
Bf16Grid extract_result(std::span<const Bf16> out, std::size_t out_rows, std::size_t n, std::size_t m);

struct MatmulStep {
  Bf16Grid grid;
  IterationPhases phases;
  std::size_t lowered_bytes = 0;  // size of the tilized lowered matrix
};

MatmulStep matmul_iteration(const Bf16Grid& g, const MachineSpec& spec, const Scenario& scenario,
                            const StencilKernel& kernel = StencilKernel::laplace5(), bool upload_stencil = true,
                            unsigned workers = 1);

struct MatmulRun {
  Bf16Grid grid;
  PhaseBreakdown breakdown;
  EnergyReport energy;
};

// The stencil tile is uploaded in the first iteration only.
MatmulRun matmul_run(const Bf16Grid& g, std::size_t iters, const MachineSpec& spec, const Scenario& scenario,
                     unsigned workers = 1);

}  // namespace tilestencil
