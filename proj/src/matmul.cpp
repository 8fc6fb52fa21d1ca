#include "tilestencil/matmul.hpp"

#include "tilestencil/accelsim.hpp"
#include "tilestencil/errors.hpp"

namespace tilestencil {

std::array<Bf16, kTileElems> StencilTile::device_layout() const {
  std::array<Bf16, kTileElems> out{};
  for (std::size_t r = 0; r < kTileDim; ++r) {
    for (std::size_t c = 0; c < kTileDim; ++c) out[tile_layout_index(r, c)] = at(r, c);
  }
  return out;
}

StencilRowMatrix stencil_to_row(const Bf16Grid& padded) {
  if (padded.rows() < 3 || padded.cols() < 3) {
    throw EmptyGridError("padded grid must be at least 3x3 (one interior cell)");
  }
  const std::size_t n = padded.rows() - 2;
  const std::size_t m = padded.cols() - 2;
  StencilRowMatrix s;
  s.n_points = n * m;
  s.rows = round_up_to_tile(s.n_points);
  s.data.assign(s.rows * StencilRowMatrix::row_width, kBf16Zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Bf16* row = &s.data[(i * m + j) * StencilRowMatrix::row_width];
      for (std::size_t dr = 0; dr < 3; ++dr) {
        for (std::size_t dc = 0; dc < 3; ++dc) row[dr * 3 + dc] = padded.at(i + dr, j + dc);
      }
    }
  }
  return s;
}

StencilTile build_stencil_tile(const StencilKernel& k) {
  StencilTile t;
  for (std::size_t r = 0; r < kStencilPoints; ++r) {
    for (std::size_t c = 0; c < kTileDim; ++c) t.row_major[r * kTileDim + c] = k.weights[r];
  }
  return t;
}

TileBuffer batched_tile_matmul(const TileBuffer& in_tiles, const StencilTile& stencil, const MachineSpec& spec,
                               unsigned workers) {
  if (in_tiles.tile_cols != 1) throw ShapeError("batched matmul expects one tile per row block");
  if (in_tiles.data.size() != in_tiles.tile_count() * kTileElems) throw ShapeError("tile buffer length mismatch");

  const auto st = stencil.device_layout();
  TileBuffer out;
  out.tile_rows = in_tiles.tile_rows;
  out.tile_cols = 1;
  out.data.resize(in_tiles.data.size());

  functional_execute(
      distribute_tiles(in_tiles.tile_count(), spec),
      [&](std::size_t k) {
        const auto a = in_tiles.tile(k);
        auto c = out.tile(k);
        for (std::size_t r = 0; r < kTileDim; ++r) {
          for (std::size_t col = 0; col < kTileDim; ++col) {
            float acc = 0.0f;
            for (std::size_t i = 0; i < kTileDim; ++i) {
              acc += a[tile_layout_index(r, i)].to_f32() * st[tile_layout_index(i, col)].to_f32();
            }
            c[tile_layout_index(r, col)] = bf16_from_f32(acc);
          }
        }
      },
      workers);
  return out;
}

TileBuffer batched_tile_matmul(const TileBuffer& in_tiles, const StencilTile& stencil) {
  return batched_tile_matmul(in_tiles, stencil, MachineSpec{});
}

Bf16Grid extract_result(std::span<const Bf16> out, std::size_t out_rows, std::size_t n, std::size_t m) {
  if (out.size() != out_rows * kTileDim) throw ShapeError("result matrix must be rows x 32");
  if (n * m > out_rows) throw BoundsError("result matrix has fewer rows than grid points");
  std::vector<Bf16> data(n * m);
  for (std::size_t p = 0; p < n * m; ++p) data[p] = out[p * kTileDim];
  return Bf16Grid(n, m, std::move(data));
}

MatmulStep matmul_iteration(const Bf16Grid& g, const MachineSpec& spec, const Scenario& scenario,
                            const StencilKernel& kernel, bool upload_stencil, unsigned workers) {
  const StencilRowMatrix lowered = stencil_to_row(pad_with_halo(g));
  const PaddedMatrix aligned = pad_to_tiles(lowered.data, lowered.rows, StencilRowMatrix::row_width);
  const TileBuffer in_tiles = tilize(aligned);
  const TileBuffer out_tiles = batched_tile_matmul(in_tiles, build_stencil_tile(kernel), spec, workers);
  const std::vector<Bf16> out = untilize(out_tiles, out_tiles.padded_rows(), out_tiles.padded_cols());
  Bf16Grid next = extract_result(out, out_tiles.padded_rows(), g.rows(), g.cols());

  IterationWorkload w;
  w.h2d_bytes = in_tiles.bytes() + (upload_stencil ? kTileElems * sizeof(Bf16) : 0);
  w.d2h_bytes = out_tiles.bytes();
  w.extract_elements = lowered.data.size() + next.size();
  w.conversion_elements = in_tiles.data.size() + out_tiles.data.size();
  w.tilize_calls = 1;
  w.untilize_calls = 1;
  w.tiles = in_tiles.tile_count();
  w.op = matmul_kernel_op(spec);
  w.dram_bytes = static_cast<double>(in_tiles.bytes() + out_tiles.bytes());

  return MatmulStep{std::move(next), iteration_phases(w, spec, scenario), in_tiles.bytes()};
}

MatmulRun matmul_run(const Bf16Grid& g, std::size_t iters, const MachineSpec& spec, const Scenario& scenario,
                     unsigned workers) {
  check_capacity(Method::Matmul, g.rows(), g.cols(), spec);
  PhaseBreakdown b;
  b.init_s = spec.init_time_s;
  b.iterations.reserve(iters);
  const StencilKernel kernel = StencilKernel::laplace5();
  Bf16Grid cur = g;
  for (std::size_t it = 0; it < iters; ++it) {
    auto step = matmul_iteration(cur, spec, scenario, kernel, it == 0, workers);
    cur = std::move(step.grid);
    b.iterations.push_back(step.phases);
  }
  EnergyReport e = energy(b, spec);
  return MatmulRun{std::move(cur), std::move(b), e};
}

}  // namespace tilestencil
