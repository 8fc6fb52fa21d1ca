#include "tilestencil/axpy.hpp"

#include <algorithm>

#include "tilestencil/accelsim.hpp"
#include "tilestencil/errors.hpp"

namespace tilestencil {

namespace {

ShiftedSet allocate_shifted(std::size_t rows, std::size_t cols) {
  ShiftedSet s;
  s.rows = rows;
  s.cols = cols;
  const auto n = static_cast<std::size_t>(axpy_buffer_elements(rows, cols));
  s.up.assign(n, kBf16Zero);
  s.down.assign(n, kBf16Zero);
  s.left.assign(n, kBf16Zero);
  s.right.assign(n, kBf16Zero);
  return s;
}

}  // namespace

ShiftedSet extract_shifted(const Bf16Grid& padded) {
  if (padded.rows() < 3 || padded.cols() < 3) {
    throw EmptyGridError("padded grid must be at least 3x3 (one interior cell)");
  }
  const std::size_t n = padded.rows() - 2;
  const std::size_t m = padded.cols() - 2;
  ShiftedSet s = allocate_shifted(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      s.up[k] = padded.at(i, j + 1);
      s.down[k] = padded.at(i + 2, j + 1);
      s.left[k] = padded.at(i + 1, j);
      s.right[k] = padded.at(i + 1, j + 2);
    }
  }
  return s;
}

ShiftedSet fused_pad_extract(const Bf16Grid& g) {
  const std::size_t n = g.rows();
  const std::size_t m = g.cols();
  ShiftedSet s = allocate_shifted(n, m);
  const auto src = g.data();
  // Row shifts are block copies; the halo rows stay zero.
  for (std::size_t i = 1; i < n; ++i) {
    std::copy_n(src.begin() + (i - 1) * m, m, s.up.begin() + i * m);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::copy_n(src.begin() + (i + 1) * m, m, s.down.begin() + i * m);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row = i * m;
    for (std::size_t j = 1; j < m; ++j) s.left[row + j] = src[row + j - 1];
    for (std::size_t j = 0; j + 1 < m; ++j) s.right[row + j] = src[row + j + 1];
  }
  return s;
}

void axpy_tile_kernel(std::span<const Bf16> up, std::span<const Bf16> down, std::span<const Bf16> left,
                      std::span<const Bf16> right, const QuarterTile& quarter, std::span<Bf16> out) {
  if (up.size() != kTileElems || down.size() != kTileElems || left.size() != kTileElems ||
      right.size() != kTileElems || out.size() != kTileElems) {
    throw ShapeError("axpy tile kernel operands must hold 1024 elements");
  }
  for (std::size_t e = 0; e < kTileElems; ++e) {
    Bf16 acc = bf16_add(up[e], down[e]);
    acc = bf16_add(acc, left[e]);
    acc = bf16_add(acc, right[e]);
    out[e] = bf16_mul(acc, quarter.values[e]);
  }
}

std::vector<Bf16> axpy_device_step(const ShiftedSet& s, const MachineSpec& spec, unsigned workers) {
  const QuarterTile quarter;
  std::vector<Bf16> out(s.buffer_elems());
  const auto assignment = distribute_tiles(s.tiles(), spec);
  auto tile = [](const std::vector<Bf16>& buf, std::size_t k) {
    return std::span<const Bf16>(buf).subspan(k * kTileElems, kTileElems);
  };
  functional_execute(
      assignment,
      [&](std::size_t k) {
        axpy_tile_kernel(tile(s.up, k), tile(s.down, k), tile(s.left, k), tile(s.right, k), quarter,
                         std::span<Bf16>(out).subspan(k * kTileElems, kTileElems));
      },
      workers);
  return out;
}

AxpyStep axpy_iteration(const Bf16Grid& g, const MachineSpec& spec, const Scenario& scenario,
                        ExtractMode mode, unsigned workers) {
  const ShiftedSet s =
      mode == ExtractMode::Fused ? fused_pad_extract(g) : extract_shifted(pad_with_halo(g));
  const std::vector<Bf16> out = axpy_device_step(s, spec, workers);

  // Charge what was actually moved: four input buffers down, one back.
  IterationWorkload w;
  const std::uint64_t buffer_bytes = s.buffer_elems() * sizeof(Bf16);
  w.h2d_bytes = 4 * buffer_bytes;
  w.d2h_bytes = out.size() * sizeof(Bf16);
  w.extract_elements = 4 * s.buffer_elems();
  w.tiles = s.tiles();
  w.op = kAxpyKernelOp;
  w.dram_bytes = static_cast<double>(w.h2d_bytes + w.d2h_bytes);

  std::vector<Bf16> logical(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(s.logical_elems()));
  return AxpyStep{Bf16Grid(g.rows(), g.cols(), std::move(logical)), iteration_phases(w, spec, scenario)};
}

AxpyRun axpy_run(const Bf16Grid& g, std::size_t iters, const MachineSpec& spec, const Scenario& scenario,
                 unsigned workers) {
  check_capacity(Method::Axpy, g.rows(), g.cols(), spec);
  PhaseBreakdown b;
  b.init_s = spec.init_time_s;
  b.iterations.reserve(iters);
  Bf16Grid cur = g;
  for (std::size_t it = 0; it < iters; ++it) {
    auto step = axpy_iteration(cur, spec, scenario, it == 0 ? ExtractMode::PadThenExtract : ExtractMode::Fused,
                               workers);
    cur = std::move(step.grid);
    b.iterations.push_back(step.phases);
  }
  EnergyReport e = energy(b, spec);
  return AxpyRun{std::move(cur), std::move(b), e};
}

}  // namespace tilestencil
