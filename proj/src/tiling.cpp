#include "tilestencil/tiling.hpp"

#include <string>

#include "tilestencil/errors.hpp"
#include "tilestencil/machine.hpp"

namespace tilestencil {

namespace {

thread_local ConversionCounts g_counts;

}  // namespace

PaddedMatrix pad_to_tiles(std::span<const Bf16> row_major, std::size_t rows, std::size_t cols) {
  if (row_major.size() != rows * cols) throw ShapeError("matrix data length does not match shape");
  PaddedMatrix m;
  m.logical_rows = rows;
  m.logical_cols = cols;
  m.padded_rows = round_up_to_tile(rows);
  m.padded_cols = round_up_to_tile(cols);
  m.data.assign(m.padded_rows * m.padded_cols, kBf16Zero);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m.data[r * m.padded_cols + c] = row_major[r * cols + c];
    }
  }
  return m;
}

PaddedMatrix pad_to_tiles(const PaddedMatrix& m) {
  if (m.padded_rows % kTileDim == 0 && m.padded_cols % kTileDim == 0) return m;
  std::vector<Bf16> logical(m.logical_rows * m.logical_cols);
  for (std::size_t r = 0; r < m.logical_rows; ++r) {
    for (std::size_t c = 0; c < m.logical_cols; ++c) {
      logical[r * m.logical_cols + c] = m.at(r, c);
    }
  }
  return pad_to_tiles(logical, m.logical_rows, m.logical_cols);
}

TileBuffer tilize(const PaddedMatrix& m) {
  if (m.padded_rows % kTileDim != 0 || m.padded_cols % kTileDim != 0) {
    throw AlignmentError("tilize needs dimensions that are multiples of 32, got " +
                         std::to_string(m.padded_rows) + "x" + std::to_string(m.padded_cols));
  }
  TileBuffer t;
  t.tile_rows = m.padded_rows / kTileDim;
  t.tile_cols = m.padded_cols / kTileDim;
  t.data.resize(m.padded_rows * m.padded_cols);
  for (std::size_t tr = 0; tr < t.tile_rows; ++tr) {
    for (std::size_t tc = 0; tc < t.tile_cols; ++tc) {
      const std::size_t base = (tr * t.tile_cols + tc) * kTileElems;
      for (std::size_t r = 0; r < kTileDim; ++r) {
        const Bf16* src = &m.data[(tr * kTileDim + r) * m.padded_cols + tc * kTileDim];
        for (std::size_t c = 0; c < kTileDim; ++c) {
          t.data[base + tile_layout_index(r, c)] = src[c];
        }
      }
    }
  }
  ++g_counts.tilize_calls;
  g_counts.tilized_elements += t.data.size();
  return t;
}

std::vector<Bf16> untilize(const TileBuffer& t, std::size_t logical_rows, std::size_t logical_cols) {
  if (logical_rows > t.padded_rows() || logical_cols > t.padded_cols()) {
    throw BoundsError("untilize region " + std::to_string(logical_rows) + "x" +
                      std::to_string(logical_cols) + " exceeds tile buffer " +
                      std::to_string(t.padded_rows()) + "x" + std::to_string(t.padded_cols()));
  }
  std::vector<Bf16> out(logical_rows * logical_cols);
  for (std::size_t r = 0; r < logical_rows; ++r) {
    const std::size_t tr = r / kTileDim;
    for (std::size_t c = 0; c < logical_cols; ++c) {
      const std::size_t tc = c / kTileDim;
      const std::size_t base = (tr * t.tile_cols + tc) * kTileElems;
      out[r * logical_cols + c] = t.data[base + tile_layout_index(r % kTileDim, c % kTileDim)];
    }
  }
  ++g_counts.untilize_calls;
  g_counts.untilized_elements += t.data.size();
  return out;
}

double cpu_conversion_cost(std::uint64_t elements, const MachineSpec& spec) {
  return static_cast<double>(elements) / spec.tilize_throughput;
}

ConversionCounts conversion_counts() noexcept { return g_counts; }

void reset_conversion_counts() noexcept { g_counts = {}; }

}  // namespace tilestencil
