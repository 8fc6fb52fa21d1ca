#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tilestencil/bf16.hpp"

namespace tilestencil {

struct MachineSpec;

inline constexpr std::size_t kTileDim = 32;
inline constexpr std::size_t kFaceDim = 16;
inline constexpr std::size_t kTileElems = kTileDim * kTileDim;
inline constexpr std::size_t kFaceElems = kFaceDim * kFaceDim;
static_assert(kTileDim == 2 * kFaceDim);

inline constexpr std::size_t round_up_to_tile(std::size_t n) noexcept {
  return (n + kTileDim - 1) / kTileDim * kTileDim;
}

// Position of element (r, c) of a 32x32 tile in device layout: faces in
// order top-left, top-right, bottom-left, bottom-right; row-major inside.
inline constexpr std::size_t tile_layout_index(std::size_t r, std::size_t c) noexcept {
  const std::size_t face = (r / kFaceDim) * 2 + (c / kFaceDim);
  return face * kFaceElems + (r % kFaceDim) * kFaceDim + (c % kFaceDim);
}

// Row-major matrix zero-padded so both dimensions are multiples of 32.
struct PaddedMatrix {
  std::size_t logical_rows = 0;
  std::size_t logical_cols = 0;
  std::size_t padded_rows = 0;
  std::size_t padded_cols = 0;
  std::vector<Bf16> data;  // padded_rows * padded_cols, row-major

  Bf16 at(std::size_t r, std::size_t c) const { return data[r * padded_cols + c]; }
};

// Flat buffer of tiles in device layout. Tiles are ordered row-major by
// tile coordinate; each tile holds 1024 elements in face order.
struct TileBuffer {
  std::size_t tile_rows = 0;
  std::size_t tile_cols = 0;
  std::vector<Bf16> data;

  std::size_t tile_count() const noexcept { return tile_rows * tile_cols; }
  std::size_t padded_rows() const noexcept { return tile_rows * kTileDim; }
  std::size_t padded_cols() const noexcept { return tile_cols * kTileDim; }
  std::size_t bytes() const noexcept { return data.size() * sizeof(Bf16); }

  std::span<const Bf16> tile(std::size_t k) const {
    return std::span<const Bf16>(data).subspan(k * kTileElems, kTileElems);
  }
  std::span<Bf16> tile(std::size_t k) {
    return std::span<Bf16>(data).subspan(k * kTileElems, kTileElems);
  }
};

PaddedMatrix pad_to_tiles(std::span<const Bf16> row_major, std::size_t rows, std::size_t cols);
PaddedMatrix pad_to_tiles(const PaddedMatrix& m);

// Throws AlignmentError unless padded dims are multiples of 32.
TileBuffer tilize(const PaddedMatrix& m);

// Inverse of tilize on the leading logical_rows x logical_cols region.
// Throws BoundsError if the region exceeds the buffer.
std::vector<Bf16> untilize(const TileBuffer& t, std::size_t logical_rows, std::size_t logical_cols);

double cpu_conversion_cost(std::uint64_t elements, const MachineSpec& spec);

// Per-thread tally of tilize/untilize invocations, used to audit which
// pipelines pay for layout conversion.
struct ConversionCounts {
  std::uint64_t tilize_calls = 0;
  std::uint64_t untilize_calls = 0;
  std::uint64_t tilized_elements = 0;
  std::uint64_t untilized_elements = 0;

  friend bool operator==(const ConversionCounts&, const ConversionCounts&) = default;
};

ConversionCounts conversion_counts() noexcept;
void reset_conversion_counts() noexcept;

}  // namespace tilestencil
