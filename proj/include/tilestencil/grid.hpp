#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tilestencil/bf16.hpp"

namespace tilestencil {

// Row-major 2D field of finite bf16 values. Both dimensions are >= 1.
class Bf16Grid {
 public:
  Bf16Grid(std::size_t rows, std::size_t cols);  // zero-filled
  Bf16Grid(std::size_t rows, std::size_t cols, std::vector<Bf16> data);

  static Bf16Grid from_floats(std::size_t rows, std::size_t cols, std::span<const float> values);
  static Bf16Grid filled(std::size_t rows, std::size_t cols, Bf16 value);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Bf16 at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Bf16 v);

  std::span<const Bf16> data() const noexcept { return data_; }
  std::vector<float> to_floats() const;

  friend bool operator==(const Bf16Grid&, const Bf16Grid&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Bf16> data_;
};

// 3x3 weights, row-major: index 3*dr + dc for offsets (dr-1, dc-1).
struct StencilKernel {
  std::array<Bf16, 9> weights{};

  static StencilKernel laplace5();

  friend bool operator==(const StencilKernel&, const StencilKernel&) = default;
};

// Interior grid surrounded by a one-cell zero halo.
Bf16Grid pad_with_halo(const Bf16Grid& g);

// Seeded uniform [0,1) values, rounded to bf16. Stable across platforms.
Bf16Grid random_grid(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace tilestencil
