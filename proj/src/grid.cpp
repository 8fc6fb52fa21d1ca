#include "tilestencil/grid.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tilestencil/errors.hpp"

namespace tilestencil {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw EmptyGridError("grid dimensions must be >= 1, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

}  // namespace

Bf16Grid::Bf16Grid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  data_.assign(rows * cols, kBf16Zero);
}

Bf16Grid::Bf16Grid(std::size_t rows, std::size_t cols, std::vector<Bf16> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw ShapeError("grid data length " + std::to_string(data_.size()) + " != " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (Bf16 v : data_) {
    if (!v.is_finite()) throw DomainError("grid values must be finite");
  }
}

Bf16Grid Bf16Grid::from_floats(std::size_t rows, std::size_t cols, std::span<const float> values) {
  std::vector<Bf16> data;
  data.reserve(values.size());
  for (float v : values) data.push_back(bf16_from_f32(v));
  return Bf16Grid(rows, cols, std::move(data));
}

Bf16Grid Bf16Grid::filled(std::size_t rows, std::size_t cols, Bf16 value) {
  return Bf16Grid(rows, cols, std::vector<Bf16>(rows * cols, value));
}

void Bf16Grid::set(std::size_t r, std::size_t c, Bf16 v) {
  if (r >= rows_ || c >= cols_) throw BoundsError("grid index out of range");
  if (!v.is_finite()) throw DomainError("grid values must be finite");
  data_[r * cols_ + c] = v;
}

std::vector<float> Bf16Grid::to_floats() const {
  std::vector<float> out;
  out.reserve(data_.size());
  for (Bf16 v : data_) out.push_back(v.to_f32());
  return out;
}

StencilKernel StencilKernel::laplace5() {
  StencilKernel k;
  for (std::size_t i : {1u, 3u, 5u, 7u}) k.weights[i] = kBf16Quarter;
  return k;
}

Bf16Grid pad_with_halo(const Bf16Grid& g) {
  const std::size_t cols = g.cols() + 2;
  std::vector<Bf16> data((g.rows() + 2) * cols, kBf16Zero);
  const auto src = g.data();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      data[(r + 1) * cols + c + 1] = src[r * g.cols() + c];
    }
  }
  return Bf16Grid(g.rows() + 2, cols, std::move(data));
}

Bf16Grid random_grid(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  check_shape(rows, cols);
  // mt19937_64 output is fully specified; map the top 53 bits to [0,1) by
  // hand because uniform_real_distribution is implementation-defined.
  std::mt19937_64 rng(seed);
  std::vector<Bf16> data(rows * cols);
  for (auto& v : data) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = bf16_from_f32(static_cast<float>(u));
  }
  return Bf16Grid(rows, cols, std::move(data));
}

}  // namespace tilestencil
