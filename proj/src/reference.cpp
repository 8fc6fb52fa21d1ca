#include "tilestencil/reference.hpp"

#include <utility>

#include "tilestencil/errors.hpp"

namespace tilestencil {

namespace {

// The reference supports the 5-point cross: zero corners and centre,
// equal edge weights.
Bf16 cross_weight(const StencilKernel& k) {
  const auto& w = k.weights;
  for (std::size_t i : {0u, 2u, 4u, 6u, 8u}) {
    if (w[i].to_f32() != 0.0f) throw ShapeError("reference solver needs a 5-point cross kernel");
  }
  if (!(w[1] == w[3] && w[3] == w[5] && w[5] == w[7])) {
    throw ShapeError("reference solver needs equal edge weights");
  }
  return w[1];
}

}  // namespace

Bf16Grid jacobi_step_reference(const Bf16Grid& g, const StencilKernel& k) {
  const Bf16 weight = cross_weight(k);
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  const auto in = g.data();
  auto value = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(rows) ||
        c >= static_cast<std::ptrdiff_t>(cols)) {
      return kBf16Zero;
    }
    return in[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
  };

  std::vector<Bf16> out(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto r = static_cast<std::ptrdiff_t>(i);
      const auto c = static_cast<std::ptrdiff_t>(j);
      Bf16 acc = bf16_add(value(r - 1, c), value(r + 1, c));
      acc = bf16_add(acc, value(r, c - 1));
      acc = bf16_add(acc, value(r, c + 1));
      out[i * cols + j] = bf16_mul(acc, weight);
    }
  }
  return Bf16Grid(rows, cols, std::move(out));
}

Bf16Grid jacobi_run_reference(const Bf16Grid& g, const StencilKernel& k, std::size_t iters) {
  Bf16Grid cur = g;
  for (std::size_t it = 0; it < iters; ++it) cur = jacobi_step_reference(cur, k);
  return cur;
}

std::vector<double> jacobi_run_double(const Bf16Grid& g, const StencilKernel& k, std::size_t iters) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  std::vector<double> cur(g.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = g.data()[i].to_f32();
  std::vector<double> next(cur.size());
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t dr = 0; dr < 3; ++dr) {
          for (std::size_t dc = 0; dc < 3; ++dc) {
            const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(i + dr) - 1;
            const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(j + dc) - 1;
            if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(rows) ||
                c >= static_cast<std::ptrdiff_t>(cols)) {
              continue;
            }
            acc += static_cast<double>(k.weights[dr * 3 + dc].to_f32()) *
                   cur[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
          }
        }
        next[i * cols + j] = acc;
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace tilestencil
