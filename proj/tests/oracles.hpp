#pragma once

// Independent reference computations for tests. Nothing here calls into
// the library's rounding, layout or stencil code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <utility>
#include <vector>

namespace oracle {

// Round a double to the nearest bfloat16 value (ties to even) using only
// <cmath>: frexp/ldexp to scale the significand, nearbyint for RNE.
inline double round_bf16(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  int exp = 0;
  std::frexp(x, &exp);  // |x| in [2^(exp-1), 2^exp)
  // Quantum: 8 significant bits for normals, fixed 2^-133 below 2^-126.
  const int quantum_exp = std::max(exp - 8, -133);
  const double q = std::ldexp(1.0, quantum_exp);
  return std::nearbyint(x / q) * q;
}

// Spacing of bf16 values around |x| (subnormal spacing below 2^-126).
inline double bf16_ulp(double x) {
  if (x == 0.0) return std::ldexp(1.0, -133);
  int exp = 0;
  std::frexp(x, &exp);
  return std::ldexp(1.0, std::max(exp - 8, -133));
}

inline float bits_to_float(std::uint16_t bits) {
  const std::uint32_t u = static_cast<std::uint32_t>(bits) << 16;
  float f;
  std::memcpy(&f, &u, sizeof f);
  return f;
}

// 32x32 tile layout by explicit enumeration: walk faces TL, TR, BL, BR and
// rows/cols inside each face, handing out consecutive slots.
// Returns, for each flat slot of a (tr x tc)-tile matrix, the (row, col)
// it holds.
inline std::vector<std::pair<std::size_t, std::size_t>> tile_layout(std::size_t tile_rows, std::size_t tile_cols) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  const std::size_t face_origin[4][2] = {{0, 0}, {0, 16}, {16, 0}, {16, 16}};
  for (std::size_t tr = 0; tr < tile_rows; ++tr) {
    for (std::size_t tc = 0; tc < tile_cols; ++tc) {
      for (const auto& f : face_origin) {
        for (std::size_t r = 0; r < 16; ++r) {
          for (std::size_t c = 0; c < 16; ++c) {
            slots.emplace_back(tr * 32 + f[0] + r, tc * 32 + f[1] + c);
          }
        }
      }
    }
  }
  return slots;
}

inline std::size_t round_up_32(std::size_t n) {
  std::size_t m = 0;
  while (m < n) m += 32;
  return m;
}

// Row-major grid of doubles with zero outside.
struct DGrid {
  std::size_t rows, cols;
  std::vector<double> v;
  double at(long r, long c) const {
    if (r < 0 || c < 0 || r >= static_cast<long>(rows) || c >= static_cast<long>(cols)) return 0.0;
    return v[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
  }
};

// Jacobi with every add and the final scale rounded to bf16, neighbours in
// up, down, left, right order.
inline DGrid jacobi_per_op_rounded(const DGrid& g, int iters) {
  DGrid cur = g;
  for (int it = 0; it < iters; ++it) {
    DGrid next{cur.rows, cur.cols, std::vector<double>(cur.v.size())};
    for (long i = 0; i < static_cast<long>(cur.rows); ++i) {
      for (long j = 0; j < static_cast<long>(cur.cols); ++j) {
        double s = round_bf16(cur.at(i - 1, j) + cur.at(i + 1, j));
        s = round_bf16(s + cur.at(i, j - 1));
        s = round_bf16(s + cur.at(i, j + 1));
        next.v[static_cast<std::size_t>(i) * cur.cols + static_cast<std::size_t>(j)] = round_bf16(s * 0.25);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// Exact (double) Jacobi.
inline DGrid jacobi_exact(const DGrid& g, int iters) {
  DGrid cur = g;
  for (int it = 0; it < iters; ++it) {
    DGrid next{cur.rows, cur.cols, std::vector<double>(cur.v.size())};
    for (long i = 0; i < static_cast<long>(cur.rows); ++i) {
      for (long j = 0; j < static_cast<long>(cur.cols); ++j) {
        next.v[static_cast<std::size_t>(i) * cur.cols + static_cast<std::size_t>(j)] =
            0.25 * (cur.at(i - 1, j) + cur.at(i + 1, j) + cur.at(i, j - 1) + cur.at(i, j + 1));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// Small deterministic generator for test inputs (splitmix64).
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

}  // namespace oracle
