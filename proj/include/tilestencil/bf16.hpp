#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace tilestencil {

// bfloat16 stored as the upper half of an IEEE-754 binary32 pattern.
// Narrowing uses round-to-nearest-even; subnormals are kept (no flush).
struct Bf16 {
  std::uint16_t bits = 0;

  static constexpr Bf16 from_bits(std::uint16_t b) noexcept { return Bf16{b}; }

  static constexpr Bf16 from_f32(float x) noexcept {
    const auto u = std::bit_cast<std::uint32_t>(x);
    if ((u & 0x7F800000u) == 0x7F800000u && (u & 0x007FFFFFu) != 0) {
      // NaN: keep sign and payload top bits, force quiet.
      return Bf16{static_cast<std::uint16_t>((u >> 16) | 0x0040u)};
    }
    const std::uint32_t lsb = (u >> 16) & 1u;
    return Bf16{static_cast<std::uint16_t>((u + 0x7FFFu + lsb) >> 16)};
  }

  constexpr float to_f32() const noexcept {
    return std::bit_cast<float>(static_cast<std::uint32_t>(bits) << 16);
  }

  bool is_finite() const noexcept { return (bits & 0x7F80u) != 0x7F80u; }

  friend constexpr bool operator==(Bf16 a, Bf16 b) noexcept { return a.bits == b.bits; }
};

inline constexpr Bf16 bf16_from_f32(float x) noexcept { return Bf16::from_f32(x); }

inline constexpr Bf16 bf16_add(Bf16 a, Bf16 b) noexcept {
  return Bf16::from_f32(a.to_f32() + b.to_f32());
}

inline constexpr Bf16 bf16_mul(Bf16 a, Bf16 b) noexcept {
  return Bf16::from_f32(a.to_f32() * b.to_f32());
}

// Spacing of bf16 values at |x|: 2^(e-7) for normals, 2^-133 below 2^-126.
inline double bf16_ulp(Bf16 x) noexcept {
  const int biased = (x.bits >> 7) & 0xFF;
  const int exp = biased == 0 ? -126 : biased - 127;
  return std::ldexp(1.0, exp - 7);
}

inline constexpr Bf16 kBf16Zero = Bf16::from_bits(0x0000);
inline constexpr Bf16 kBf16One = Bf16::from_bits(0x3F80);
inline constexpr Bf16 kBf16Quarter = Bf16::from_bits(0x3E80);

}  // namespace tilestencil
