#pragma once

#include <string>
#include <vector>

#include "tilestencil/costmodel.hpp"
#include "tilestencil/machine.hpp"

namespace tilestencil {

// Measured kernel time for one (method, size, iterations) configuration.
struct KernelAnchor {
  Method method;
  std::size_t size;
  std::size_t iterations;
  double kernel_s;
};

// Profiled kernel times of the reference hardware.
inline constexpr KernelAnchor kAxpyKernelAnchors[] = {
    {Method::Axpy, 128, 100, 0.50e-3},
    {Method::Axpy, 128, 1000, 4.96e-3},
    {Method::Axpy, 1024, 100, 12.6e-3},
    {Method::Axpy, 1024, 1000, 124.0e-3},
};
inline constexpr KernelAnchor kMatmulKernelAnchors[] = {
    {Method::Matmul, 128, 100, 2.58e-3},
    {Method::Matmul, 1024, 1000, 1358.0e-3},
};

// Shares of non-init time spent on the host, and the CPU baseline's
// end-to-end advantage, all at the 1024^2 / 1000-iteration PCIe anchor.
inline constexpr std::size_t kAnchorSize = 1024;
inline constexpr std::size_t kAnchorIterations = 1000;
inline constexpr double kAxpyCpuShare = 0.15;
inline constexpr double kMatmulCpuShare = 0.95;
inline constexpr double kCpuBaselineSpeedup = 3.0;

// Unpack and pack run faster than math; their ratios are not observable
// from kernel times, so they are fixed.
inline constexpr double kUnpackToMath = 0.75;
inline constexpr double kPackToMath = 0.60;

struct FitRow {
  std::string label;
  double target = 0.0;
  double modeled = 0.0;
};

struct Calibration {
  MachineSpec spec;
  std::vector<FitRow> rows;
};

// Fits tile cycles, matmul op weight and the three host throughputs on top
// of the fixed hardware fields of `base`. Deterministic closed form.
Calibration calibrate(const MachineSpec& base = MachineSpec{});

}  // namespace tilestencil
