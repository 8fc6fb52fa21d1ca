#pragma once

#include <cstddef>
#include <vector>

#include "tilestencil/grid.hpp"

namespace tilestencil {

// One Jacobi sweep with zero Dirichlet boundary. For each cell the four
// edge neighbours are combined as ((up + down) + left) + right, every
// addition rounded to bf16, then scaled by the kernel's edge weight.
//
// Only the four edge-adjacent weights participate; they must be equal.
Bf16Grid jacobi_step_reference(const Bf16Grid& g, const StencilKernel& k);

Bf16Grid jacobi_run_reference(const Bf16Grid& g, const StencilKernel& k, std::size_t iters);

// Full 3x3 stencil evaluated in double precision, no intermediate rounding.
// Used to bound drift of the bf16 pipelines.
std::vector<double> jacobi_run_double(const Bf16Grid& g, const StencilKernel& k, std::size_t iters);

}  // namespace tilestencil
