#pragma once

#include <span>

#include "core/volume.hpp"

namespace bass::fft {

// Unitary 2D FFT between a natural-order image plane ([y][x], pixel (0,0)
// top-left) and a centered k-space plane (DC bin at (nx/2, ny/2)). Both
// directions scale by 1/sqrt(nx*ny), so inverse2d is also the adjoint of
// forward2d. in and out must not alias.
void forward2d(std::span<const cplx> in, std::span<cplx> out, int nx, int ny);
void inverse2d(std::span<const cplx> in, std::span<cplx> out, int nx, int ny);

}  // namespace bass::fft
