#pragma once

#include "core/volume.hpp"

namespace bass {

// Complex soft threshold: shrink the modulus by theta, keep the phase.
inline cplx soft_threshold(cplx z, double theta) {
    const double a = std::abs(z);
    if (a <= theta) return cplx(0.0, 0.0);
    return z * ((a - theta) / a);
}

// Anisotropic total variation of the volume: sum over frames of
// |forward x-differences| + |forward y-differences| (complex moduli,
// Neumann boundary).
double tv_norm(const ImageVolume& v);

// Sum of complex moduli over all entries.
double l1_norm(const ImageVolume& v);

// Sum of singular values of the (nx*ny) x nt Casorati matrix.
double nuclear_norm(const ImageVolume& v);

// Proximal map of theta * tv_norm, evaluated per frame by a fixed number of
// fast-gradient-projection iterations on the dual (duals clipped to the unit
// disc, step 1/(8*theta)). Exact for single-pixel frames; theta <= 0 is the
// identity.
ImageVolume prox_sfd(const ImageVolume& v, double theta, int inner_iterations);

// Proximal map of theta * nuclear_norm: singular-value soft thresholding of
// the Casorati matrix. If out_norm is non-null it receives the nuclear norm
// of the result (the thresholded singular values summed).
ImageVolume prox_nuclear(const ImageVolume& v, double theta, double* out_norm = nullptr);

}  // namespace bass
