#pragma once

#include <span>
#include <vector>

#include "core/volume.hpp"

namespace bass {

// Per-coil complex spatial weighting, shared by all frames. Storage is
// [coil][y][x], one nx*ny plane per coil.
class CoilSensitivities {
public:
    CoilSensitivities(int nx, int ny, int nc, std::vector<cplx> values);

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    int nc() const noexcept { return nc_; }
    std::int64_t num_pixels() const noexcept { return static_cast<std::int64_t>(nx_) * ny_; }

    cplx at(std::int64_t pixel, int coil) const noexcept {
        return values_[static_cast<std::size_t>(coil) * num_pixels() + pixel];
    }
    std::span<const cplx> coil(int c) const noexcept {
        return std::span<const cplx>(values_).subspan(
            static_cast<std::size_t>(c) * num_pixels(), static_cast<std::size_t>(num_pixels()));
    }

    // Sum over coils of |C|^2 at one pixel.
    double sos(std::int64_t pixel) const noexcept;
    double max_sos() const noexcept;

    // C == 1/sqrt(nc) everywhere, so the coil sum of squares is 1.
    static CoilSensitivities uniform(int nx, int ny, int nc);

private:
    int nx_, ny_, nc_;
    std::vector<cplx> values_;
};

// E x: per frame and coil, unitary 2D FFT of the coil-weighted image.
MultiCoilKSpace forward_encode(const ImageVolume& x, const CoilSensitivities& sens);

// E^H m: per frame, sum over coils of conj(C) times the inverse FFT.
ImageVolume adjoint_encode(const MultiCoilKSpace& m, const CoilSensitivities& sens);

// Least-squares per-pixel unmix: weights conj(C)/sum_c|C|^2, zero-sensitivity
// pixels map to 0. Coincides with adjoint_encode when the coil sum of
// squares is 1 everywhere.
ImageVolume coil_combine(const MultiCoilKSpace& m, const CoilSensitivities& sens);

}  // namespace bass
