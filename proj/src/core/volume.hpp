#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "core/grid.hpp"

namespace bass {

using cplx = std::complex<double>;

// Full-grid multi-coil k-space measurements for one dataset item.
// Storage: one dense plane per coil, [coil][t][ky][kx] with kx fastest,
// so value(k, c) lives at values[c*N + k].
class MultiCoilKSpace {
public:
    MultiCoilKSpace(const KSpaceGrid& grid, std::vector<cplx> values)
        : grid_(grid), values_(std::move(values)) {
        const auto expected = grid_.num_points() * grid_.nc();
        if (static_cast<std::int64_t>(values_.size()) != expected) {
            throw_data_error("k-space value count " + std::to_string(values_.size()) +
                             " does not match grid " + grid_.describe());
        }
    }

    static MultiCoilKSpace zeros(const KSpaceGrid& grid) {
        return MultiCoilKSpace(grid, std::vector<cplx>(
            static_cast<std::size_t>(grid.num_points() * grid.nc())));
    }

    const KSpaceGrid& grid() const noexcept { return grid_; }

    cplx at(std::int64_t point, int coil) const noexcept {
        return values_[static_cast<std::size_t>(coil) * grid_.num_points() + point];
    }

    std::span<const cplx> values() const noexcept { return values_; }

    std::span<const cplx> coil(int c) const noexcept {
        return std::span<const cplx>(values_).subspan(
            static_cast<std::size_t>(c) * grid_.num_points(),
            static_cast<std::size_t>(grid_.num_points()));
    }

    // One contiguous ny*nx k-space plane.
    std::span<const cplx> plane(int c, int t) const noexcept {
        return std::span<const cplx>(values_).subspan(
            static_cast<std::size_t>(c) * grid_.num_points() +
                static_cast<std::size_t>(t) * grid_.points_per_frame(),
            static_cast<std::size_t>(grid_.points_per_frame()));
    }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const cplx& v : values_) s += std::norm(v);
        return s;
    }

    double max_modulus() const noexcept {
        double m = 0.0;
        for (const cplx& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    KSpaceGrid grid_;
    std::vector<cplx> values_;
};

// Complex image sequence of nx x ny pixels over nt frames, [t][y][x].
class ImageVolume {
public:
    ImageVolume(int nx, int ny, int nt, std::vector<cplx> values)
        : nx_(nx), ny_(ny), nt_(nt), values_(std::move(values)) {
        const auto expected = static_cast<std::int64_t>(nx) * ny * nt;
        if (nx < 1 || ny < 1 || nt < 1 ||
            static_cast<std::int64_t>(values_.size()) != expected) {
            throw_data_error("image volume size mismatch");
        }
    }

    static ImageVolume zeros(int nx, int ny, int nt) {
        return ImageVolume(nx, ny, nt,
                           std::vector<cplx>(static_cast<std::size_t>(nx) * ny * nt));
    }

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    int nt() const noexcept { return nt_; }
    std::int64_t num_pixels() const noexcept { return static_cast<std::int64_t>(nx_) * ny_; }

    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> mutable_values() noexcept { return values_; }

    std::span<const cplx> frame(int t) const noexcept {
        return std::span<const cplx>(values_).subspan(
            static_cast<std::size_t>(t) * num_pixels(), static_cast<std::size_t>(num_pixels()));
    }
    std::span<cplx> mutable_frame(int t) noexcept {
        return std::span<cplx>(values_).subspan(
            static_cast<std::size_t>(t) * num_pixels(), static_cast<std::size_t>(num_pixels()));
    }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const cplx& v : values_) s += std::norm(v);
        return s;
    }

private:
    int nx_, ny_, nt_;
    std::vector<cplx> values_;
};

}  // namespace bass
