#pragma once

#include <cstdint>
#include <string>

#include "core/errors.hpp"

namespace bass {

struct GridCoords {
    int kx = 0;
    int ky = 0;
    int t = 0;
};

// Cartesian k-space grid of nx x ny phase encodes, nt time frames and nc
// coils. Point indices run over the nx*ny*nt spatial-temporal positions
// (coils share the sampling pattern and are not part of the index space).
//
// Canonical point ordering is row-major over (t, ky, kx), kx fastest.
// k-space arrays are stored centered: the DC bin sits at (nx/2, ny/2).
class KSpaceGrid {
public:
    KSpaceGrid(int nx, int ny, int nt, int nc) : nx_(nx), ny_(ny), nt_(nt), nc_(nc) {
        if (nx < 1 || ny < 1 || nt < 1 || nc < 1) {
            throw_spec_error("grid dimensions must all be >= 1, got " + describe());
        }
    }

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    int nt() const noexcept { return nt_; }
    int nc() const noexcept { return nc_; }

    // Spatial-temporal point count N (coils excluded).
    std::int64_t num_points() const noexcept {
        return static_cast<std::int64_t>(nx_) * ny_ * nt_;
    }

    std::int64_t points_per_frame() const noexcept {
        return static_cast<std::int64_t>(nx_) * ny_;
    }

    // DC bin position.
    int center_x() const noexcept { return nx_ / 2; }
    int center_y() const noexcept { return ny_ / 2; }

    std::int64_t index_of(int kx, int ky, int t) const noexcept {
        return (static_cast<std::int64_t>(t) * ny_ + ky) * nx_ + kx;
    }

    GridCoords coords_of(std::int64_t k) const noexcept {
        GridCoords c;
        c.kx = static_cast<int>(k % nx_);
        c.ky = static_cast<int>((k / nx_) % ny_);
        c.t = static_cast<int>(k / (static_cast<std::int64_t>(nx_) * ny_));
        return c;
    }

    bool same_points(const KSpaceGrid& other) const noexcept {
        return nx_ == other.nx_ && ny_ == other.ny_ && nt_ == other.nt_;
    }

    bool operator==(const KSpaceGrid& other) const noexcept {
        return same_points(other) && nc_ == other.nc_;
    }

    std::string describe() const {
        return std::to_string(nx_) + "x" + std::to_string(ny_) + "x" +
               std::to_string(nt_) + "x" + std::to_string(nc_);
    }

private:
    int nx_, ny_, nt_, nc_;
};

}  // namespace bass
