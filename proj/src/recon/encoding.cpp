#include "recon/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace bass {

CoilSensitivities::CoilSensitivities(int nx, int ny, int nc, std::vector<cplx> values)
    : nx_(nx), ny_(ny), nc_(nc), values_(std::move(values)) {
    if (nx < 1 || ny < 1 || nc < 1) throw_spec_error("coil sensitivities need positive dims");
    if (static_cast<std::int64_t>(values_.size()) != num_pixels() * nc_) {
        throw_data_error("coil sensitivity value count " + std::to_string(values_.size()) +
                         " does not match " + std::to_string(nx) + "x" + std::to_string(ny) +
                         "x" + std::to_string(nc));
    }
}

double CoilSensitivities::sos(std::int64_t pixel) const noexcept {
    double s = 0.0;
    for (int c = 0; c < nc_; ++c) s += std::norm(at(pixel, c));
    return s;
}

double CoilSensitivities::max_sos() const noexcept {
    double m = 0.0;
    for (std::int64_t p = 0; p < num_pixels(); ++p) m = std::max(m, sos(p));
    return m;
}

CoilSensitivities CoilSensitivities::uniform(int nx, int ny, int nc) {
    const double v = 1.0 / std::sqrt(static_cast<double>(nc));
    return CoilSensitivities(
        nx, ny, nc,
        std::vector<cplx>(static_cast<std::size_t>(nx) * ny * nc, cplx(v, 0.0)));
}

namespace {

void check_image_dims(const ImageVolume& x, const CoilSensitivities& sens) {
    if (x.nx() != sens.nx() || x.ny() != sens.ny()) {
        throw_data_error("image " + std::to_string(x.nx()) + "x" + std::to_string(x.ny()) +
                         " does not match sensitivities " + std::to_string(sens.nx()) + "x" +
                         std::to_string(sens.ny()));
    }
}

void check_kspace_dims(const MultiCoilKSpace& m, const CoilSensitivities& sens) {
    if (m.grid().nx() != sens.nx() || m.grid().ny() != sens.ny() || m.grid().nc() != sens.nc()) {
        throw_data_error("k-space grid " + m.grid().describe() +
                         " does not match sensitivities " + std::to_string(sens.nx()) + "x" +
                         std::to_string(sens.ny()) + "x" + std::to_string(sens.nc()));
    }
}

}  // namespace

MultiCoilKSpace forward_encode(const ImageVolume& x, const CoilSensitivities& sens) {
    check_image_dims(x, sens);
    const KSpaceGrid grid(x.nx(), x.ny(), x.nt(), sens.nc());
    const std::int64_t np = grid.points_per_frame();
    std::vector<cplx> out(static_cast<std::size_t>(grid.num_points()) * grid.nc());
    std::vector<cplx> weighted(static_cast<std::size_t>(np));
    for (int c = 0; c < grid.nc(); ++c) {
        const auto cs = sens.coil(c);
        for (int t = 0; t < grid.nt(); ++t) {
            const auto frame = x.frame(t);
            for (std::int64_t p = 0; p < np; ++p) {
                weighted[static_cast<std::size_t>(p)] = cs[static_cast<std::size_t>(p)] *
                                                        frame[static_cast<std::size_t>(p)];
            }
            auto plane = std::span<cplx>(out).subspan(
                static_cast<std::size_t>(c) * grid.num_points() +
                    static_cast<std::size_t>(t) * np,
                static_cast<std::size_t>(np));
            fft::forward2d(weighted, plane, grid.nx(), grid.ny());
        }
    }
    return MultiCoilKSpace(grid, std::move(out));
}

ImageVolume adjoint_encode(const MultiCoilKSpace& m, const CoilSensitivities& sens) {
    check_kspace_dims(m, sens);
    const KSpaceGrid& grid = m.grid();
    const std::int64_t np = grid.points_per_frame();
    ImageVolume x = ImageVolume::zeros(grid.nx(), grid.ny(), grid.nt());
    std::vector<cplx> pixel(static_cast<std::size_t>(np));
    for (int c = 0; c < grid.nc(); ++c) {
        const auto cs = sens.coil(c);
        for (int t = 0; t < grid.nt(); ++t) {
            fft::inverse2d(m.plane(c, t), pixel, grid.nx(), grid.ny());
            auto frame = x.mutable_frame(t);
            for (std::int64_t p = 0; p < np; ++p) {
                frame[static_cast<std::size_t>(p)] += std::conj(cs[static_cast<std::size_t>(p)]) *
                                                      pixel[static_cast<std::size_t>(p)];
            }
        }
    }
    return x;
}

ImageVolume coil_combine(const MultiCoilKSpace& m, const CoilSensitivities& sens) {
    check_kspace_dims(m, sens);
    ImageVolume x = adjoint_encode(m, sens);
    const std::int64_t np = sens.num_pixels();
    std::vector<double> inv_sos(static_cast<std::size_t>(np));
    for (std::int64_t p = 0; p < np; ++p) {
        const double s = sens.sos(p);
        inv_sos[static_cast<std::size_t>(p)] = s > 0.0 ? 1.0 / s : 0.0;
    }
    for (int t = 0; t < x.nt(); ++t) {
        auto frame = x.mutable_frame(t);
        for (std::int64_t p = 0; p < np; ++p) {
            frame[static_cast<std::size_t>(p)] *= inv_sos[static_cast<std::size_t>(p)];
        }
    }
    return x;
}

}  // namespace bass
