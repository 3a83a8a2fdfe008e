#include "core/ops.hpp"

#include <numeric>

namespace bass {

Rational acceleration_factor(const SamplingPattern& pattern) {
    const std::int64_t m = pattern.size();
    if (m < 1) throw_data_error("empty pattern");
    const std::int64_t n = pattern.grid().num_points();
    const std::int64_t g = std::gcd(n, m);
    return Rational{n / g, m / g};
}

SampledData apply_sampling(const SamplingPattern& pattern, const MultiCoilKSpace& data) {
    if (!pattern.grid().same_points(data.grid()) || pattern.grid().nc() != data.grid().nc()) {
        throw_data_error("pattern grid " + pattern.grid().describe() +
                         " does not match data grid " + data.grid().describe());
    }
    const int nc = data.grid().nc();
    const std::int64_t n = data.grid().num_points();
    const auto members = pattern.members();
    const std::int64_t m = pattern.size();

    SampledData out;
    out.points.assign(members.begin(), members.end());
    out.num_coils = nc;
    out.values.resize(static_cast<std::size_t>(m) * nc);
    const auto all = data.values();
    for (int c = 0; c < nc; ++c) {
        const std::size_t coil_base = static_cast<std::size_t>(c) * n;
        for (std::int64_t j = 0; j < m; ++j) {
            out.values[static_cast<std::size_t>(c) * m + j] =
                all[coil_base + static_cast<std::size_t>(members[static_cast<std::size_t>(j)])];
        }
    }
    return out;
}

MultiCoilKSpace embed_sampled(const SamplingPattern& pattern, const SampledData& sampled) {
    const std::int64_t m = pattern.size();
    if (sampled.num_points() != m) {
        throw_data_error("sampled length " + std::to_string(sampled.num_points()) +
                         " does not match pattern size " + std::to_string(m));
    }
    const KSpaceGrid& grid = pattern.grid();
    const int nc = grid.nc();
    if (sampled.num_coils != nc) {
        throw_data_error("sampled coil count does not match grid");
    }
    const std::int64_t n = grid.num_points();
    std::vector<cplx> values(static_cast<std::size_t>(n) * nc);
    const auto members = pattern.members();
    for (int c = 0; c < nc; ++c) {
        const std::size_t coil_base = static_cast<std::size_t>(c) * n;
        for (std::int64_t j = 0; j < m; ++j) {
            values[coil_base + static_cast<std::size_t>(members[static_cast<std::size_t>(j)])] =
                sampled.values[static_cast<std::size_t>(c) * m + j];
        }
    }
    return MultiCoilKSpace(grid, std::move(values));
}

MultiCoilKSpace normalize(const MultiCoilKSpace& data) {
    const double peak = data.max_modulus();
    if (peak == 0.0) throw_data_error("cannot normalize all-zero k-space");
    std::vector<cplx> values(data.values().begin(), data.values().end());
    const double inv = 1.0 / peak;
    for (cplx& v : values) v *= inv;
    return MultiCoilKSpace(data.grid(), std::move(values));
}

}  // namespace bass
