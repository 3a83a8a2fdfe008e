#include "sampling/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bass {

std::int64_t conjugate_index(std::int64_t k, const KSpaceGrid& grid) {
    const GridCoords c = grid.coords_of(k);
    const int kx = ((2 * grid.center_x() - c.kx) % grid.nx() + grid.nx()) % grid.nx();
    const int ky = ((2 * grid.center_y() - c.ky) % grid.ny() + grid.ny()) % grid.ny();
    return grid.index_of(kx, ky, c.t);
}

bool violates_constraint(std::int64_t candidate, const std::vector<std::uint8_t>& chosen_bits,
                         const PositionalConstraint& pc, const KSpaceGrid& grid) {
    const GridCoords c = grid.coords_of(candidate);
    const int r = pc.radius;
    for (int dy = -r; dy <= r; ++dy) {
        const int y = c.ky + dy;
        if (y < 0 || y >= grid.ny()) continue;
        for (int dx = -r; dx <= r; ++dx) {
            const int x = c.kx + dx;
            if (x < 0 || x >= grid.nx()) continue;
            if (dx == 0 && dy == 0) continue;
            if (chosen_bits[static_cast<std::size_t>(grid.index_of(x, y, c.t))]) return true;
        }
    }
    if (pc.exclude_conjugate) {
        const std::int64_t conj = conjugate_index(candidate, grid);
        if (conj != candidate && chosen_bits[static_cast<std::size_t>(conj)]) return true;
    }
    return false;
}

bool violates_constraint(std::int64_t candidate, std::span<const std::int64_t> chosen,
                         const PositionalConstraint& pc, const KSpaceGrid& grid) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(grid.num_points()), 0);
    for (std::int64_t k : chosen) bits[static_cast<std::size_t>(k)] = 1;
    return violates_constraint(candidate, bits, pc, grid);
}

std::vector<std::int64_t> calibration_region(const KSpaceGrid& grid, int half_x, int half_y) {
    if (half_x < 0 || half_y < 0) throw_spec_error("calibration half-widths must be >= 0");
    const int cx = grid.center_x();
    const int cy = grid.center_y();
    if (cx - half_x < 0 || cx + half_x > grid.nx() || cy - half_y < 0 || cy + half_y > grid.ny()) {
        throw_spec_error("calibration block " + std::to_string(2 * half_x) + "x" +
                         std::to_string(2 * half_y) + " does not fit grid " + grid.describe());
    }
    std::vector<std::int64_t> region;
    region.reserve(static_cast<std::size_t>(2 * half_x) * (2 * half_y));
    for (int ky = cy - half_y; ky < cy + half_y; ++ky) {
        for (int kx = cx - half_x; kx < cx + half_x; ++kx) {
            region.push_back(grid.index_of(kx, ky, 0));
        }
    }
    return region;
}

namespace {

double center_distance(const KSpaceGrid& grid, std::int64_t k) {
    const GridCoords c = grid.coords_of(k);
    const double dx = c.kx - grid.center_x();
    const double dy = c.ky - grid.center_y();
    return std::hypot(dx, dy);
}

// Per-frame share of `total`, earlier frames take the remainder.
std::int64_t frame_quota(std::int64_t total, int nt, int t) {
    return total / nt + (t < static_cast<int>(total % nt) ? 1 : 0);
}

std::vector<std::int64_t> frame_candidates(const KSpaceGrid& grid, int t,
                                           const std::vector<std::uint8_t>& taken) {
    std::vector<std::int64_t> out;
    const std::int64_t base = static_cast<std::int64_t>(t) * grid.points_per_frame();
    for (std::int64_t i = 0; i < grid.points_per_frame(); ++i) {
        if (!taken[static_cast<std::size_t>(base + i)]) out.push_back(base + i);
    }
    return out;
}

// Weighted sampling without replacement: keep the `count` candidates with the
// largest keys log(u)/w (ties broken by index).
std::vector<std::int64_t> weighted_pick(const std::vector<std::int64_t>& candidates,
                                        const std::vector<double>& weights, std::int64_t count,
                                        Rng& rng) {
    std::vector<std::pair<double, std::int64_t>> keyed;
    keyed.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double u = uniform01(rng);
        while (u <= 0.0) u = uniform01(rng);
        keyed.emplace_back(std::log(u) / weights[i], candidates[i]);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count && i < static_cast<std::int64_t>(keyed.size()); ++i) {
        out.push_back(keyed[static_cast<std::size_t>(i)].second);
    }
    return out;
}

std::vector<std::int64_t> uniform_pick(std::vector<std::int64_t> candidates, std::int64_t count,
                                       Rng& rng) {
    // Partial Fisher-Yates.
    const std::int64_t n = static_cast<std::int64_t>(candidates.size());
    const std::int64_t take = std::min(count, n);
    for (std::int64_t i = 0; i < take; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
    }
    candidates.resize(static_cast<std::size_t>(take));
    return candidates;
}

}  // namespace

SamplingPattern generate(const GeneratorConfig& config, const KSpaceGrid& grid) {
    const std::int64_t n = grid.num_points();
    if (config.target_m > n) {
        throw_spec_error("target pattern size " + std::to_string(config.target_m) +
                         " exceeds grid point count " + std::to_string(n));
    }
    std::vector<std::int64_t> locked = calibration_region(grid, config.cal_half_x, config.cal_half_y);
    if (config.target_m < static_cast<std::int64_t>(locked.size())) {
        throw_spec_error("target pattern size " + std::to_string(config.target_m) +
                         " is smaller than the calibration region (" +
                         std::to_string(locked.size()) + " points)");
    }

    std::vector<std::uint8_t> taken(static_cast<std::size_t>(n), 0);
    for (std::int64_t k : locked) taken[static_cast<std::size_t>(k)] = 1;
    std::int64_t remaining = config.target_m - static_cast<std::int64_t>(locked.size());

    Rng rng = make_rng(config.seed);
    std::vector<std::int64_t> members = locked;
    members.reserve(static_cast<std::size_t>(config.target_m));
    auto add_points = [&](const std::vector<std::int64_t>& pts) {
        for (std::int64_t k : pts) {
            members.push_back(k);
            taken[static_cast<std::size_t>(k)] = 1;
            --remaining;
        }
    };

    switch (config.kind) {
        case GeneratorKind::center_only:
            break;  // padding below covers any excess over the block
        case GeneratorKind::uniform_random: {
            std::vector<std::int64_t> candidates;
            for (std::int64_t k = 0; k < n; ++k) {
                if (!taken[static_cast<std::size_t>(k)]) candidates.push_back(k);
            }
            add_points(uniform_pick(std::move(candidates), remaining, rng));
            break;
        }
        case GeneratorKind::variable_density: {
            const std::int64_t total = remaining;
            for (int t = 0; t < grid.nt(); ++t) {
                const std::int64_t quota = frame_quota(total, grid.nt(), t);
                auto candidates = frame_candidates(grid, t, taken);
                std::vector<double> weights(candidates.size());
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    weights[i] = std::pow(1.0 + center_distance(grid, candidates[i]) / config.vd_sigma,
                                          -config.vd_exponent);
                }
                add_points(weighted_pick(candidates, weights, quota, rng));
            }
            break;
        }
        case GeneratorKind::poisson_disk: {
            const std::int64_t total = remaining;
            for (int t = 0; t < grid.nt(); ++t) {
                const std::int64_t quota = frame_quota(total, grid.nt(), t);
                auto permuted = uniform_pick(frame_candidates(grid, t, taken),
                                             grid.points_per_frame(), rng);
                std::vector<std::int64_t> accepted;
                std::vector<std::int64_t> rejected;
                for (std::int64_t k : permuted) {
                    if (static_cast<std::int64_t>(accepted.size()) == quota) break;
                    const GridCoords c = grid.coords_of(k);
                    bool ok = true;
                    for (std::int64_t a : accepted) {
                        const GridCoords ca = grid.coords_of(a);
                        const double d = std::hypot(static_cast<double>(c.kx - ca.kx),
                                                    static_cast<double>(c.ky - ca.ky));
                        if (d < config.pd_radius) {
                            ok = false;
                            break;
                        }
                    }
                    (ok ? accepted : rejected).push_back(k);
                }
                // Radius infeasible for the quota: pad from the rejected pool
                // (keeps the exact-size contract, gives up the distance
                // property for the padded points).
                std::int64_t shortfall = quota - static_cast<std::int64_t>(accepted.size());
                for (std::int64_t i = 0; i < shortfall; ++i) {
                    accepted.push_back(rejected[static_cast<std::size_t>(i)]);
                }
                add_points(accepted);
            }
            break;
        }
    }

    if (remaining > 0) {
        std::vector<std::int64_t> candidates;
        for (std::int64_t k = 0; k < n; ++k) {
            if (!taken[static_cast<std::size_t>(k)]) candidates.push_back(k);
        }
        add_points(uniform_pick(std::move(candidates), remaining, rng));
    }

    return SamplingPattern(grid, std::move(members), std::move(locked));
}

}  // namespace bass
