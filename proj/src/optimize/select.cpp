#include "optimize/select.hpp"

#include <algorithm>
#include <string>

#include "core/errors.hpp"

namespace bass {

std::int64_t add_count(std::int64_t omega_size, std::int64_t K, std::int64_t M) {
    return std::min(std::max(M + K - omega_size, std::int64_t{0}), K);
}

std::int64_t remove_count(std::int64_t omega_size, std::int64_t K, std::int64_t M) {
    return std::min(std::max(omega_size + K - M, std::int64_t{0}), K);
}

namespace {

// Shared body of select_add/select_remove: pool is the candidate index list
// (ascending), score the importance value per pool entry.
std::vector<std::int64_t> pick_biased(const std::vector<std::int64_t>& pool,
                                      std::span<const double> score, std::int64_t required,
                                      double rho, const PositionalConstraint& pc,
                                      const KSpaceGrid& grid, Rng& rng, bool* pc_relaxed) {
    if (required == 0) return {};
    std::vector<std::pair<double, std::int64_t>> drawn;
    std::vector<std::uint8_t> chosen_bits(static_cast<std::size_t>(grid.num_points()), 0);
    std::vector<std::int64_t> accepted;
    for (;;) {
        drawn.clear();
        if (rho >= 1.0) {
            for (std::int64_t k : pool) drawn.emplace_back(score[static_cast<std::size_t>(k)], k);
        } else {
            for (std::int64_t k : pool) {
                if (uniform01(rng) < rho) {
                    drawn.emplace_back(score[static_cast<std::size_t>(k)], k);
                }
            }
        }
        std::sort(drawn.begin(), drawn.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        accepted.clear();
        std::fill(chosen_bits.begin(), chosen_bits.end(), 0);
        for (const auto& [v, k] : drawn) {
            if (static_cast<std::int64_t>(accepted.size()) == required) break;
            if (violates_constraint(k, chosen_bits, pc, grid)) continue;
            accepted.push_back(k);
            chosen_bits[static_cast<std::size_t>(k)] = 1;
        }
        if (static_cast<std::int64_t>(accepted.size()) == required) return accepted;
        if (rho >= 1.0) {
            // The constraint itself is infeasible for this batch size; fill
            // the shortfall ignoring it.
            for (const auto& [v, k] : drawn) {
                if (static_cast<std::int64_t>(accepted.size()) == required) break;
                if (chosen_bits[static_cast<std::size_t>(k)]) continue;
                accepted.push_back(k);
                chosen_bits[static_cast<std::size_t>(k)] = 1;
            }
            if (pc_relaxed) *pc_relaxed = true;
            return accepted;
        }
        rho = std::min(1.0, 2.0 * rho);
    }
}

}  // namespace

std::vector<std::int64_t> select_add(const SamplingPattern& omega, std::int64_t K,
                                     std::int64_t M, double rho, std::span<const double> eps,
                                     const PositionalConstraint& pc, Rng& rng,
                                     bool* pc_relaxed) {
    const KSpaceGrid& grid = omega.grid();
    const std::int64_t required = add_count(omega.size(), K, M);
    if (required == 0) return {};
    std::vector<std::int64_t> pool;
    pool.reserve(static_cast<std::size_t>(grid.num_points() - omega.size()));
    for (std::int64_t k = 0; k < grid.num_points(); ++k) {
        if (!omega.contains(k)) pool.push_back(k);
    }
    return pick_biased(pool, eps, required, rho, pc, grid, rng, pc_relaxed);
}

std::vector<std::int64_t> select_remove(const SamplingPattern& omega, std::int64_t K,
                                        std::int64_t M, double rho, std::span<const double> rmap,
                                        const PositionalConstraint& pc, Rng& rng,
                                        bool* pc_relaxed) {
    const std::int64_t required = remove_count(omega.size(), K, M);
    if (required == 0) return {};
    std::vector<std::int64_t> pool;
    for (std::int64_t k : omega.members()) {
        if (!omega.is_locked(k)) pool.push_back(k);
    }
    if (static_cast<std::int64_t>(pool.size()) < required) {
        throw_spec_error("locked region leaves only " + std::to_string(pool.size()) +
                         " removable points, " + std::to_string(required) + " needed");
    }
    return pick_biased(pool, rmap, required, rho, pc, omega.grid(), rng, pc_relaxed);
}

}  // namespace bass
