#include "optimize/baselines.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace bass {

namespace {

double wall_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// Max-heap entry: (improvement bound, candidate, stamp of the step that
// computed it). Larger improvement wins; ties go to the lower index.
struct LazyEntry {
    double gain;
    std::int64_t k;
    int stamp;
    bool operator<(const LazyEntry& other) const {
        if (gain != other.gain) return gain < other.gain;
        return k > other.k;
    }
};

}  // namespace

OptimizerRunResult greedy_forward(const SamplingPattern& omega_init, const GreedyConfig& config,
                                  const Dataset& dataset, const Reconstructor& recon) {
    const auto start = std::chrono::steady_clock::now();
    if (!omega_init.grid().same_points(dataset.grid())) {
        throw_data_error("initial pattern grid does not match dataset grid");
    }
    const std::int64_t n = dataset.grid().num_points();
    if (config.M > n) throw_spec_error("target size M exceeds grid size");
    if (config.M < omega_init.size()) {
        throw_spec_error("greedy target M=" + std::to_string(config.M) +
                         " is below the initial size " + std::to_string(omega_init.size()));
    }
    OptimizerRunResult out{omega_init, {}, std::numeric_limits<double>::quiet_NaN(), 0, 0.0};
    if (config.M == omega_init.size()) {
        out.wall_ms = wall_since(start);
        return out;
    }

    const std::int64_t per_eval = dataset.size();
    auto budget_allows = [&]() {
        return config.max_recon_calls <= 0 ||
               out.recon_calls + per_eval <= config.max_recon_calls;
    };
    auto eval_with = [&](std::int64_t k) {
        const SamplingPattern cand = out.pattern.with_changes(std::array{k}, {});
        const double f = efficacy(cand, dataset, recon, config.threads).F;
        out.recon_calls += per_eval;
        return f;
    };

    if (!config.lazy) {
        int iter = 0;
        while (out.pattern.size() < config.M) {
            std::int64_t best_k = -1;
            double best_f = std::numeric_limits<double>::infinity();
            std::int64_t evals = 0;
            for (std::int64_t k = 0; k < n; ++k) {
                if (out.pattern.contains(k)) continue;
                if (!budget_allows()) {
                    out.wall_ms = wall_since(start);
                    return out;
                }
                const double f = eval_with(k);
                ++evals;
                if (f < best_f) {
                    best_f = f;
                    best_k = k;
                }
            }
            out.pattern = out.pattern.with_changes(std::array{best_k}, {});
            out.final_F = best_f;
            out.trace.push_back(TraceRow{++iter, out.pattern.size(), evals, best_f, true,
                                         out.recon_calls, 0.0});
        }
        out.wall_ms = wall_since(start);
        return out;
    }

    // Lazy variant: improvements relative to the current F, stale values as
    // optimistic bounds.
    if (!budget_allows()) {
        out.wall_ms = wall_since(start);
        return out;
    }
    double current_f = efficacy(out.pattern, dataset, recon, config.threads).F;
    out.recon_calls += per_eval;
    std::priority_queue<LazyEntry> heap;
    for (std::int64_t k = 0; k < n; ++k) {
        if (!out.pattern.contains(k)) {
            heap.push(LazyEntry{std::numeric_limits<double>::infinity(), k, 0});
        }
    }
    int iter = 0;
    while (out.pattern.size() < config.M) {
        const int stamp = iter + 1;
        std::int64_t evals = 0;
        std::int64_t best_k = -1;
        double best_f = 0.0;
        while (!heap.empty()) {
            LazyEntry top = heap.top();
            heap.pop();
            if (out.pattern.contains(top.k)) continue;
            if (top.stamp == stamp) {
                best_k = top.k;
                best_f = current_f - top.gain;
                break;
            }
            if (!budget_allows()) {
                out.wall_ms = wall_since(start);
                return out;
            }
            const double f = eval_with(top.k);
            ++evals;
            heap.push(LazyEntry{current_f - f, top.k, stamp});
        }
        if (best_k < 0) throw_numeric_error("greedy ran out of candidates");
        out.pattern = out.pattern.with_changes(std::array{best_k}, {});
        current_f = best_f;
        out.final_F = best_f;
        out.trace.push_back(TraceRow{++iter, out.pattern.size(), evals, best_f, true,
                                     out.recon_calls, 0.0});
    }
    out.wall_ms = wall_since(start);
    return out;
}

OptimizerRunResult poss_run(const SamplingPattern& omega_init, const PossConfig& config,
                            const Dataset& dataset, const Reconstructor& recon) {
    const auto start = std::chrono::steady_clock::now();
    if (!omega_init.grid().same_points(dataset.grid())) {
        throw_data_error("initial pattern grid does not match dataset grid");
    }
    const KSpaceGrid& grid = omega_init.grid();
    const std::int64_t n = grid.num_points();
    if (config.M < omega_init.locked_count()) {
        throw_spec_error("target size M is below the locked point count");
    }
    if (config.M < 1 || config.M > n) throw_spec_error("target size M out of range");
    if (config.L < 0) throw_spec_error("iteration count must be >= 0");

    Rng rng = make_rng(config.seed);
    const double flip_p = 1.0 / static_cast<double>(n);

    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
    for (std::int64_t k : omega_init.members()) bits[static_cast<std::size_t>(k)] = 1;

    auto repair = [&](std::vector<std::uint8_t>& b) {
        std::int64_t size = 0;
        for (std::uint8_t v : b) size += v;
        while (size > config.M) {
            std::vector<std::int64_t> removable;
            for (std::int64_t k = 0; k < n; ++k) {
                if (b[static_cast<std::size_t>(k)] && !omega_init.is_locked(k)) {
                    removable.push_back(k);
                }
            }
            const auto pick = removable[uniform_index(rng, removable.size())];
            b[static_cast<std::size_t>(pick)] = 0;
            --size;
        }
        while (size < config.M) {
            std::vector<std::int64_t> addable;
            for (std::int64_t k = 0; k < n; ++k) {
                if (!b[static_cast<std::size_t>(k)]) addable.push_back(k);
            }
            const auto pick = addable[uniform_index(rng, addable.size())];
            b[static_cast<std::size_t>(pick)] = 1;
            ++size;
        }
    };
    auto to_pattern = [&](const std::vector<std::uint8_t>& b) {
        std::vector<std::int64_t> members;
        members.reserve(static_cast<std::size_t>(config.M));
        for (std::int64_t k = 0; k < n; ++k) {
            if (b[static_cast<std::size_t>(k)]) members.push_back(k);
        }
        return SamplingPattern(grid, std::move(members),
                               {omega_init.locked().begin(), omega_init.locked().end()});
    };

    repair(bits);
    OptimizerRunResult out{to_pattern(bits), {}, 0.0, 0, 0.0};
    const std::int64_t per_eval = dataset.size();
    auto budget_allows = [&]() {
        return config.max_recon_calls <= 0 ||
               out.recon_calls + per_eval <= config.max_recon_calls;
    };
    if (!budget_allows()) {
        out.final_F = std::numeric_limits<double>::quiet_NaN();
        out.wall_ms = wall_since(start);
        return out;
    }
    double current_f = efficacy(out.pattern, dataset, recon, config.threads).F;
    out.recon_calls += per_eval;
    out.final_F = current_f;

    for (int l = 1; l <= config.L; ++l) {
        if (!budget_allows()) break;
        std::vector<std::uint8_t> cand = bits;
        for (std::int64_t k = 0; k < n; ++k) {
            if (uniform01(rng) < flip_p) {
                if (cand[static_cast<std::size_t>(k)]) {
                    if (!omega_init.is_locked(k)) cand[static_cast<std::size_t>(k)] = 0;
                } else {
                    cand[static_cast<std::size_t>(k)] = 1;
                }
            }
        }
        repair(cand);
        std::int64_t diff = 0;
        for (std::int64_t k = 0; k < n; ++k) {
            diff += cand[static_cast<std::size_t>(k)] != bits[static_cast<std::size_t>(k)];
        }
        const SamplingPattern cand_pattern = to_pattern(cand);
        const double f = efficacy(cand_pattern, dataset, recon, config.threads).F;
        out.recon_calls += per_eval;
        const bool accept = f <= current_f;
        if (accept) {
            bits = std::move(cand);
            current_f = f;
            out.pattern = cand_pattern;
            out.final_F = f;
        }
        out.trace.push_back(TraceRow{l, cand_pattern.size(), diff, f, accept,
                                     out.recon_calls, 0.0});
    }
    out.wall_ms = wall_since(start);
    return out;
}

}  // namespace bass
