#pragma once

#include <cstdint>

#include "objective/efficacy.hpp"
#include "optimize/trace.hpp"

namespace bass {

// Result shape shared by the baseline optimizers. final_F is NaN when the
// run returned without evaluating anything (already at target size with a
// zero budget of work to do).
struct OptimizerRunResult {
    SamplingPattern pattern;
    std::vector<TraceRow> trace;
    double final_F = 0.0;
    std::int64_t recon_calls = 0;
    double wall_ms = 0.0;
};

struct GreedyConfig {
    std::int64_t M = 0;
    // Lazy variant: stale marginal improvements are kept in a priority queue
    // and re-evaluated top-first until the best fresh improvement beats the
    // next stale bound. The non-lazy variant re-evaluates every candidate
    // each step.
    bool lazy = true;
    // Stop before any evaluation that would exceed this many recon calls
    // (0 = unlimited); the pattern grown so far is returned.
    std::int64_t max_recon_calls = 0;
    int threads = 0;
};

// Forward greedy: repeatedly adds the candidate point whose inclusion gives
// the lowest F until |omega| == M. One trace row per added point, with K
// holding the number of candidate evaluations that step.
OptimizerRunResult greedy_forward(const SamplingPattern& omega_init, const GreedyConfig& config,
                                  const Dataset& dataset, const Reconstructor& recon);

struct PossConfig {
    std::int64_t M = 0;
    int L = 0;
    std::uint64_t seed = 0;
    std::int64_t max_recon_calls = 0;
    int threads = 0;
};

// Single-objective POSS-style baseline: each iteration flips every point's
// membership independently with probability 1/N, repairs the size back to M
// by uniform-random adds/removes of unlocked points, and accepts the
// candidate iff F does not increase. K in the trace is the candidate's
// symmetric-difference size.
OptimizerRunResult poss_run(const SamplingPattern& omega_init, const PossConfig& config,
                            const Dataset& dataset, const Reconstructor& recon);

}  // namespace bass
