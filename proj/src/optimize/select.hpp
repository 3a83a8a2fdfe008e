#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/pattern.hpp"
#include "core/rng.hpp"
#include "sampling/generators.hpp"

namespace bass {

// Required batch sizes keeping every move K points wide while |omega|
// approaches and then holds the target M.
std::int64_t add_count(std::int64_t omega_size, std::int64_t K, std::int64_t M);
std::int64_t remove_count(std::int64_t omega_size, std::int64_t K, std::int64_t M);

// Picks add_count() points outside omega: Bernoulli(rho) pre-selection,
// highest eps first (ties by ascending index), greedily skipping candidates
// that violate the positional constraint against points already accepted in
// this call. On shortfall rho doubles (capped at 1) and the draw restarts;
// if rho=1 still cannot satisfy the constraint, the constraint is dropped
// for the remainder of the call and *pc_relaxed is set.
std::vector<std::int64_t> select_add(const SamplingPattern& omega, std::int64_t K,
                                     std::int64_t M, double rho, std::span<const double> eps,
                                     const PositionalConstraint& pc, Rng& rng,
                                     bool* pc_relaxed = nullptr);

// Same procedure over the unlocked members of omega, highest r first.
// Errors if the unlocked membership cannot supply remove_count() points.
std::vector<std::int64_t> select_remove(const SamplingPattern& omega, std::int64_t K,
                                        std::int64_t M, double rho, std::span<const double> rmap,
                                        const PositionalConstraint& pc, Rng& rng,
                                        bool* pc_relaxed = nullptr);

}  // namespace bass
