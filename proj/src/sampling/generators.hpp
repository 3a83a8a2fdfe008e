#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/pattern.hpp"
#include "core/rng.hpp"

namespace bass {

// Rule forbidding the simultaneous selection of nearby or conjugate-symmetric
// k-space points within one optimizer move. Adjacency is Chebyshev distance
// in the (kx, ky) plane of one frame; radius 1 is the 8-neighborhood.
struct PositionalConstraint {
    int radius = 1;
    bool exclude_conjugate = true;
};

enum class GeneratorKind { variable_density, poisson_disk, center_only, uniform_random };

struct GeneratorConfig {
    GeneratorKind kind = GeneratorKind::uniform_random;
    std::int64_t target_m = 0;
    // Variable density: inclusion weight (1 + d/sigma)^(-exponent), d the
    // distance to the k-space center within a frame.
    double vd_sigma = 8.0;
    double vd_exponent = 2.0;
    // Poisson disk: minimum distance between accepted unlocked points.
    double pd_radius = 2.0;
    // Central calibration block half-widths; the block spans
    // [cx-hx, cx+hx) x [cy-hy, cy+hy) in frame 0 and is locked.
    int cal_half_x = 2;
    int cal_half_y = 2;
    std::uint64_t seed = 0;
};

// Index of the complex-conjugate position (-kx, -ky, same t), negation taken
// about the DC bin.
std::int64_t conjugate_index(std::int64_t k, const KSpaceGrid& grid);

// True iff candidate is within pc.radius (Chebyshev, same frame) of a chosen
// point, or sits at the conjugate position of one. `chosen_bits` is a size-N
// membership bitmap.
bool violates_constraint(std::int64_t candidate, const std::vector<std::uint8_t>& chosen_bits,
                         const PositionalConstraint& pc, const KSpaceGrid& grid);

// Convenience overload for explicit point lists.
bool violates_constraint(std::int64_t candidate, std::span<const std::int64_t> chosen,
                         const PositionalConstraint& pc, const KSpaceGrid& grid);

// The calibration block indices for the given half-widths (frame 0).
std::vector<std::int64_t> calibration_region(const KSpaceGrid& grid, int half_x, int half_y);

// Produces exactly target_m members with the calibration block locked.
// Deterministic for a given (config, grid).
SamplingPattern generate(const GeneratorConfig& config, const KSpaceGrid& grid);

}  // namespace bass
