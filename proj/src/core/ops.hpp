#pragma once

#include <cstdint>
#include <vector>

#include "core/pattern.hpp"
#include "core/volume.hpp"

namespace bass {

// Exact ratio N/M.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

// Undersampled measurements: the rows of one item at the pattern's member
// points, in ascending point order. values[c*M + j] pairs with points[j].
struct SampledData {
    std::vector<std::int64_t> points;
    std::vector<cplx> values;
    int num_coils = 0;

    std::int64_t num_points() const noexcept { return static_cast<std::int64_t>(points.size()); }
    cplx at(std::int64_t j, int coil) const noexcept {
        return values[static_cast<std::size_t>(coil) * points.size() + static_cast<std::size_t>(j)];
    }
};

// N/M, reduced.
Rational acceleration_factor(const SamplingPattern& pattern);

// Row selection at the pattern's points, canonical ascending order.
SampledData apply_sampling(const SamplingPattern& pattern, const MultiCoilKSpace& data);

// Adjoint placement: sampled rows at their indices, zeros elsewhere.
MultiCoilKSpace embed_sampled(const SamplingPattern& pattern, const SampledData& sampled);

// Divides by the max-modulus entry so the largest component has modulus 1.
MultiCoilKSpace normalize(const MultiCoilKSpace& data);

}  // namespace bass
