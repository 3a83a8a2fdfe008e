#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/ops.hpp"
#include "recon/encoding.hpp"

namespace bass {

enum class ReconMethod { zero_fill, cs_sfd, cs_lr, cs_dic };

ReconMethod parse_recon_method(const std::string& name);
std::string to_string(ReconMethod method);

// Multi-exponential dictionary for cs_dic: atoms exp(-t/T_j) evaluated at
// the frame time stamps and normalized to unit norm over frames.
struct DictionaryConfig {
    std::vector<double> decay_constants;
    std::vector<double> frame_times;
};

struct ReconConfig {
    ReconMethod method = ReconMethod::zero_fill;
    double lambda = 0.0;
    int max_iterations = 50;
    // Stop when the relative cost change between iterations drops below this.
    double tolerance = 1e-7;
    // Inner fast-gradient-projection iterations of the cs_sfd prox.
    int prox_iterations = 10;
    DictionaryConfig dictionary;
};

struct ReconResult {
    MultiCoilKSpace kspace;
    ImageVolume image;
    double final_cost = 0.0;
    int iterations = 0;
};

// Reconstruction oracle: sampled measurements at a pattern's points to a
// full-grid k-space estimate (plus the image it encodes). Stateless between
// calls except the atomic call counter, so distinct items may reconstruct
// concurrently with bit-identical results.
class Reconstructor {
public:
    virtual ~Reconstructor() = default;

    ReconResult reconstruct(const SamplingPattern& pattern, const SampledData& sampled) const {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return run(pattern, sampled);
    }

    std::int64_t recon_calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
    void reset_recon_calls() noexcept { calls_.store(0, std::memory_order_relaxed); }

    virtual const KSpaceGrid& grid() const noexcept = 0;

protected:
    virtual ReconResult run(const SamplingPattern& pattern, const SampledData& sampled) const = 0;

private:
    mutable std::atomic<std::int64_t> calls_{0};
};

// Builds the configured method over the given grid and sensitivities.
// Validates config invariants (lambda >= 0, iteration counts >= 1,
// dictionary shape) and dimension consistency up front.
std::unique_ptr<Reconstructor> make_reconstructor(const ReconConfig& config,
                                                  const KSpaceGrid& grid,
                                                  CoilSensitivities sens);

}  // namespace bass
