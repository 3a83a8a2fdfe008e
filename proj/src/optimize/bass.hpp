#pragma once

#include <functional>
#include <optional>

#include "objective/efficacy.hpp"
#include "optimize/select.hpp"
#include "optimize/trace.hpp"

namespace bass {

struct BassConfig {
    std::int64_t M = 0;
    int L = 0;
    std::int64_t K_init = 0;
    double alpha = 0.5;
    PositionalConstraint pc;
    double delta = 1e-12;
    std::uint64_t seed = 0;
    CriterionKind criterion = CriterionKind::kspace;
    int threads = 0;
    // Pre-selection probabilities as functions of (K, M, N). When null the
    // defaults apply: rho_r = K/M and rho_a = max(K/M, min(1, 2K/(N-M))),
    // which keeps rho_a above its K/(N-M) lower bound at low acceleration.
    // Both escalate on shortfall inside the selection call.
    std::function<double(std::int64_t, std::int64_t, std::int64_t)> rho_a;
    std::function<double(std::int64_t, std::int64_t, std::int64_t)> rho_r;
};

double default_rho_a(std::int64_t K, std::int64_t M, std::int64_t N);
double default_rho_r(std::int64_t K, std::int64_t M, std::int64_t N);

// Validates config invariants against the grid size N and the initial
// pattern; throws a spec error describing the first violation. Checks that
// the iteration budget L suffices to reach size M from |omega_init|.
void validate_bass_config(const BassConfig& config, std::int64_t N,
                          std::int64_t omega_init_size, std::int64_t locked_count);

struct BassState {
    SamplingPattern omega;
    std::int64_t K = 0;
    int iteration = 0;
    // Criterion value of omega under config.criterion.
    double value = 0.0;
    // K-space efficacy of omega (same as `value` under the k-space criterion).
    double F = 0.0;
    ImportanceMaps maps;
    std::int64_t recon_calls = 0;
    Rng rng;
    std::vector<TraceRow> trace;
    bool pc_relaxed = false;
    // Last move, kept for property tests.
    std::vector<std::int64_t> last_added;
    std::vector<std::int64_t> last_removed;
    // Best size-M pattern seen so far (value strictly below best_value
    // replaces it).
    std::optional<SamplingPattern> best;
    double best_value = 0.0;

    BassState(SamplingPattern initial, std::int64_t k, Rng r)
        : omega(std::move(initial)), K(k), rng(r) {}
};

// Evaluates omega_init (one F evaluation, no trace row) and prepares state.
BassState bass_init(const SamplingPattern& omega_init, const BassConfig& config,
                    const Dataset& dataset, const Reconstructor& recon,
                    const CoilSensitivities* sens = nullptr);

// One iteration: biased add/remove of K points, one F evaluation of the
// candidate, unconditional acceptance while the size differs from M,
// otherwise acceptance only when the criterion does not increase (K shrinks
// to floor((K-1)*alpha)+1 on rejection). Appends one trace row.
void bass_step(BassState& state, const BassConfig& config, const Dataset& dataset,
               const Reconstructor& recon, const CoilSensitivities* sens = nullptr);

struct BassRunResult {
    SamplingPattern pattern;
    std::vector<TraceRow> trace;
    double final_value = 0.0;
    std::int64_t recon_calls = 0;
    double wall_ms = 0.0;
    bool pc_relaxed = false;
};

// Runs L iterations and returns the best size-M pattern seen (the initial
// pattern counts when it already has size M).
BassRunResult bass_run(const SamplingPattern& omega_init, const BassConfig& config,
                       const Dataset& dataset, const Reconstructor& recon,
                       const CoilSensitivities* sens = nullptr);

}  // namespace bass
