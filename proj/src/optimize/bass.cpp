#include "optimize/bass.hpp"

#include <chrono>
#include <cmath>

#include "core/errors.hpp"

namespace bass {

double default_rho_a(std::int64_t K, std::int64_t M, std::int64_t N) {
    const double km = static_cast<double>(K) / static_cast<double>(M);
    const double fill = std::min(1.0, 2.0 * static_cast<double>(K) / static_cast<double>(N - M));
    return std::max(km, fill);
}

double default_rho_r(std::int64_t K, std::int64_t M, std::int64_t /*N*/) {
    return static_cast<double>(K) / static_cast<double>(M);
}

void validate_bass_config(const BassConfig& config, std::int64_t N,
                          std::int64_t omega_init_size, std::int64_t locked_count) {
    if (config.M < 1) throw_spec_error("target size M must be >= 1");
    if (config.M >= N) throw_spec_error("target size M must be < grid size N");
    if (config.K_init < 1) throw_spec_error("K_init must be >= 1");
    if (config.K_init >= std::min(config.M, N - config.M)) {
        throw_spec_error("K_init must be < min(M, N-M) = " +
                         std::to_string(std::min(config.M, N - config.M)));
    }
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw_spec_error("alpha must lie in (0, 1)");
    }
    if (config.L < 1) throw_spec_error("iteration budget L must be >= 1");
    if (!(config.delta > 0.0)) throw_spec_error("delta must be > 0");
    if (locked_count > config.M) {
        throw_spec_error("locked region (" + std::to_string(locked_count) +
                         " points) exceeds target size M=" + std::to_string(config.M));
    }
    const std::int64_t gap = std::abs(omega_init_size - config.M);
    const std::int64_t needed = (gap + config.K_init - 1) / config.K_init + 1;
    if (config.L < needed) {
        throw_spec_error("L=" + std::to_string(config.L) + " cannot reach size M from " +
                         std::to_string(omega_init_size) + " (need at least " +
                         std::to_string(needed) + " iterations at K_init=" +
                         std::to_string(config.K_init) + ")");
    }
}

namespace {

EfficacyResult evaluate(const SamplingPattern& omega, const BassConfig& config,
                        const Dataset& dataset, const Reconstructor& recon,
                        const CoilSensitivities* sens) {
    const CoilSensitivities* for_image =
        config.criterion == CriterionKind::image ? sens : nullptr;
    return efficacy_full(omega, dataset, recon, for_image, config.threads);
}

void consider_best(BassState& state, const SamplingPattern& omega, double value,
                   std::int64_t M) {
    if (omega.size() != M) return;
    if (!state.best.has_value() || value < state.best_value) {
        state.best = omega;
        state.best_value = value;
    }
}

}  // namespace

BassState bass_init(const SamplingPattern& omega_init, const BassConfig& config,
                    const Dataset& dataset, const Reconstructor& recon,
                    const CoilSensitivities* sens) {
    const std::int64_t N = dataset.grid().num_points();
    if (!omega_init.grid().same_points(dataset.grid())) {
        throw_data_error("initial pattern grid " + omega_init.grid().describe() +
                         " does not match dataset grid " + dataset.grid().describe());
    }
    validate_bass_config(config, N, omega_init.size(), omega_init.locked_count());
    if (config.criterion == CriterionKind::image && sens == nullptr) {
        throw_spec_error("image criterion needs coil sensitivities");
    }

    BassState state(omega_init, config.K_init, make_rng(config.seed));
    const EfficacyResult res = evaluate(omega_init, config, dataset, recon, sens);
    state.value = res.criterion_value(config.criterion);
    state.F = res.F;
    state.maps = importance_maps(res, dataset, config.delta);
    state.recon_calls = dataset.size();
    consider_best(state, omega_init, state.value, config.M);
    return state;
}

void bass_step(BassState& state, const BassConfig& config, const Dataset& dataset,
               const Reconstructor& recon, const CoilSensitivities* sens) {
    const std::int64_t N = state.omega.grid().num_points();
    const auto& rho_a_rule = config.rho_a ? config.rho_a : default_rho_a;
    const auto& rho_r_rule = config.rho_r ? config.rho_r : default_rho_r;
    const double rho_a = rho_a_rule(state.K, config.M, N);
    const double rho_r = rho_r_rule(state.K, config.M, N);

    bool relaxed = false;
    state.last_added = select_add(state.omega, state.K, config.M, rho_a, state.maps.eps,
                                  config.pc, state.rng, &relaxed);
    state.last_removed = select_remove(state.omega, state.K, config.M, rho_r, state.maps.rmap,
                                       config.pc, state.rng, &relaxed);
    state.pc_relaxed = state.pc_relaxed || relaxed;

    const SamplingPattern candidate = state.omega.with_changes(state.last_added,
                                                               state.last_removed);
    const EfficacyResult res = evaluate(candidate, config, dataset, recon, sens);
    const double value = res.criterion_value(config.criterion);
    state.recon_calls += dataset.size();
    ++state.iteration;

    const bool at_target = candidate.size() == config.M;
    const bool accept = !at_target || value <= state.value;
    if (accept) {
        state.omega = candidate;
        state.value = value;
        state.F = res.F;
        state.maps = importance_maps(res, dataset, config.delta);
        consider_best(state, candidate, value, config.M);
    } else {
        state.K = static_cast<std::int64_t>(
                      std::floor(static_cast<double>(state.K - 1) * config.alpha)) + 1;
    }

    TraceRow row;
    row.iter = state.iteration;
    row.size = candidate.size();
    row.K = state.K;
    row.F = value;
    row.accepted = accept;
    row.recon_calls_cum = state.recon_calls;
    row.wall_ms = 0.0;
    state.trace.push_back(row);
}

BassRunResult bass_run(const SamplingPattern& omega_init, const BassConfig& config,
                       const Dataset& dataset, const Reconstructor& recon,
                       const CoilSensitivities* sens) {
    const auto start = std::chrono::steady_clock::now();
    BassState state = bass_init(omega_init, config, dataset, recon, sens);
    for (int l = 0; l < config.L; ++l) bass_step(state, config, dataset, recon, sens);
    if (!state.best.has_value()) {
        throw_numeric_error("no size-M pattern reached within the iteration budget");
    }
    BassRunResult out{std::move(*state.best), std::move(state.trace), state.best_value,
                      state.recon_calls,
                      std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count(),
                      state.pc_relaxed};
    return out;
}

}  // namespace bass
