#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/pattern.hpp"
#include "objective/metrics.hpp"
#include "recon/reconstruct.hpp"

namespace bass {

enum class CriterionKind { kspace, image };

CriterionKind parse_criterion(const std::string& name);
std::string to_string(CriterionKind kind);

// Importance maps derived from one set of reconstruction residuals.
struct ImportanceMaps {
    std::vector<double> eps;
    std::vector<double> rmap;
    std::uint64_t dataset_fp = 0;
};

// Everything one pass of reconstructions over a dataset yields: the mean
// normalized k-space error F, the per-item values, the residual volumes
// e_i = m_i - R(pattern, S m_i) (kept so maps cost no extra recon calls),
// and optionally the image-domain criterion (mean of -SSIM against the
// coil-combined references).
struct EfficacyResult {
    double F = 0.0;
    std::vector<double> per_item_f;
    std::vector<MultiCoilKSpace> residuals;
    std::optional<double> image_criterion;
    // Filled only when sens was given to efficacy_full.
    std::vector<double> per_item_ssim;
    std::vector<double> per_item_image_f;

    // Value compared by optimizers under the chosen criterion.
    double criterion_value(CriterionKind kind) const;
};

// Reconstructs every item once (exactly N_i recon calls), in parallel over
// items with an index-ordered reduction. Reconstructor errors are rethrown
// with the item index attached. `sens` enables the image criterion; pass
// nullptr to skip it.
EfficacyResult efficacy_full(const SamplingPattern& pattern, const Dataset& dataset,
                             const Reconstructor& recon, const CoilSensitivities* sens,
                             int threads = 0);

// k-space-only convenience wrapper.
EfficacyResult efficacy(const SamplingPattern& pattern, const Dataset& dataset,
                        const Reconstructor& recon, int threads = 0);

// Mean over items of -SSIM(|coil_combine(m_i)|, |image estimate_i|).
double image_criterion(const SamplingPattern& pattern, const Dataset& dataset,
                       const Reconstructor& recon, const CoilSensitivities& sens,
                       int threads = 0);

ImportanceMaps importance_maps(const EfficacyResult& result, const Dataset& dataset,
                               double delta);

// Full quality report for one (pattern, dataset, reconstructor) triple.
struct EvalReport {
    double F = 0.0;
    std::vector<double> per_item_f;
    double nrmse_kspace = 0.0;     // sqrt of the summed normalized errors
    double nrmse_item_mean = 0.0;  // sqrt of the mean, for cross-size comparisons
    double nrmse_image = 0.0;
    double mean_ssim = 0.0;
    std::int64_t recon_calls = 0;
    double wall_ms = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
    std::string to_json() const;
};

EvalReport evaluate_report(const SamplingPattern& pattern, const Dataset& dataset,
                           const Reconstructor& recon, const CoilSensitivities& sens,
                           int threads = 0);

}  // namespace bass
