#include "objective/efficacy.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/ops.hpp"
#include "core/parallel.hpp"

namespace bass {

CriterionKind parse_criterion(const std::string& name) {
    if (name == "kspace" || name == "k-space") return CriterionKind::kspace;
    if (name == "image") return CriterionKind::image;
    throw_spec_error("unknown criterion '" + name + "' (expected kspace or image)");
}

std::string to_string(CriterionKind kind) {
    return kind == CriterionKind::kspace ? "kspace" : "image";
}

double EfficacyResult::criterion_value(CriterionKind kind) const {
    if (kind == CriterionKind::kspace) return F;
    if (!image_criterion.has_value()) {
        throw_spec_error("image criterion requested but not evaluated");
    }
    return *image_criterion;
}

EfficacyResult efficacy_full(const SamplingPattern& pattern, const Dataset& dataset,
                             const Reconstructor& recon, const CoilSensitivities* sens,
                             int threads) {
    const int n = dataset.size();
    std::vector<std::optional<MultiCoilKSpace>> residual_slots(static_cast<std::size_t>(n));
    std::vector<double> per_item_f(static_cast<std::size_t>(n), 0.0);
    std::vector<double> per_item_ssim(static_cast<std::size_t>(n), 0.0);
    std::vector<double> per_item_image_f(static_cast<std::size_t>(n), 0.0);

    parallel_for_items(n, threads, [&](int i) {
        try {
            const MultiCoilKSpace& item = dataset.item(i);
            const SampledData sampled = apply_sampling(pattern, item);
            ReconResult rec = recon.reconstruct(pattern, sampled);
            std::vector<cplx> diff(item.values().begin(), item.values().end());
            const auto est = rec.kspace.values();
            for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= est[j];
            MultiCoilKSpace residual(item.grid(), std::move(diff));
            per_item_f[static_cast<std::size_t>(i)] =
                residual.squared_norm() / item.squared_norm();
            if (sens != nullptr) {
                const ImageVolume reference = coil_combine(item, *sens);
                per_item_ssim[static_cast<std::size_t>(i)] = ssim(reference, rec.image);
                const double ref_norm = reference.squared_norm();
                if (ref_norm == 0.0) throw_data_error("coil-combined reference is all zero");
                double d = 0.0;
                const auto vr = reference.values();
                const auto vi = rec.image.values();
                for (std::size_t j = 0; j < vr.size(); ++j) d += std::norm(vr[j] - vi[j]);
                per_item_image_f[static_cast<std::size_t>(i)] = d / ref_norm;
            }
            residual_slots[static_cast<std::size_t>(i)] = std::move(residual);
        } catch (const Error& e) {
            throw Error(e.kind(), "item " + std::to_string(i) + ": " + e.what());
        }
    });

    EfficacyResult out;
    out.per_item_f = std::move(per_item_f);
    out.residuals.reserve(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        total += out.per_item_f[static_cast<std::size_t>(i)];
        out.residuals.push_back(std::move(*residual_slots[static_cast<std::size_t>(i)]));
    }
    out.F = total / n;
    if (sens != nullptr) {
        double acc = 0.0;
        for (double s : per_item_ssim) acc += -s;
        out.image_criterion = acc / n;
        out.per_item_ssim = std::move(per_item_ssim);
        out.per_item_image_f = std::move(per_item_image_f);
    }
    return out;
}

EfficacyResult efficacy(const SamplingPattern& pattern, const Dataset& dataset,
                        const Reconstructor& recon, int threads) {
    return efficacy_full(pattern, dataset, recon, nullptr, threads);
}

double image_criterion(const SamplingPattern& pattern, const Dataset& dataset,
                       const Reconstructor& recon, const CoilSensitivities& sens, int threads) {
    return *efficacy_full(pattern, dataset, recon, &sens, threads).image_criterion;
}

ImportanceMaps importance_maps(const EfficacyResult& result, const Dataset& dataset,
                               double delta) {
    ImportanceMaps maps;
    maps.eps = epsilon_map(result.residuals, dataset);
    maps.rmap = r_map(result.residuals, dataset, delta);
    maps.dataset_fp = dataset_fingerprint(dataset);
    return maps;
}

std::string EvalReport::csv_header() {
    return "F,nrmse_kspace,nrmse_item_mean,nrmse_image,mean_ssim,recon_calls,wall_ms";
}

std::string EvalReport::csv_row() const {
    std::ostringstream os;
    os.precision(12);
    os << F << ',' << nrmse_kspace << ',' << nrmse_item_mean << ',' << nrmse_image << ','
       << mean_ssim << ',' << recon_calls << ',' << wall_ms;
    return os.str();
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["F"] = F;
    j["per_item_f"] = per_item_f;
    j["nrmse_kspace"] = nrmse_kspace;
    j["nrmse_item_mean"] = nrmse_item_mean;
    j["nrmse_image"] = nrmse_image;
    j["mean_ssim"] = mean_ssim;
    j["recon_calls"] = recon_calls;
    j["wall_ms"] = wall_ms;
    return j.dump(2);
}

EvalReport evaluate_report(const SamplingPattern& pattern, const Dataset& dataset,
                           const Reconstructor& recon, const CoilSensitivities& sens,
                           int threads) {
    const auto start = std::chrono::steady_clock::now();
    const std::int64_t calls_before = recon.recon_calls();
    const EfficacyResult res = efficacy_full(pattern, dataset, recon, &sens, threads);
    EvalReport report;
    report.F = res.F;
    report.per_item_f = res.per_item_f;
    double sum = 0.0;
    for (double f : res.per_item_f) sum += f;
    report.nrmse_kspace = std::sqrt(sum);
    report.nrmse_item_mean = std::sqrt(sum / dataset.size());
    double image_sum = 0.0;
    for (double f : res.per_item_image_f) image_sum += f;
    report.nrmse_image = std::sqrt(image_sum);
    double ssim_sum = 0.0;
    for (double s : res.per_item_ssim) ssim_sum += s;
    report.mean_ssim = ssim_sum / dataset.size();
    report.recon_calls = recon.recon_calls() - calls_before;
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

}  // namespace bass
