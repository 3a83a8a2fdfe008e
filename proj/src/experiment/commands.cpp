#include "experiment/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/errors.hpp"
#include "data/io.hpp"
#include "objective/metrics.hpp"
#include "optimize/bass.hpp"
#include "optimize/baselines.hpp"

namespace bass {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string path_join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string ensure_out_dir(const ExperimentSpec& spec) {
    if (spec.output_dir.empty()) {
        throw_spec_error("output directory not set; add output_dir to the spec or pass --out");
    }
    std::error_code ec;
    fs::create_directories(spec.output_dir, ec);
    if (ec) {
        throw_data_error("cannot create output directory " + spec.output_dir + ": " +
                         ec.message());
    }
    return spec.output_dir;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw_data_error("failed while writing " + path);
}

// manifest.json keeps one entry per command so different commands can share
// an output directory without clobbering each other's records.
void update_manifest(const std::string& dir, const std::string& command, json entry) {
    const std::string path = path_join(dir, "manifest.json");
    json root = json::object();
    std::ifstream in(path, std::ios::binary);
    if (in) {
        try {
            in >> root;
        } catch (const json::exception&) {
            root = json::object();
        }
        if (!root.is_object()) root = json::object();
    }
    root[command] = std::move(entry);
    write_text(path, root.dump(2) + "\n");
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Dataset load_dataset(const ExperimentSpec& spec) {
    if (spec.dataset_path.empty()) {
        throw_spec_error("spec field 'dataset': required for this command");
    }
    return read_dataset(spec.dataset_path);
}

std::string default_sens_path(const std::string& dataset_path) {
    fs::path p(dataset_path);
    return (p.parent_path() / (p.stem().string() + "_sens.kspd")).string();
}

// Explicit sensitivities file, then the dataset's _sens sidecar, then the
// uniform 1/sqrt(nc) fallback.
CoilSensitivities load_sens(const ExperimentSpec& spec, const KSpaceGrid& grid) {
    std::string path = spec.sensitivities_path;
    if (path.empty()) {
        const std::string side = default_sens_path(spec.dataset_path);
        std::error_code ec;
        if (fs::exists(side, ec)) path = side;
    }
    if (path.empty()) return CoilSensitivities::uniform(grid.nx(), grid.ny(), grid.nc());
    Dataset d = read_dataset(path);
    const KSpaceGrid& g = d.grid();
    if (d.size() != 1 || g.nt() != 1 || g.nx() != grid.nx() || g.ny() != grid.ny() ||
        g.nc() != grid.nc()) {
        throw_data_error("sensitivity file " + path + " has shape " + g.describe() + " with " +
                         std::to_string(d.size()) + " items; expected " +
                         std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()) + "x1x" +
                         std::to_string(grid.nc()) + " with 1 item");
    }
    std::span<const cplx> v = d.item(0).values();
    return CoilSensitivities(grid.nx(), grid.ny(), grid.nc(), std::vector<cplx>(v.begin(), v.end()));
}

struct SplitData {
    Dataset train;
    std::optional<Dataset> validation;
};

SplitData split_dataset(const ExperimentSpec& spec, const Dataset& full) {
    if (!spec.has_split) return {full, std::nullopt};
    const int tr = spec.split.train;
    const int va = spec.split.validation;
    if (tr < 1) throw_spec_error("spec field 'split.train': must be >= 1");
    if (tr + va > full.size()) {
        throw_data_error("split needs " + std::to_string(tr + va) + " items but the dataset has " +
                         std::to_string(full.size()));
    }
    SplitData out{full.slice(0, tr), std::nullopt};
    if (va > 0) out.validation = full.slice(tr, va);
    return out;
}

SamplingPattern initial_pattern(const ExperimentSpec& spec, const KSpaceGrid& grid) {
    if (!spec.has_generator) {
        throw_spec_error("spec field 'generator': required for this command");
    }
    GeneratorConfig gen = spec.generator;
    if (!spec.generator_seed_set) gen.seed = spec.seed;
    return generate(gen, grid);
}

BassConfig bass_config_from(const OptimizerSpec& o, const ExperimentSpec& spec,
                            std::int64_t target, int iterations) {
    BassConfig c;
    c.M = target;
    c.L = iterations;
    c.K_init = o.k_init;
    c.alpha = o.alpha;
    c.pc = o.pc;
    c.delta = o.delta;
    c.seed = spec.seed;
    c.criterion = spec.criterion;
    c.threads = spec.threads;
    if (o.rho_a) {
        const double v = *o.rho_a;
        c.rho_a = [v](std::int64_t, std::int64_t, std::int64_t) { return v; };
    }
    if (o.rho_r) {
        const double v = *o.rho_r;
        c.rho_r = [v](std::int64_t, std::int64_t, std::int64_t) { return v; };
    }
    return c;
}

}  // namespace

void cmd_phantom(const ExperimentSpec& spec, const RunOptions& opt) {
    if (!spec.has_phantom) {
        throw_spec_error("spec field 'phantom': required for the phantom command");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::string dir = ensure_out_dir(spec);

    PhantomConfig config = spec.phantom;
    config.seed = spec.seed;
    PhantomOutput out = generate_phantom_dataset(config);
    const KSpaceGrid& grid = out.dataset.grid();

    const std::string data_path = path_join(dir, spec.phantom_name + ".kspd");
    const std::string truth_path = path_join(dir, spec.phantom_name + "_truth.kspd");
    const std::string sens_path = path_join(dir, spec.phantom_name + "_sens.kspd");

    DatasetFileInfo info;
    info.normalized = true;
    json echo = json::parse(resolved_spec_json(spec)).at("phantom");
    echo["seed"] = spec.seed;
    info.generator_json = echo.dump();
    write_dataset(data_path, out.dataset, info);

    DatasetFileInfo aux;
    aux.normalized = false;

    const KSpaceGrid truth_grid(grid.nx(), grid.ny(), grid.nt(), 1);
    std::vector<MultiCoilKSpace> truth_items;
    truth_items.reserve(out.ground_truth.size());
    for (const ImageVolume& v : out.ground_truth) {
        truth_items.emplace_back(truth_grid,
                                 std::vector<cplx>(v.values().begin(), v.values().end()));
    }
    write_dataset(truth_path, Dataset(std::move(truth_items)), aux);

    const KSpaceGrid sens_grid(grid.nx(), grid.ny(), 1, grid.nc());
    std::vector<cplx> sens_values;
    sens_values.reserve(static_cast<std::size_t>(out.sens.num_pixels()) * grid.nc());
    for (int c = 0; c < grid.nc(); ++c) {
        std::span<const cplx> plane = out.sens.coil(c);
        sens_values.insert(sens_values.end(), plane.begin(), plane.end());
    }
    std::vector<MultiCoilKSpace> sens_items;
    sens_items.emplace_back(sens_grid, std::move(sens_values));
    write_dataset(sens_path, Dataset(std::move(sens_items)), aux);

    write_text(path_join(dir, "resolved_spec.json"), resolved_spec_json(spec));

    const std::uint64_t hash = dataset_fingerprint(out.dataset);
    json entry;
    entry["grid"] = grid.describe();
    entry["items"] = out.dataset.size();
    entry["dataset_hash"] = hex64(hash);
    entry["outputs"] = {data_path, truth_path, sens_path};
    entry["wall_ms"] = elapsed_ms(t0);
    update_manifest(dir, "phantom", entry);

    if (!opt.quiet) {
        std::cout << "phantom: wrote " << data_path << " (" << grid.describe() << ", "
                  << out.dataset.size() << " items, hash " << hex64(hash) << ")\n";
    }
}

void cmd_learn(const ExperimentSpec& spec, const RunOptions& opt) {
    if (!spec.has_optimizer) {
        throw_spec_error("spec field 'optimizer': required for the learn command");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::string dir = ensure_out_dir(spec);

    const Dataset full = load_dataset(spec);
    const KSpaceGrid& grid = full.grid();
    const CoilSensitivities sens = load_sens(spec, grid);
    const SplitData split = split_dataset(spec, full);
    const Dataset& train = split.train;

    const SamplingPattern initial = initial_pattern(spec, grid);
    const bool image = spec.criterion == CriterionKind::image;
    const CoilSensitivities* criterion_sens = image ? &sens : nullptr;
    std::int64_t recon_calls_total = 0;

    const bool tune = spec.lambda_grid.enabled && spec.recon.method != ReconMethod::zero_fill;
    struct GridRow {
        std::string stage;
        double lambda;
        double F;
        double value;
    };
    std::vector<GridRow> grid_rows;

    auto run_grid = [&](const SamplingPattern& pattern, const std::string& stage) {
        double best_lambda = spec.recon.lambda;
        double best_value = std::numeric_limits<double>::infinity();
        for (double lam : spec.lambda_grid.values()) {
            ReconConfig rc = spec.recon;
            rc.lambda = lam;
            auto recon = make_reconstructor(rc, grid, sens);
            const EfficacyResult res =
                efficacy_full(pattern, train, *recon, criterion_sens, spec.threads);
            recon_calls_total += recon->recon_calls();
            const double value = res.criterion_value(spec.criterion);
            grid_rows.push_back({stage, lam, res.F, value});
            if (value < best_value) {
                best_value = value;
                best_lambda = lam;
            }
        }
        return best_lambda;
    };

    ReconConfig run_config = spec.recon;
    if (tune) run_config.lambda = run_grid(initial, "initial");
    auto recon = make_reconstructor(run_config, grid, sens);

    const OptimizerSpec& o = spec.optimizer;
    const std::int64_t target = o.target > 0 ? o.target : spec.generator.target_m;
    std::optional<SamplingPattern> learned;
    std::vector<TraceRow> trace;
    double final_value = std::numeric_limits<double>::quiet_NaN();
    bool pc_relaxed = false;

    switch (o.kind) {
        case OptimizerKind::bass: {
            BassRunResult r = bass_run(initial, bass_config_from(o, spec, target, o.iterations),
                                       train, *recon, criterion_sens);
            learned = std::move(r.pattern);
            trace = std::move(r.trace);
            final_value = r.final_value;
            pc_relaxed = r.pc_relaxed;
            break;
        }
        case OptimizerKind::greedy: {
            if (image) {
                throw_spec_error("the greedy optimizer supports the kspace criterion only");
            }
            GreedyConfig gc;
            gc.M = target;
            gc.lazy = o.lazy;
            gc.max_recon_calls = o.budget;
            gc.threads = spec.threads;
            OptimizerRunResult r = greedy_forward(initial, gc, train, *recon);
            learned = std::move(r.pattern);
            trace = std::move(r.trace);
            final_value = r.final_F;
            break;
        }
        case OptimizerKind::poss: {
            if (image) {
                throw_spec_error("the poss optimizer supports the kspace criterion only");
            }
            PossConfig pc;
            pc.M = target;
            pc.L = o.iterations;
            pc.seed = spec.seed;
            pc.max_recon_calls = o.budget;
            pc.threads = spec.threads;
            OptimizerRunResult r = poss_run(initial, pc, train, *recon);
            learned = std::move(r.pattern);
            trace = std::move(r.trace);
            final_value = r.final_F;
            break;
        }
    }
    recon_calls_total += recon->recon_calls();

    double final_lambda = run_config.lambda;
    if (tune) final_lambda = run_grid(*learned, "learned");
    ReconConfig final_config = spec.recon;
    final_config.lambda = final_lambda;
    auto final_recon = make_reconstructor(final_config, grid, sens);

    const std::string mask_path = path_join(dir, "final_mask.mask");
    const std::string trace_path = path_join(dir, "trace.csv");
    write_mask(mask_path, *learned);
    write_trace_csv(trace_path, trace);
    json outputs = {mask_path, trace_path};

    if (tune) {
        std::string csv = "stage,lambda,F,criterion_value\n";
        for (const GridRow& r : grid_rows) {
            csv += r.stage + "," + format_g(r.lambda) + "," + format_g(r.F) + "," +
                   format_g(r.value) + "\n";
        }
        const std::string grid_path = path_join(dir, "lambda_grid.csv");
        write_text(grid_path, csv);
        outputs.push_back(grid_path);
    }

    const EvalReport train_report = evaluate_report(*learned, train, *final_recon, sens,
                                                    spec.threads);
    write_text(path_join(dir, "eval_train.csv"),
               EvalReport::csv_header() + "\n" + train_report.csv_row() + "\n");
    write_text(path_join(dir, "eval_train.json"), train_report.to_json() + "\n");
    outputs.push_back(path_join(dir, "eval_train.csv"));
    outputs.push_back(path_join(dir, "eval_train.json"));

    std::optional<EvalReport> val_report;
    if (split.validation) {
        val_report = evaluate_report(*learned, *split.validation, *final_recon, sens,
                                     spec.threads);
        write_text(path_join(dir, "eval_validation.csv"),
                   EvalReport::csv_header() + "\n" + val_report->csv_row() + "\n");
        write_text(path_join(dir, "eval_validation.json"), val_report->to_json() + "\n");
        outputs.push_back(path_join(dir, "eval_validation.csv"));
        outputs.push_back(path_join(dir, "eval_validation.json"));
    }

    const EfficacyResult final_res =
        efficacy_full(*learned, train, *final_recon, nullptr, spec.threads);
    const double map_delta = o.kind == OptimizerKind::bass ? o.delta : 1e-12;
    const ImportanceMaps maps = importance_maps(final_res, train, map_delta);
    write_map_csv(path_join(dir, "eps_map.csv"), maps.eps);
    write_map_csv(path_join(dir, "r_map.csv"), maps.rmap);
    outputs.push_back(path_join(dir, "eps_map.csv"));
    outputs.push_back(path_join(dir, "r_map.csv"));
    recon_calls_total += final_recon->recon_calls();

    write_text(path_join(dir, "resolved_spec.json"), resolved_spec_json(spec));

    json entry;
    entry["optimizer"] = to_string(o.kind);
    entry["criterion"] = to_string(spec.criterion);
    entry["grid"] = grid.describe();
    entry["train_items"] = train.size();
    entry["validation_items"] = split.validation ? split.validation->size() : 0;
    entry["initial_size"] = initial.size();
    entry["target"] = target;
    entry["learned_size"] = learned->size();
    entry["lambda_initial"] = run_config.lambda;
    entry["lambda_final"] = final_lambda;
    entry["final_value"] = final_value;
    entry["train_F"] = train_report.F;
    entry["train_nrmse_kspace"] = train_report.nrmse_kspace;
    if (val_report) {
        entry["validation_F"] = val_report->F;
        entry["validation_nrmse_kspace"] = val_report->nrmse_kspace;
        entry["validation_mean_ssim"] = val_report->mean_ssim;
    }
    entry["trace_rows"] = trace.size();
    entry["pc_relaxed"] = pc_relaxed;
    entry["recon_calls"] = recon_calls_total;
    entry["outputs"] = outputs;
    entry["wall_ms"] = elapsed_ms(t0);
    update_manifest(dir, "learn", entry);

    if (!opt.quiet) {
        std::cout << "learn: " << to_string(o.kind) << " |omega|=" << learned->size() << "/"
                  << grid.num_points() << " train F=" << train_report.F;
        if (val_report) std::cout << " validation nrmse=" << val_report->nrmse_kspace;
        std::cout << " (" << recon_calls_total << " recon calls) -> " << dir << "\n";
    }
}

void cmd_evaluate(const ExperimentSpec& spec, const RunOptions& opt) {
    if (spec.mask_path.empty()) {
        throw_spec_error("spec field 'mask': required for the evaluate command");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::string dir = ensure_out_dir(spec);

    const Dataset full = load_dataset(spec);
    const KSpaceGrid& grid = full.grid();
    const CoilSensitivities sens = load_sens(spec, grid);

    std::optional<Dataset> eval_set;
    if (spec.has_split) {
        if (spec.split.validation < 1) {
            throw_spec_error(
                "spec field 'split.validation': the evaluate command needs a non-empty "
                "validation split");
        }
        const SplitData split = split_dataset(spec, full);
        eval_set = *split.validation;
    } else {
        eval_set = full;
    }

    const SamplingPattern mask = read_mask(spec.mask_path, grid.nc());
    if (!mask.grid().same_points(grid)) {
        throw_data_error("mask grid " + mask.grid().describe() + " does not match dataset grid " +
                         grid.describe());
    }

    auto recon = make_reconstructor(spec.recon, grid, sens);
    const EvalReport report = evaluate_report(mask, *eval_set, *recon, sens, spec.threads);

    write_text(path_join(dir, "eval_report.csv"),
               EvalReport::csv_header() + "\n" + report.csv_row() + "\n");
    write_text(path_join(dir, "eval_report.json"), report.to_json() + "\n");
    write_text(path_join(dir, "resolved_spec.json"), resolved_spec_json(spec));

    json entry;
    entry["grid"] = grid.describe();
    entry["items"] = eval_set->size();
    entry["mask_size"] = mask.size();
    entry["F"] = report.F;
    entry["nrmse_kspace"] = report.nrmse_kspace;
    entry["nrmse_image"] = report.nrmse_image;
    entry["mean_ssim"] = report.mean_ssim;
    entry["recon_calls"] = report.recon_calls;
    entry["outputs"] = {path_join(dir, "eval_report.csv"), path_join(dir, "eval_report.json")};
    entry["wall_ms"] = elapsed_ms(t0);
    update_manifest(dir, "evaluate", entry);

    if (!opt.quiet) {
        std::cout << "evaluate: F=" << report.F << " nrmse_kspace=" << report.nrmse_kspace
                  << " nrmse_image=" << report.nrmse_image << " mean_ssim=" << report.mean_ssim
                  << " (" << report.recon_calls << " recon calls)\n";
    }
}

void cmd_compare(const ExperimentSpec& spec, const RunOptions& opt) {
    if (spec.compare_optimizers.empty()) {
        throw_spec_error("spec field 'compare.optimizers': required for the compare command");
    }
    if (spec.criterion == CriterionKind::image) {
        throw_spec_error("the compare command uses the kspace criterion");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::string dir = ensure_out_dir(spec);

    const Dataset full = load_dataset(spec);
    const KSpaceGrid& grid = full.grid();
    const CoilSensitivities sens = load_sens(spec, grid);
    const SplitData split = split_dataset(spec, full);
    const Dataset& train = split.train;
    const int n_items = train.size();

    const SamplingPattern initial = initial_pattern(spec, grid);

    // Duplicate kinds get a #index suffix so the series stay distinguishable.
    std::vector<std::string> names;
    for (std::size_t i = 0; i < spec.compare_optimizers.size(); ++i) {
        const std::string base = to_string(spec.compare_optimizers[i].kind);
        int same = 0;
        for (const OptimizerSpec& other : spec.compare_optimizers) {
            if (to_string(other.kind) == base) ++same;
        }
        if (same == 1) {
            names.push_back(base);
        } else {
            int ordinal = 1;
            for (std::size_t k = 0; k < i; ++k) {
                if (to_string(spec.compare_optimizers[k].kind) == base) ++ordinal;
            }
            names.push_back(base + "#" + std::to_string(ordinal));
        }
    }

    auto recon0 = make_reconstructor(spec.recon, grid, sens);
    const EfficacyResult res0 = efficacy_full(initial, train, *recon0, nullptr, spec.threads);
    const double value0 = res0.F;
    std::int64_t recon_calls_total = recon0->recon_calls();

    const std::int64_t budget = spec.compare_budget;
    auto nrmse_of = [n_items](double f) { return std::sqrt(std::max(f, 0.0) * n_items); };

    std::string csv = "optimizer,epoch,F,nrmse\n";
    json opt_entries = json::array();
    for (std::size_t i = 0; i < spec.compare_optimizers.size(); ++i) {
        const OptimizerSpec& o = spec.compare_optimizers[i];
        const std::int64_t target = o.target > 0 ? o.target : spec.generator.target_m;
        csv += names[i] + ",0," + format_g(value0) + "," + format_g(nrmse_of(value0)) + "\n";

        std::vector<TraceRow> trace;
        std::int64_t calls = 0;
        std::string note;
        if (budget == 0) {
            note = "zero budget, initial pattern only";
        } else {
            auto recon = make_reconstructor(spec.recon, grid, sens);
            switch (o.kind) {
                case OptimizerKind::bass: {
                    // bass spends one evaluation on its own initial state, so
                    // the loop gets budget/N_i - 1 iterations.
                    int loop = static_cast<int>(budget / n_items - 1);
                    if (o.iterations > 0) loop = std::min(loop, o.iterations);
                    if (loop < 1) {
                        note = "budget below one iteration";
                        break;
                    }
                    BassRunResult r = bass_run(initial, bass_config_from(o, spec, target, loop),
                                               train, *recon, nullptr);
                    trace = std::move(r.trace);
                    break;
                }
                case OptimizerKind::greedy: {
                    GreedyConfig gc;
                    gc.M = target;
                    gc.lazy = o.lazy;
                    gc.max_recon_calls = budget;
                    gc.threads = spec.threads;
                    OptimizerRunResult r = greedy_forward(initial, gc, train, *recon);
                    trace = std::move(r.trace);
                    break;
                }
                case OptimizerKind::poss: {
                    PossConfig pc;
                    pc.M = target;
                    pc.L = o.iterations > 0
                               ? o.iterations
                               : static_cast<int>(std::max<std::int64_t>(budget / n_items, 1));
                    pc.seed = spec.seed;
                    pc.max_recon_calls = budget;
                    pc.threads = spec.threads;
                    OptimizerRunResult r = poss_run(initial, pc, train, *recon);
                    trace = std::move(r.trace);
                    break;
                }
            }
            calls = recon->recon_calls();
            recon_calls_total += calls;
        }

        double running = value0;
        for (const TraceRow& row : trace) {
            if (row.accepted) running = row.F;
            csv += names[i] + "," + format_g(static_cast<double>(row.recon_calls_cum) / n_items) +
                   "," + format_g(running) + "," + format_g(nrmse_of(running)) + "\n";
        }

        json e;
        e["name"] = names[i];
        e["recon_calls"] = calls;
        e["final_F"] = running;
        e["rows"] = trace.size() + 1;
        if (!note.empty()) e["note"] = note;
        opt_entries.push_back(e);
    }

    const std::string csv_path = path_join(dir, "compare.csv");
    write_text(csv_path, csv);
    write_text(path_join(dir, "resolved_spec.json"), resolved_spec_json(spec));

    json entry;
    entry["grid"] = grid.describe();
    entry["train_items"] = n_items;
    entry["budget"] = budget;
    entry["initial_F"] = value0;
    entry["optimizers"] = opt_entries;
    entry["recon_calls"] = recon_calls_total;
    entry["outputs"] = {csv_path};
    entry["wall_ms"] = elapsed_ms(t0);
    update_manifest(dir, "compare", entry);

    if (!opt.quiet) {
        std::cout << "compare: " << spec.compare_optimizers.size() << " optimizers, budget "
                  << budget << " -> " << csv_path << "\n";
        for (const json& e : opt_entries) {
            std::cout << "  " << e.at("name").get<std::string>()
                      << ": final F=" << e.at("final_F").get<double>() << " ("
                      << e.at("recon_calls").get<std::int64_t>() << " recon calls)\n";
        }
    }
}

void cmd_export_maps(const ExperimentSpec& spec, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string state = spec.base_dir.empty() ? "." : spec.base_dir;
    const std::string dest = spec.output_dir.empty() ? state : spec.output_dir;
    std::error_code ec;
    fs::create_directories(dest, ec);
    if (ec) throw_data_error("cannot create output directory " + dest + ": " + ec.message());

    const std::string mask_path = path_join(state, "final_mask.mask");
    if (!fs::exists(mask_path, ec)) {
        throw_data_error("missing state: " + mask_path + " not found");
    }
    const SamplingPattern mask = read_mask(mask_path, 1);
    const KSpaceGrid& grid = mask.grid();

    std::vector<std::string> outputs = write_mask_pgm(path_join(dest, "mask"), mask);
    for (const std::string name : {"eps_map", "r_map"}) {
        const std::string csv_path = path_join(state, name + ".csv");
        if (!fs::exists(csv_path, ec)) continue;
        const std::vector<double> map = read_map_csv(csv_path);
        if (static_cast<std::int64_t>(map.size()) != grid.num_points()) {
            throw_data_error(csv_path + " holds " + std::to_string(map.size()) +
                             " values but the mask grid has " +
                             std::to_string(grid.num_points()) + " points");
        }
        std::vector<std::string> pgms = write_map_pgm(path_join(dest, name), map, grid);
        outputs.insert(outputs.end(), pgms.begin(), pgms.end());
        const std::string copy_path = path_join(dest, name + ".csv");
        write_map_csv(copy_path, map);
        outputs.push_back(copy_path);
    }

    if (dest != state) {
        write_text(path_join(dest, "resolved_spec.json"), resolved_spec_json(spec));
    }

    json entry;
    entry["state_dir"] = state;
    entry["grid"] = grid.describe();
    entry["outputs"] = outputs;
    entry["wall_ms"] = elapsed_ms(t0);
    update_manifest(dest, "export-maps", entry);

    if (!opt.quiet) {
        std::cout << "export-maps: wrote " << outputs.size() << " files -> " << dest << "\n";
    }
}

}  // namespace bass
