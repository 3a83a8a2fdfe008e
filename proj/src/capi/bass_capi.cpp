#include "bass/bass.h"

#include <exception>
#include <string>
#include <utility>

#include "core/parallel.hpp"
#include "data/io.hpp"
#include "experiment/commands.hpp"
#include "objective/metrics.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
bass_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BASS_OK;
    } catch (const bass::Error& e) {
        g_last_error = e.what();
        return static_cast<bass_status>(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BASS_ERR_NUMERIC;
    }
}

bass_status null_argument(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return BASS_ERR_SPEC;
}

}  // namespace

struct bass_dataset {
    bass::Dataset data;
};

struct bass_mask {
    bass::SamplingPattern pattern;
};

extern "C" {

const char* bass_last_error(void) { return g_last_error.c_str(); }

void bass_set_default_threads(int n) { bass::set_default_threads(n); }

bass_status bass_dataset_read(const char* path, bass_dataset** out) {
    if (path == nullptr) return null_argument("path");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] { *out = new bass_dataset{bass::read_dataset(path)}; });
}

void bass_dataset_free(bass_dataset* dataset) { delete dataset; }

bass_status bass_dataset_dims(const bass_dataset* dataset, int* nx, int* ny, int* nt, int* nc,
                              int* n_items) {
    if (dataset == nullptr) return null_argument("dataset");
    return guarded([&] {
        const bass::KSpaceGrid& g = dataset->data.grid();
        if (nx != nullptr) *nx = g.nx();
        if (ny != nullptr) *ny = g.ny();
        if (nt != nullptr) *nt = g.nt();
        if (nc != nullptr) *nc = g.nc();
        if (n_items != nullptr) *n_items = dataset->data.size();
    });
}

bass_status bass_dataset_fingerprint(const bass_dataset* dataset, uint64_t* out_hash) {
    if (dataset == nullptr) return null_argument("dataset");
    if (out_hash == nullptr) return null_argument("out_hash");
    return guarded([&] { *out_hash = bass::dataset_fingerprint(dataset->data); });
}

bass_status bass_mask_read(const char* path, int nc, bass_mask** out) {
    if (path == nullptr) return null_argument("path");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] { *out = new bass_mask{bass::read_mask(path, nc)}; });
}

bass_status bass_mask_write(const bass_mask* mask, const char* path) {
    if (mask == nullptr) return null_argument("mask");
    if (path == nullptr) return null_argument("path");
    return guarded([&] { bass::write_mask(path, mask->pattern); });
}

void bass_mask_free(bass_mask* mask) { delete mask; }

bass_status bass_mask_counts(const bass_mask* mask, int64_t* n_members, int64_t* n_locked) {
    if (mask == nullptr) return null_argument("mask");
    return guarded([&] {
        if (n_members != nullptr) *n_members = mask->pattern.size();
        if (n_locked != nullptr) *n_locked = mask->pattern.locked_count();
    });
}

bass_status bass_mask_generate(const char* generator_json, int nx, int ny, int nt,
                               bass_mask** out) {
    if (generator_json == nullptr) return null_argument("generator_json");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        const std::string doc = std::string("{\"generator\": ") + generator_json + "}";
        bass::ExperimentSpec spec = bass::parse_experiment_spec(doc, "");
        bass::KSpaceGrid grid(nx, ny, nt, 1);
        *out = new bass_mask{bass::generate(spec.generator, grid)};
    });
}

bass_status bass_command(const char* command, const char* spec_path,
                         const bass_run_options* options) {
    if (command == nullptr) return null_argument("command");
    if (spec_path == nullptr) return null_argument("spec_path");
    return guarded([&] {
        bass::ExperimentSpec spec = bass::load_experiment_spec(spec_path);
        bass::RunOptions run;
        if (options != nullptr) {
            if (options->output_dir != nullptr) spec.output_dir = options->output_dir;
            if (options->has_seed != 0) spec.seed = options->seed;
            if (options->threads >= 0) spec.threads = options->threads;
            run.quiet = options->quiet != 0;
        }
        const std::string name(command);
        if (name == "phantom") {
            bass::cmd_phantom(spec, run);
        } else if (name == "learn") {
            bass::cmd_learn(spec, run);
        } else if (name == "evaluate") {
            bass::cmd_evaluate(spec, run);
        } else if (name == "compare") {
            bass::cmd_compare(spec, run);
        } else if (name == "export-maps") {
            bass::cmd_export_maps(spec, run);
        } else {
            bass::throw_spec_error("unknown command '" + name +
                                   "' (expected phantom, learn, evaluate, compare or "
                                   "export-maps)");
        }
    });
}

}  // extern "C"
