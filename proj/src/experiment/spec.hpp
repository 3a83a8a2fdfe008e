#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "data/phantom.hpp"
#include "objective/efficacy.hpp"
#include "recon/reconstruct.hpp"
#include "sampling/generators.hpp"

namespace bass {

enum class OptimizerKind { bass, greedy, poss };

OptimizerKind parse_optimizer_kind(const std::string& name);
std::string to_string(OptimizerKind kind);

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

// One optimizer entry: the union of the per-optimizer settings, selected by
// kind. `target` is the final pattern size M; 0 falls back to the
// generator's target.
struct OptimizerSpec {
    OptimizerKind kind = OptimizerKind::bass;
    std::int64_t target = 0;
    int iterations = 0;
    std::int64_t k_init = 0;
    double alpha = 0.5;
    double delta = 1e-12;
    PositionalConstraint pc;
    std::optional<double> rho_a;
    std::optional<double> rho_r;
    bool lazy = true;
    // Recon-call cap for greedy/poss; 0 = unlimited.
    std::int64_t budget = 0;
};

// Train items come first in the dataset, validation items directly after.
struct SplitSpec {
    int train = 0;
    int validation = 0;
};

struct LambdaGridSpec {
    bool enabled = false;
    double min = 1e-4;
    double max = 1.0;
    int count = 5;

    // Logarithmically spaced, inclusive of both ends.
    std::vector<double> values() const;
};

// Parsed experiment document. Sections are optional at parse time; each
// command checks for the ones it needs and reports the missing field by
// name. All paths are resolved against the directory the spec was loaded
// from.
struct ExperimentSpec {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string output_dir;
    // Directory the spec file lives in; cmd_export_maps reads its state from
    // here.
    std::string base_dir;

    std::string dataset_path;
    std::string sensitivities_path;
    std::string mask_path;

    bool has_split = false;
    SplitSpec split;

    bool has_phantom = false;
    PhantomConfig phantom;
    std::string phantom_name = "phantom";

    ReconConfig recon;
    LambdaGridSpec lambda_grid;

    bool has_generator = false;
    GeneratorConfig generator;
    bool generator_seed_set = false;

    CriterionKind criterion = CriterionKind::kspace;

    bool has_optimizer = false;
    OptimizerSpec optimizer;

    std::vector<OptimizerSpec> compare_optimizers;
    std::int64_t compare_budget = 0;
};

// Parses and schema-validates a JSON document. Unknown keys, wrong types and
// out-of-range values are spec errors naming the offending field path.
ExperimentSpec parse_experiment_spec(const std::string& json_text, const std::string& base_dir);

// Reads the file (a directory is taken to mean its resolved_spec.json) and
// parses it with base_dir set to the file's parent.
ExperimentSpec load_experiment_spec(const std::string& path);

// Serializes the spec with every default materialized; reruns from this
// document reproduce the run.
std::string resolved_spec_json(const ExperimentSpec& spec);

}  // namespace bass
