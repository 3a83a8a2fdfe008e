#include "experiment/spec.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "core/errors.hpp"

namespace bass {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw_spec_error("spec field '" + path + "': " + what);
}

std::string sub(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) {
            if (it.key() == a) {
                known = true;
                break;
            }
        }
        if (!known) field_error(sub(path, it.key()), "unknown field");
    }
}

const json& require_object(const json& v, const std::string& path) {
    if (!v.is_object()) field_error(path, "expected an object");
    return v;
}

bool is_integer(const json& v) {
    return v.is_number_integer() || v.is_number_unsigned();
}

std::int64_t as_int(const json& v, const std::string& path) {
    if (!is_integer(v)) field_error(path, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        std::int64_t s = v.get<std::int64_t>();
        if (s < 0) field_error(path, "must be >= 0");
        return static_cast<std::uint64_t>(s);
    }
    field_error(path, "expected a non-negative integer");
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) field_error(path, "expected a number");
    return v.get<double>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) field_error(path, "expected a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) field_error(path, "expected a string");
    return v.get<std::string>();
}

std::int64_t int_or(const json& o, const std::string& p, const char* k, std::int64_t def) {
    auto it = o.find(k);
    return it == o.end() ? def : as_int(*it, sub(p, k));
}

double number_or(const json& o, const std::string& p, const char* k, double def) {
    auto it = o.find(k);
    return it == o.end() ? def : as_number(*it, sub(p, k));
}

bool bool_or(const json& o, const std::string& p, const char* k, bool def) {
    auto it = o.find(k);
    return it == o.end() ? def : as_bool(*it, sub(p, k));
}

std::string string_or(const json& o, const std::string& p, const char* k,
                      const std::string& def) {
    auto it = o.find(k);
    return it == o.end() ? def : as_string(*it, sub(p, k));
}

std::string req_string(const json& o, const std::string& p, const char* k) {
    auto it = o.find(k);
    if (it == o.end()) field_error(sub(p, k), "required field is missing");
    return as_string(*it, sub(p, k));
}

std::int64_t req_int(const json& o, const std::string& p, const char* k) {
    auto it = o.find(k);
    if (it == o.end()) field_error(sub(p, k), "required field is missing");
    return as_int(*it, sub(p, k));
}

int int_field(const json& o, const std::string& p, const char* k, int def, std::int64_t lo) {
    std::int64_t v = int_or(o, p, k, def);
    if (v < lo) field_error(sub(p, k), "must be >= " + std::to_string(lo));
    if (v > 1000000000) field_error(sub(p, k), "out of range");
    return static_cast<int>(v);
}

std::pair<double, double> number_pair(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) field_error(path, "expected [min, max]");
    double lo = as_number(v[0], path + "[0]");
    double hi = as_number(v[1], path + "[1]");
    if (!(lo <= hi)) field_error(path, "expected min <= max");
    return {lo, hi};
}

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) field_error(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::string resolve_path(const std::string& raw, const std::string& base_dir) {
    namespace fs = std::filesystem;
    fs::path p(raw);
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    return p.lexically_normal().string();
}

void parse_phantom(const json& o, const std::string& p, ExperimentSpec& spec) {
    require_object(o, p);
    check_keys(o, p,
               {"name", "nx", "ny", "frames", "coils", "items", "ellipses", "radius", "intensity",
                "jitter", "sensitivity_smoothness", "frame_times", "decay", "noise_sigma"});
    PhantomConfig& c = spec.phantom;
    spec.phantom_name = string_or(o, p, "name", spec.phantom_name);
    if (spec.phantom_name.empty()) field_error(sub(p, "name"), "must not be empty");
    c.nx = int_field(o, p, "nx", c.nx, 1);
    c.ny = int_field(o, p, "ny", c.ny, 1);
    c.nt = int_field(o, p, "frames", c.nt, 1);
    c.nc = int_field(o, p, "coils", c.nc, 1);
    c.num_items = int_field(o, p, "items", c.num_items, 1);
    if (auto it = o.find("ellipses"); it != o.end()) {
        auto [lo, hi] = number_pair(*it, sub(p, "ellipses"));
        if (lo < 1 || lo != std::floor(lo) || hi != std::floor(hi)) {
            field_error(sub(p, "ellipses"), "expected integer counts >= 1");
        }
        c.min_ellipses = static_cast<int>(lo);
        c.max_ellipses = static_cast<int>(hi);
    }
    if (auto it = o.find("radius"); it != o.end()) {
        auto [lo, hi] = number_pair(*it, sub(p, "radius"));
        if (!(lo > 0.0)) field_error(sub(p, "radius"), "must be > 0");
        c.min_radius = lo;
        c.max_radius = hi;
    }
    if (auto it = o.find("intensity"); it != o.end()) {
        auto [lo, hi] = number_pair(*it, sub(p, "intensity"));
        if (!(lo > 0.0)) field_error(sub(p, "intensity"), "must be > 0");
        c.min_intensity = lo;
        c.max_intensity = hi;
    }
    c.jitter = number_or(o, p, "jitter", c.jitter);
    if (c.jitter < 0.0) field_error(sub(p, "jitter"), "must be >= 0");
    c.sensitivity_smoothness = number_or(o, p, "sensitivity_smoothness", c.sensitivity_smoothness);
    if (!(c.sensitivity_smoothness > 0.0)) {
        field_error(sub(p, "sensitivity_smoothness"), "must be > 0");
    }
    if (auto it = o.find("frame_times"); it != o.end()) {
        c.frame_times = number_array(*it, sub(p, "frame_times"));
    }
    if (auto it = o.find("decay"); it != o.end()) {
        auto [lo, hi] = number_pair(*it, sub(p, "decay"));
        if (!(lo > 0.0)) field_error(sub(p, "decay"), "must be > 0");
        c.decay_min_ms = lo;
        c.decay_max_ms = hi;
    }
    c.noise_sigma = number_or(o, p, "noise_sigma", c.noise_sigma);
    if (c.noise_sigma < 0.0) field_error(sub(p, "noise_sigma"), "must be >= 0");
}

void parse_recon(const json& o, const std::string& p, ReconConfig& c) {
    require_object(o, p);
    check_keys(o, p, {"method", "lambda", "iterations", "tolerance", "prox_iterations",
                      "dictionary"});
    if (o.contains("method")) {
        try {
            c.method = parse_recon_method(req_string(o, p, "method"));
        } catch (const Error& e) {
            field_error(sub(p, "method"), e.what());
        }
    }
    c.lambda = number_or(o, p, "lambda", c.lambda);
    if (c.lambda < 0.0) field_error(sub(p, "lambda"), "must be >= 0");
    c.max_iterations = int_field(o, p, "iterations", c.max_iterations, 1);
    c.tolerance = number_or(o, p, "tolerance", c.tolerance);
    if (!(c.tolerance > 0.0)) field_error(sub(p, "tolerance"), "must be > 0");
    c.prox_iterations = int_field(o, p, "prox_iterations", c.prox_iterations, 1);
    if (auto it = o.find("dictionary"); it != o.end()) {
        const std::string dp = sub(p, "dictionary");
        require_object(*it, dp);
        check_keys(*it, dp, {"decay_constants", "frame_times"});
        if (it->contains("decay_constants")) {
            c.dictionary.decay_constants =
                number_array(it->at("decay_constants"), sub(dp, "decay_constants"));
        }
        if (it->contains("frame_times")) {
            c.dictionary.frame_times =
                number_array(it->at("frame_times"), sub(dp, "frame_times"));
        }
    }
}

void parse_lambda_grid(const json& o, const std::string& p, LambdaGridSpec& g) {
    require_object(o, p);
    check_keys(o, p, {"enabled", "min", "max", "count"});
    g.enabled = bool_or(o, p, "enabled", true);
    g.min = number_or(o, p, "min", g.min);
    g.max = number_or(o, p, "max", g.max);
    g.count = int_field(o, p, "count", g.count, 1);
    if (!(g.min > 0.0)) field_error(sub(p, "min"), "must be > 0");
    if (!(g.max >= g.min)) field_error(sub(p, "max"), "must be >= min");
}

void parse_generator(const json& o, const std::string& p, ExperimentSpec& spec) {
    require_object(o, p);
    check_keys(o, p, {"kind", "target", "vd_sigma", "vd_exponent", "pd_radius", "calibration",
                      "seed"});
    GeneratorConfig& c = spec.generator;
    try {
        c.kind = parse_generator_kind(req_string(o, p, "kind"));
    } catch (const Error& e) {
        field_error(sub(p, "kind"), e.what());
    }
    c.target_m = req_int(o, p, "target");
    if (c.target_m < 1) field_error(sub(p, "target"), "must be >= 1");
    c.vd_sigma = number_or(o, p, "vd_sigma", c.vd_sigma);
    if (!(c.vd_sigma > 0.0)) field_error(sub(p, "vd_sigma"), "must be > 0");
    c.vd_exponent = number_or(o, p, "vd_exponent", c.vd_exponent);
    if (c.vd_exponent < 0.0) field_error(sub(p, "vd_exponent"), "must be >= 0");
    c.pd_radius = number_or(o, p, "pd_radius", c.pd_radius);
    if (!(c.pd_radius > 0.0)) field_error(sub(p, "pd_radius"), "must be > 0");
    if (auto it = o.find("calibration"); it != o.end()) {
        const std::string cp = sub(p, "calibration");
        if (!it->is_array() || it->size() != 2) field_error(cp, "expected [half_x, half_y]");
        std::int64_t hx = as_int((*it)[0], cp + "[0]");
        std::int64_t hy = as_int((*it)[1], cp + "[1]");
        if (hx < 0 || hy < 0) field_error(cp, "must be >= 0");
        c.cal_half_x = static_cast<int>(hx);
        c.cal_half_y = static_cast<int>(hy);
    }
    if (auto it = o.find("seed"); it != o.end()) {
        c.seed = as_u64(*it, sub(p, "seed"));
        spec.generator_seed_set = true;
    }
}

OptimizerSpec parse_optimizer(const json& o, const std::string& p, bool require_iterations) {
    require_object(o, p);
    check_keys(o, p, {"kind", "target", "iterations", "k_init", "alpha", "delta", "constraint",
                      "rho_a", "rho_r", "lazy", "budget"});
    OptimizerSpec s;
    try {
        s.kind = parse_optimizer_kind(req_string(o, p, "kind"));
    } catch (const Error& e) {
        field_error(sub(p, "kind"), e.what());
    }
    s.target = int_or(o, p, "target", 0);
    if (s.target < 0) field_error(sub(p, "target"), "must be >= 0");
    s.iterations = int_field(o, p, "iterations", 0, 0);
    s.k_init = int_or(o, p, "k_init", 0);
    if (s.k_init < 0) field_error(sub(p, "k_init"), "must be >= 0");
    s.alpha = number_or(o, p, "alpha", s.alpha);
    s.delta = number_or(o, p, "delta", s.delta);
    if (auto it = o.find("constraint"); it != o.end() && !it->is_null()) {
        const std::string cp = sub(p, "constraint");
        require_object(*it, cp);
        check_keys(*it, cp, {"radius", "exclude_conjugate"});
        s.pc.radius = int_field(*it, cp, "radius", s.pc.radius, 0);
        s.pc.exclude_conjugate = bool_or(*it, cp, "exclude_conjugate", s.pc.exclude_conjugate);
    }
    if (auto it = o.find("rho_a"); it != o.end()) {
        double v = as_number(*it, sub(p, "rho_a"));
        if (!(v > 0.0)) field_error(sub(p, "rho_a"), "must be > 0");
        s.rho_a = v;
    }
    if (auto it = o.find("rho_r"); it != o.end()) {
        double v = as_number(*it, sub(p, "rho_r"));
        if (!(v > 0.0)) field_error(sub(p, "rho_r"), "must be > 0");
        s.rho_r = v;
    }
    s.lazy = bool_or(o, p, "lazy", s.lazy);
    s.budget = int_or(o, p, "budget", 0);
    if (s.budget < 0) field_error(sub(p, "budget"), "must be >= 0");
    if (s.kind == OptimizerKind::bass) {
        if (require_iterations && s.iterations < 1) {
            field_error(sub(p, "iterations"), "bass requires iterations >= 1");
        }
        if (s.k_init < 1) field_error(sub(p, "k_init"), "bass requires k_init >= 1");
        if (!(s.alpha > 0.0 && s.alpha < 1.0)) field_error(sub(p, "alpha"), "must be in (0, 1)");
        if (!(s.delta > 0.0)) field_error(sub(p, "delta"), "must be > 0");
    }
    if (s.kind == OptimizerKind::poss && require_iterations && s.iterations < 1) {
        field_error(sub(p, "iterations"), "poss requires iterations >= 1");
    }
    return s;
}

json recon_json(const ReconConfig& c) {
    json j;
    j["method"] = to_string(c.method);
    j["lambda"] = c.lambda;
    j["iterations"] = c.max_iterations;
    j["tolerance"] = c.tolerance;
    j["prox_iterations"] = c.prox_iterations;
    if (!c.dictionary.decay_constants.empty() || !c.dictionary.frame_times.empty()) {
        json d;
        d["decay_constants"] = c.dictionary.decay_constants;
        d["frame_times"] = c.dictionary.frame_times;
        j["dictionary"] = d;
    }
    return j;
}

json optimizer_json(const OptimizerSpec& s) {
    json j;
    j["kind"] = to_string(s.kind);
    j["target"] = s.target;
    switch (s.kind) {
        case OptimizerKind::bass:
            j["iterations"] = s.iterations;
            j["k_init"] = s.k_init;
            j["alpha"] = s.alpha;
            j["delta"] = s.delta;
            j["constraint"] = {{"radius", s.pc.radius},
                               {"exclude_conjugate", s.pc.exclude_conjugate}};
            if (s.rho_a) j["rho_a"] = *s.rho_a;
            if (s.rho_r) j["rho_r"] = *s.rho_r;
            break;
        case OptimizerKind::greedy:
            j["lazy"] = s.lazy;
            j["budget"] = s.budget;
            break;
        case OptimizerKind::poss:
            j["iterations"] = s.iterations;
            j["budget"] = s.budget;
            break;
    }
    return j;
}

}  // namespace

OptimizerKind parse_optimizer_kind(const std::string& name) {
    if (name == "bass") return OptimizerKind::bass;
    if (name == "greedy") return OptimizerKind::greedy;
    if (name == "poss") return OptimizerKind::poss;
    throw_spec_error("unknown optimizer '" + name + "' (expected bass, greedy or poss)");
}

std::string to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::bass: return "bass";
        case OptimizerKind::greedy: return "greedy";
        case OptimizerKind::poss: return "poss";
    }
    return "?";
}

GeneratorKind parse_generator_kind(const std::string& name) {
    std::string n = name;
    for (char& ch : n) {
        if (ch == '_') ch = '-';
    }
    if (n == "variable-density") return GeneratorKind::variable_density;
    if (n == "poisson-disk") return GeneratorKind::poisson_disk;
    if (n == "center-only") return GeneratorKind::center_only;
    if (n == "uniform-random") return GeneratorKind::uniform_random;
    throw_spec_error("unknown generator '" + name +
                     "' (expected variable-density, poisson-disk, center-only or uniform-random)");
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::variable_density: return "variable-density";
        case GeneratorKind::poisson_disk: return "poisson-disk";
        case GeneratorKind::center_only: return "center-only";
        case GeneratorKind::uniform_random: return "uniform-random";
    }
    return "?";
}

std::vector<double> LambdaGridSpec::values() const {
    std::vector<double> v;
    if (count == 1) {
        v.push_back(min);
        return v;
    }
    const double lo = std::log(min);
    const double hi = std::log(max);
    for (int i = 0; i < count; ++i) {
        v.push_back(std::exp(lo + (hi - lo) * i / (count - 1)));
    }
    return v;
}

ExperimentSpec parse_experiment_spec(const std::string& json_text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw_spec_error(std::string("spec is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw_spec_error("spec document must be a JSON object");
    check_keys(root, "",
               {"seed", "threads", "output_dir", "dataset", "sensitivities", "mask", "split",
                "phantom", "recon", "lambda_grid", "generator", "criterion", "optimizer",
                "compare"});

    ExperimentSpec spec;
    spec.base_dir = base_dir;
    if (auto it = root.find("seed"); it != root.end()) spec.seed = as_u64(*it, "seed");
    spec.threads = int_field(root, "", "threads", 0, 0);
    spec.output_dir = string_or(root, "", "output_dir", "");
    if (!spec.output_dir.empty()) spec.output_dir = resolve_path(spec.output_dir, base_dir);
    if (auto it = root.find("dataset"); it != root.end()) {
        spec.dataset_path = resolve_path(as_string(*it, "dataset"), base_dir);
    }
    if (auto it = root.find("sensitivities"); it != root.end()) {
        spec.sensitivities_path = resolve_path(as_string(*it, "sensitivities"), base_dir);
    }
    if (auto it = root.find("mask"); it != root.end()) {
        spec.mask_path = resolve_path(as_string(*it, "mask"), base_dir);
    }
    if (auto it = root.find("split"); it != root.end()) {
        require_object(*it, "split");
        check_keys(*it, "split", {"train", "validation"});
        spec.has_split = true;
        spec.split.train = int_field(*it, "split", "train", 0, 0);
        spec.split.validation = int_field(*it, "split", "validation", 0, 0);
    }
    if (auto it = root.find("phantom"); it != root.end()) {
        spec.has_phantom = true;
        parse_phantom(*it, "phantom", spec);
    }
    if (auto it = root.find("recon"); it != root.end()) {
        parse_recon(*it, "recon", spec.recon);
    }
    if (auto it = root.find("lambda_grid"); it != root.end()) {
        parse_lambda_grid(*it, "lambda_grid", spec.lambda_grid);
    }
    if (auto it = root.find("generator"); it != root.end()) {
        spec.has_generator = true;
        parse_generator(*it, "generator", spec);
    }
    if (auto it = root.find("criterion"); it != root.end()) {
        try {
            spec.criterion = parse_criterion(as_string(*it, "criterion"));
        } catch (const Error& e) {
            field_error("criterion", e.what());
        }
    }
    if (auto it = root.find("optimizer"); it != root.end()) {
        spec.has_optimizer = true;
        spec.optimizer = parse_optimizer(*it, "optimizer", true);
    }
    if (auto it = root.find("compare"); it != root.end()) {
        require_object(*it, "compare");
        check_keys(*it, "compare", {"budget", "optimizers"});
        spec.compare_budget = int_or(*it, "compare", "budget", 0);
        if (spec.compare_budget < 0) field_error("compare.budget", "must be >= 0");
        auto ot = it->find("optimizers");
        if (ot == it->end()) field_error("compare.optimizers", "required field is missing");
        if (!ot->is_array() || ot->empty()) {
            field_error("compare.optimizers", "expected a non-empty array");
        }
        for (std::size_t i = 0; i < ot->size(); ++i) {
            spec.compare_optimizers.push_back(
                parse_optimizer((*ot)[i], "compare.optimizers[" + std::to_string(i) + "]",
                                false));
        }
    }
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    std::error_code ec;
    if (fs::is_directory(p, ec)) p /= "resolved_spec.json";
    std::ifstream in(p, std::ios::binary);
    if (!in) throw_data_error("cannot open spec file: " + p.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment_spec(text.str(), p.parent_path().string());
}

std::string resolved_spec_json(const ExperimentSpec& s) {
    json j;
    j["seed"] = s.seed;
    j["threads"] = s.threads;
    if (!s.output_dir.empty()) j["output_dir"] = s.output_dir;
    if (!s.dataset_path.empty()) j["dataset"] = s.dataset_path;
    if (!s.sensitivities_path.empty()) j["sensitivities"] = s.sensitivities_path;
    if (!s.mask_path.empty()) j["mask"] = s.mask_path;
    if (s.has_split) {
        j["split"] = {{"train", s.split.train}, {"validation", s.split.validation}};
    }
    if (s.has_phantom) {
        const PhantomConfig& c = s.phantom;
        json ph;
        ph["name"] = s.phantom_name;
        ph["nx"] = c.nx;
        ph["ny"] = c.ny;
        ph["frames"] = c.nt;
        ph["coils"] = c.nc;
        ph["items"] = c.num_items;
        ph["ellipses"] = {c.min_ellipses, c.max_ellipses};
        ph["radius"] = {c.min_radius, c.max_radius};
        ph["intensity"] = {c.min_intensity, c.max_intensity};
        ph["jitter"] = c.jitter;
        ph["sensitivity_smoothness"] = c.sensitivity_smoothness;
        if (!c.frame_times.empty()) ph["frame_times"] = c.frame_times;
        ph["decay"] = {c.decay_min_ms, c.decay_max_ms};
        ph["noise_sigma"] = c.noise_sigma;
        j["phantom"] = ph;
    }
    j["recon"] = recon_json(s.recon);
    if (s.lambda_grid.enabled) {
        j["lambda_grid"] = {{"enabled", true},
                            {"min", s.lambda_grid.min},
                            {"max", s.lambda_grid.max},
                            {"count", s.lambda_grid.count}};
    }
    if (s.has_generator) {
        const GeneratorConfig& c = s.generator;
        json g;
        g["kind"] = to_string(c.kind);
        g["target"] = c.target_m;
        g["vd_sigma"] = c.vd_sigma;
        g["vd_exponent"] = c.vd_exponent;
        g["pd_radius"] = c.pd_radius;
        g["calibration"] = {c.cal_half_x, c.cal_half_y};
        g["seed"] = s.generator_seed_set ? c.seed : s.seed;
        j["generator"] = g;
    }
    j["criterion"] = to_string(s.criterion);
    if (s.has_optimizer) j["optimizer"] = optimizer_json(s.optimizer);
    if (!s.compare_optimizers.empty()) {
        json arr = json::array();
        for (const OptimizerSpec& o : s.compare_optimizers) arr.push_back(optimizer_json(o));
        j["compare"] = {{"budget", s.compare_budget}, {"optimizers", arr}};
    }
    return j.dump(2) + "\n";
}

}  // namespace bass
