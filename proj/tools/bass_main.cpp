#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bass/bass.h"

namespace {

struct Args {
    std::string spec;
    std::string out;
    std::uint64_t seed = 0;
    int threads = -1;
    bool quiet = false;
};

int run_command(const char* command, const Args& args, bool has_seed) {
    bass_run_options options{};
    options.output_dir = args.out.empty() ? nullptr : args.out.c_str();
    options.has_seed = has_seed ? 1 : 0;
    options.seed = args.seed;
    options.threads = args.threads;
    options.quiet = args.quiet ? 1 : 0;
    const bass_status status = bass_command(command, args.spec.c_str(), &options);
    if (status != BASS_OK) std::fprintf(stderr, "error: %s\n", bass_last_error());
    return static_cast<int>(status);
}

int env_threads() {
    const char* env = std::getenv("BASS_THREADS");
    if (env == nullptr) return -1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0 || v > 1000000) return -1;
    return static_cast<int>(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learns Cartesian k-space sampling patterns for undersampled parallel MRI"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* help;
    };
    const std::vector<Cmd> cmds = {
        {"phantom", "Generate a synthetic multi-coil dataset"},
        {"learn", "Learn a sampling pattern on the training split"},
        {"evaluate", "Evaluate a mask file on the validation split"},
        {"compare", "Run several optimizers under one shared recon-call budget"},
        {"export-maps", "Render the masks and importance maps of a learn run"},
    };

    Args args;
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> seed_opts;
    std::vector<CLI::Option*> thread_opts;
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--spec", args.spec, "Experiment spec JSON (or a run directory)")
            ->required();
        sub->add_option("--out", args.out, "Output directory (overrides the spec)");
        seed_opts.push_back(sub->add_option("--seed", args.seed, "RNG seed (overrides the spec)"));
        thread_opts.push_back(sub->add_option(
            "--threads", args.threads, "Worker threads, 0 = all cores (overrides BASS_THREADS)"));
        sub->add_flag("--quiet", args.quiet, "Suppress summary output");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        if (thread_opts[i]->count() == 0) args.threads = env_threads();
        return run_command(cmds[i].name, args, seed_opts[i]->count() > 0);
    }
    return 2;
}
