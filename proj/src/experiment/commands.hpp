#pragma once

#include "experiment/spec.hpp"

namespace bass {

struct RunOptions {
    bool quiet = false;
};

// Subcommand bodies shared by the CLI and the C API. Each writes its outputs
// plus resolved_spec.json under spec.output_dir and records a command entry
// in the directory's manifest.json (other commands' entries are preserved).
// Errors propagate as Error with the kind that maps to the exit code.

// Generates the configured phantom set and writes <name>.kspd together with
// the ground-truth images (<name>_truth.kspd) and coil sensitivities
// (<name>_sens.kspd).
void cmd_phantom(const ExperimentSpec& spec, const RunOptions& opt = {});

// Learns a pattern on the training split: optional lambda grid search on the
// initial pattern, one optimizer run, a second grid search on the learned
// pattern, then final_mask.mask, trace.csv, eps/r map CSVs and train (and,
// when the split provides one, validation) evaluation reports.
void cmd_learn(const ExperimentSpec& spec, const RunOptions& opt = {});

// Evaluates a mask file against the validation split (the whole dataset when
// no split is given) and writes eval_report.csv/json.
void cmd_evaluate(const ExperimentSpec& spec, const RunOptions& opt = {});

// Runs every configured optimizer from the same initial pattern under one
// shared recon-call budget and writes compare.csv with per-optimizer
// (epoch, F, nrmse) series, epoch = cumulative recon calls / N_items.
void cmd_compare(const ExperimentSpec& spec, const RunOptions& opt = {});

// Renders the masks and importance maps of a previous learn run (the
// directory the spec was loaded from) to PGM plus raw CSV copies.
void cmd_export_maps(const ExperimentSpec& spec, const RunOptions& opt = {});

}  // namespace bass
