#ifndef BASS_H
#define BASS_H

/* C interface to the sampling-pattern learning library. All functions
 * return a status code; on failure bass_last_error() returns a
 * thread-local message describing what went wrong. Status values match
 * the CLI exit codes. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BASS_API __declspec(dllexport)
#else
#define BASS_API __attribute__((visibility("default")))
#endif

typedef enum bass_status {
    BASS_OK = 0,
    BASS_ERR_SPEC = 2,    /* bad configuration or schema */
    BASS_ERR_DATA = 3,    /* bad files or shapes */
    BASS_ERR_NUMERIC = 4  /* solver failure */
} bass_status;

/* Message for the most recent failure on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next API call on
 * the same thread. */
BASS_API const char* bass_last_error(void);

/* Worker count used when a spec leaves threads at 0. 0 restores the
 * hardware default. */
BASS_API void bass_set_default_threads(int n);

/* ---- datasets ------------------------------------------------------- */

typedef struct bass_dataset bass_dataset;

/* Reads a .kspd container. The handle must be released with
 * bass_dataset_free. */
BASS_API bass_status bass_dataset_read(const char* path, bass_dataset** out);
BASS_API void bass_dataset_free(bass_dataset* dataset);

/* Grid dimensions and item count. Null output pointers are skipped. */
BASS_API bass_status bass_dataset_dims(const bass_dataset* dataset, int* nx, int* ny, int* nt,
                                       int* nc, int* n_items);

/* Order-independent content hash (same value the CLI prints). */
BASS_API bass_status bass_dataset_fingerprint(const bass_dataset* dataset, uint64_t* out_hash);

/* ---- masks ---------------------------------------------------------- */

typedef struct bass_mask bass_mask;

/* Reads a .mask file; nc is the coil count to attach (mask files do not
 * carry one). */
BASS_API bass_status bass_mask_read(const char* path, int nc, bass_mask** out);
BASS_API bass_status bass_mask_write(const bass_mask* mask, const char* path);
BASS_API void bass_mask_free(bass_mask* mask);

BASS_API bass_status bass_mask_counts(const bass_mask* mask, int64_t* n_members,
                                      int64_t* n_locked);

/* Builds an initial pattern on an nx x ny x nt grid from a generator
 * config given as a JSON object (same schema as the spec's "generator"
 * section). */
BASS_API bass_status bass_mask_generate(const char* generator_json, int nx, int ny, int nt,
                                        bass_mask** out);

/* ---- commands ------------------------------------------------------- */

typedef struct bass_run_options {
    const char* output_dir; /* NULL keeps the spec's output_dir */
    int has_seed;           /* nonzero: `seed` overrides the spec */
    uint64_t seed;
    int threads;            /* < 0 keeps the spec's thread count */
    int quiet;              /* nonzero silences summary lines */
} bass_run_options;

/* Runs one subcommand ("phantom", "learn", "evaluate", "compare" or
 * "export-maps") from a spec JSON file. `spec_path` may name a directory,
 * in which case its resolved_spec.json is used. `options` may be NULL. */
BASS_API bass_status bass_command(const char* command, const char* spec_path,
                                  const bass_run_options* options);

#ifdef __cplusplus
}
#endif

#endif /* BASS_H */
