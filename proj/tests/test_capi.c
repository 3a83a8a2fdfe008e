/* Exercises the shared-library C interface end to end: spec-driven commands,
 * dataset and mask handles, and the error-reporting contract. Links against
 * the shared library only. */

#define _DEFAULT_SOURCE

#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include <bass/bass.h>

static int failures = 0;

#define CHECK(cond)                                                         \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

static void write_file(const char* path, const char* content) {
    FILE* f = fopen(path, "wb");
    CHECK(f != NULL);
    if (f != NULL) {
        fputs(content, f);
        fclose(f);
    }
}

static int contains(const char* haystack, const char* needle) {
    return haystack != NULL && strstr(haystack, needle) != NULL;
}

int main(void) {
    char root[] = "/tmp/bass-capi-XXXXXX";
    if (mkdtemp(root) == NULL) {
        fprintf(stderr, "FAIL: mkdtemp\n");
        return 1;
    }

    char spec_path[512], data_dir[512], data_path[512], run_dir[512], run2_dir[512],
        mask_path[512], learn_spec[512], buf[2048];
    snprintf(spec_path, sizeof spec_path, "%s/phantom_spec.json", root);
    snprintf(data_dir, sizeof data_dir, "%s/data", root);
    snprintf(data_path, sizeof data_path, "%s/data/ph.kspd", root);
    snprintf(run_dir, sizeof run_dir, "%s/run", root);
    snprintf(run2_dir, sizeof run2_dir, "%s/run2", root);
    snprintf(mask_path, sizeof mask_path, "%s/gen.mask", root);
    snprintf(learn_spec, sizeof learn_spec, "%s/learn_spec.json", root);

    bass_set_default_threads(1);

    /* phantom command from a spec file */
    snprintf(buf, sizeof buf,
             "{\"seed\":11,\"threads\":1,\"output_dir\":\"%s\",\"phantom\":{\"name\":\"ph\","
             "\"nx\":8,\"ny\":8,\"frames\":1,\"coils\":2,\"items\":2,\"noise_sigma\":0.05}}",
             data_dir);
    write_file(spec_path, buf);
    bass_run_options quiet;
    memset(&quiet, 0, sizeof quiet);
    quiet.threads = -1;
    quiet.quiet = 1;
    CHECK(bass_command("phantom", spec_path, &quiet) == BASS_OK);
    CHECK(strcmp(bass_last_error(), "") == 0);

    /* dataset handle */
    bass_dataset* ds = NULL;
    CHECK(bass_dataset_read(data_path, &ds) == BASS_OK);
    CHECK(ds != NULL);
    int nx = 0, ny = 0, nt = 0, nc = 0, n_items = 0;
    CHECK(bass_dataset_dims(ds, &nx, &ny, &nt, &nc, &n_items) == BASS_OK);
    CHECK(nx == 8 && ny == 8 && nt == 1 && nc == 2 && n_items == 2);
    uint64_t fp = 0;
    CHECK(bass_dataset_fingerprint(ds, &fp) == BASS_OK);
    CHECK(fp != 0);

    bass_dataset* again = NULL;
    CHECK(bass_dataset_read(data_path, &again) == BASS_OK);
    uint64_t fp2 = 0;
    CHECK(bass_dataset_fingerprint(again, &fp2) == BASS_OK);
    CHECK(fp == fp2);
    bass_dataset_free(again);

    /* dataset error paths */
    bass_dataset* bad = NULL;
    CHECK(bass_dataset_read("/no/such/file.kspd", &bad) == BASS_ERR_DATA);
    CHECK(bad == NULL);
    CHECK(contains(bass_last_error(), "cannot open for reading"));
    CHECK(bass_dataset_read(NULL, &bad) == BASS_ERR_SPEC);
    CHECK(contains(bass_last_error(), "null argument: path"));
    CHECK(bass_dataset_dims(NULL, &nx, &ny, &nt, &nc, &n_items) == BASS_ERR_SPEC);
    CHECK(bass_dataset_fingerprint(ds, NULL) == BASS_ERR_SPEC);
    CHECK(contains(bass_last_error(), "null argument: out_hash"));

    /* mask generation, write and read */
    bass_mask* mask = NULL;
    CHECK(bass_mask_generate(
              "{\"kind\":\"center-only\",\"target\":16,\"calibration\":[2,2],\"seed\":1}", 8, 8,
              1, &mask) == BASS_OK);
    CHECK(mask != NULL);
    int64_t members = 0, locked = 0;
    CHECK(bass_mask_counts(mask, &members, &locked) == BASS_OK);
    CHECK(members == 16);
    CHECK(locked == 16);
    CHECK(bass_mask_write(mask, mask_path) == BASS_OK);
    bass_mask_free(mask);

    bass_mask* reread = NULL;
    CHECK(bass_mask_read(mask_path, 2, &reread) == BASS_OK);
    CHECK(bass_mask_counts(reread, &members, &locked) == BASS_OK);
    CHECK(members == 16 && locked == 16);
    bass_mask_free(reread);

    bass_mask* bad_mask = NULL;
    CHECK(bass_mask_generate("{\"kind\":\"foo\",\"target\":4}", 8, 8, 1, &bad_mask) ==
          BASS_ERR_SPEC);
    CHECK(contains(bass_last_error(), "unknown generator 'foo'"));
    CHECK(bass_mask_generate("{\"kind\":\"center-only\",\"target\":999}", 8, 8, 1, &bad_mask) ==
          BASS_ERR_SPEC);
    CHECK(bass_mask_read("/no/such/file.mask", 1, &bad_mask) == BASS_ERR_DATA);
    CHECK(bass_mask_read(mask_path, 1, NULL) == BASS_ERR_SPEC);
    CHECK(bass_mask_write(NULL, mask_path) == BASS_ERR_SPEC);

    /* learn command plus per-call output_dir override */
    snprintf(buf, sizeof buf,
             "{\"seed\":11,\"threads\":1,\"output_dir\":\"%s\",\"dataset\":\"%s\","
             "\"generator\":{\"kind\":\"uniform-random\",\"target\":12,\"calibration\":[1,1],"
             "\"seed\":3},"
             "\"optimizer\":{\"kind\":\"bass\",\"iterations\":3,\"k_init\":2,\"alpha\":0.5}}",
             run_dir, data_path);
    write_file(learn_spec, buf);
    CHECK(bass_command("learn", learn_spec, &quiet) == BASS_OK);

    char learned_path[600];
    snprintf(learned_path, sizeof learned_path, "%s/final_mask.mask", run_dir);
    bass_mask* learned = NULL;
    CHECK(bass_mask_read(learned_path, 2, &learned) == BASS_OK);
    CHECK(bass_mask_counts(learned, &members, &locked) == BASS_OK);
    CHECK(members == 12);
    CHECK(locked == 4);
    bass_mask_free(learned);

    bass_run_options redirect = quiet;
    redirect.output_dir = run2_dir;
    CHECK(bass_command("learn", learn_spec, &redirect) == BASS_OK);
    snprintf(learned_path, sizeof learned_path, "%s/final_mask.mask", run2_dir);
    CHECK(bass_mask_read(learned_path, 2, &learned) == BASS_OK);
    CHECK(bass_mask_counts(learned, &members, &locked) == BASS_OK);
    CHECK(members == 12);
    bass_mask_free(learned);

    /* command error paths */
    CHECK(bass_command("bogus", learn_spec, &quiet) == BASS_ERR_SPEC);
    CHECK(contains(bass_last_error(), "unknown command 'bogus'"));
    CHECK(bass_command("learn", "/no/such/spec.json", &quiet) == BASS_ERR_DATA);
    CHECK(contains(bass_last_error(), "cannot open spec file"));
    CHECK(bass_command(NULL, learn_spec, &quiet) == BASS_ERR_SPEC);
    CHECK(bass_command("learn", NULL, &quiet) == BASS_ERR_SPEC);

    bass_dataset_free(ds);
    bass_set_default_threads(0);

    if (failures == 0) {
        printf("test_capi: all checks passed\n");
        return 0;
    }
    fprintf(stderr, "test_capi: %d check(s) failed\n", failures);
    return 1;
}
