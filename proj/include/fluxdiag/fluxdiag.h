/* fluxdiag — C API for the spectral energy-flux diagnostics library.
 *
 * All functions return FD_OK (0) on success or one of the error codes
 * below; fd_last_error() describes the most recent failure on the calling
 * thread. Objects returned through out-parameters are owned by the caller
 * and released with the matching _free function.
 */
#ifndef FLUXDIAG_H
#define FLUXDIAG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    FD_OK = 0,
    FD_ERR_VALIDATION = 2, /* bad arguments / preconditions */
    FD_ERR_NUMERICAL = 3,  /* numerical-hypothesis violation */
    FD_ERR_IO = 4          /* file I/O or serialization failure */
};

/* Opaque velocity field on one of the supported domains. */
typedef struct fd_field fd_field;

const char* fd_version(void);
/* Message for the last failure on this thread; empty string if none. */
const char* fd_last_error(void);

/* --- fields ------------------------------------------------------------ */

/* OFX1 file I/O. */
int fd_field_read(const char* path, fd_field** out);
int fd_field_write(const fd_field* f, const char* path);
void fd_field_free(fd_field* f);

/* Grid metadata. `kind` receives "Periodic3", "HybridSlab" or "HalfSlab". */
int fd_field_info(const fd_field* f, int resolution[3], double lengths[3],
                  char* kind, size_t kind_len);

int fd_field_energy(const fd_field* f, double* out);
int fd_field_max_divergence(const fd_field* f, double* out);

int fd_leray_project(const fd_field* f, fd_field** out);
int fd_mollify(const fd_field* f, double eps, fd_field** out);
int fd_extend(const fd_field* half, fd_field** out, int* trace_warned);
int fd_restrict(const fd_field* hybrid, fd_field** out);

/* S3(y): integral of |u(x+y)-u(x)|^3 over the domain. */
int fd_structure_fn(const fd_field* f, const double y[3], double* out);

/* Duchon-Robert flux at one mollification scale, by the bilinear route. */
int fd_flux(const fd_field* f, double eps, double* out);

/* --- staged execution --------------------------------------------------- */

/* Runs one pipeline stage ("gen", "evolve", "mollify", "extend",
 * "restrict", "flux", "structfn", "criterion", "modulus") with JSON
 * parameters; relative paths resolve against out_dir ("" = cwd). On
 * success *outputs receives a newline-separated list of created files
 * (free with fd_string_free). */
int fd_run_stage(const char* stage, const char* params_json,
                 const char* out_dir, char** outputs);

/* Runs a full experiment config; *manifest_json receives the manifest. */
int fd_run_pipeline(const char* config_json, const char* out_dir,
                    char** manifest_json);

/* Renders report files into a summary table; optionally writes a
 * gnuplot-ready CSV when csv_path is non-NULL and non-empty. */
int fd_render_reports(const char* const* report_paths, int count,
                      const char* csv_path, char** text);

void fd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FLUXDIAG_H */
