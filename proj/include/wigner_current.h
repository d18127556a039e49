/* wigcur: phase-space distributions and currents of squeezed light.
 *
 * C interface to the shared library. Objects are opaque handles created and
 * destroyed through these functions; every fallible call returns a wc_status
 * and leaves a human-readable message in wc_last_error() (thread-local).
 */
#ifndef WIGNER_CURRENT_H
#define WIGNER_CURRENT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wc_status {
  WC_OK = 0,
  WC_ERR_INVALID_ARGUMENT = 1,
  WC_ERR_CONFIG = 2,
  WC_ERR_SOLVER = 3,
  WC_ERR_TOPOLOGY = 4,
  WC_ERR_IO = 5,
  WC_ERR_NULL_HANDLE = 6,
  WC_ERR_INTERNAL = 7
} wc_status;

const char* wc_version(void);
const char* wc_status_name(wc_status status);
/* Message from the most recent failing call on this thread; "" if none. */
const char* wc_last_error(void);

/* ---- pipeline ---- */

typedef struct wc_run_config wc_run_config;

wc_status wc_run_config_load(const char* path, wc_run_config** out);
void wc_run_config_free(wc_run_config* config);

#define WC_STAGE_SIMULATE 1u
#define WC_STAGE_RECONSTRUCT 2u
#define WC_STAGE_ANALYZE 4u
#define WC_STAGE_REPORT 8u
#define WC_STAGE_ALL 15u

/* Executes the selected stages into out_dir. init_mode_override is "zero",
 * "fitted", or NULL/"" to keep the config's selection. threads >= 1; results
 * are identical for every thread count. */
wc_status wc_run(const wc_run_config* config, const char* out_dir, unsigned stage_mask,
                 const char* init_mode_override, int threads);

/* ---- grids and fields ---- */

typedef struct wc_grid wc_grid;
typedef struct wc_field wc_field;     /* scalar W(x,p) samples */
typedef struct wc_current wc_current; /* (Jx, Jp) samples */

wc_status wc_grid_create(int nx, int np, double x_half, double p_half, wc_grid** out);
void wc_grid_free(wc_grid* grid);
wc_status wc_grid_shape(const wc_grid* grid, int* nx, int* np);
wc_status wc_grid_spacing(const wc_grid* grid, double* hx, double* hp);

/* Squeezed thermal Wigner distribution; r = 0, n_bar = 0 is the vacuum.
 * theta = pi/2 squeezes the x quadrature. */
wc_status wc_squeezed_thermal_wigner(const wc_grid* grid, double r, double theta,
                                     double n_bar, wc_field** out);
void wc_field_free(wc_field* field);
/* Copies the row-major (x outer) samples; len must equal nx*np. */
wc_status wc_field_values(const wc_field* field, double* buffer, int len);
wc_status wc_field_integral(const wc_field* field, double* out);
wc_status wc_field_purity(const wc_field* field, double* out);
wc_status wc_field_save(const wc_field* field, const char* name, const char* path);
wc_status wc_field_load(const char* path, wc_field** out);

/* Ideal squeezer current of a distribution (xi, pump phase theta). */
wc_status wc_system_current(const wc_field* field, double xi, double theta, wc_current** out);
/* Damping-plus-diffusion current for reservoir (gamma, n_bar). */
wc_status wc_env_current(const wc_field* field, double gamma, double n_bar, wc_current** out);
void wc_current_free(wc_current* current);
wc_status wc_current_save(const wc_current* current, const char* name, const char* path);

/* Orientation winding number of the current around a circular loop. */
wc_status wc_winding_number(const wc_current* current, double center_x, double center_p,
                            double radius, int samples, int* out);

/* Squeezing / anti-squeezing noise levels in dB for squeezing parameter r
 * under efficiency eta and RMS pump phase noise theta_rms. */
wc_status wc_degraded_db(double r, double eta, double theta_rms, double* squeezing_db,
                         double* antisqueezing_db);

#ifdef __cplusplus
}
#endif

#endif /* WIGNER_CURRENT_H */
