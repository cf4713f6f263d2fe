#ifndef FORERUNNER_H
#define FORERUNNER_H

/* C interface to the forerunner library. Units: eV, nm, fs.
   Complex values are passed as double[2] = {re, im}. Every call returns a
   status; on failure frn_last_error() describes it (per thread). */

#include <stddef.h>

#if defined(FRN_BUILDING)
#define FRN_API __attribute__((visibility("default")))
#else
#define FRN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frn_status {
  FRN_OK = 0,
  FRN_ERR_DOMAIN = 1,
  FRN_ERR_REGIME = 2,
  FRN_ERR_CONVERGENCE = 3,
  FRN_ERR_POLE_SEARCH = 4,
  FRN_ERR_SEEDING = 5,
  FRN_ERR_NORMALIZATION = 6,
  FRN_ERR_MONOTONIC_SIGNAL = 7,
  FRN_ERR_FIT = 8,
  FRN_ERR_MISSING_DEPENDENCY = 9,
  FRN_ERR_NO_TRANSITION = 10,
  FRN_ERR_UNDEFINED_FREQUENCY = 11,
  FRN_ERR_QUADRATURE = 12,
  FRN_ERR_DOMAIN_TRUNCATION = 13,
  FRN_ERR_NUMERICAL = 14,
  FRN_ERR_OVERFLOW = 15,
  FRN_ERR_SINGULAR_POINT = 16,
  FRN_ERR_INVALID_ARGUMENT = 20,
  FRN_ERR_INTERNAL = 21
} frn_status;

typedef struct frn_model frn_model;

typedef enum frn_model_kind { FRN_SOURCE = 0, FRN_SHUTTER = 1, FRN_STEP = 2 } frn_model_kind;

/* L <= 0 means no barrier length. */
typedef struct frn_params {
  double mass_ratio;
  double V;
  double E0;
  double L;
} frn_params;

typedef struct frn_scales {
  double k;
  double kappa0;
  double v_sc;
  double omega0;
  double omegaV;
  double penetration_length;
} frn_scales;

typedef struct frn_step_options {
  double rel_tol;
  double floor_fraction;
  size_t max_panels;
  double cut_scale;
} frn_step_options;

typedef struct frn_shutter_options {
  int n_poles; /* 0: smallest converged power of two */
  double converge_tol;
  double rel_tol;
} frn_shutter_options;

typedef struct frn_peak_options {
  int coarse_points;
  double refine_tol;
  double prominence;
  double span_in_gap_times;
  double widen_factor;
  int max_widenings;
} frn_peak_options;

typedef struct frn_peak {
  double x;
  double t_p;
  double density;
  double omega_av;
  int has_omega; /* 0 at a node */
} frn_peak;

typedef struct frn_fit {
  double slope;
  double intercept;
  double r_squared;
} frn_fit;

typedef struct frn_pole {
  int n;
  double re;
  double im;
  double residual;
} frn_pole;

typedef struct frn_timescales {
  double bl_time;
  double tp_opaque;
  double tp_basin;
  double tp_linear;
  double phase_time_asymptote;
  int has_pole;
} frn_timescales;

typedef struct frn_oracle_stats {
  size_t nx;
  size_t steps;
  double x_min;
  double x_max;
} frn_oracle_stats;

FRN_API const char* frn_version(void);
FRN_API const char* frn_last_error(void);
FRN_API const char* frn_status_name(frn_status status);

FRN_API void frn_params_default(frn_params* p);
FRN_API void frn_step_options_default(frn_step_options* o);
FRN_API void frn_shutter_options_default(frn_shutter_options* o);
FRN_API void frn_peak_options_default(frn_peak_options* o);

FRN_API frn_status frn_derive_scales(const frn_params* p, frn_scales* out);
FRN_API frn_status frn_opacity(const frn_params* p, double* out);

FRN_API frn_status frn_source_create(const frn_params* p, frn_model** out);
FRN_API frn_status frn_shutter_create(const frn_params* p, const frn_shutter_options* o, frn_model** out);
FRN_API frn_status frn_step_create(const frn_params* p, const frn_step_options* o, frn_model** out);
FRN_API void frn_model_free(frn_model* m);

FRN_API frn_status frn_model_kind_of(const frn_model* m, frn_model_kind* out);
/* number of retained pole pairs (shutter only) */
FRN_API frn_status frn_model_pole_count(const frn_model* m, int* out);
FRN_API frn_status frn_earliest_time(const frn_model* m, double x, double* out);
FRN_API frn_status frn_psi(const frn_model* m, double x, double t, double out[2]);
FRN_API frn_status frn_dpsi_dt(const frn_model* m, double x, double t, double out[2]);
/* long-time density at x */
FRN_API frn_status frn_stationary_density(const frn_model* m, double x, double* out);

FRN_API frn_status frn_source_terms(const frn_params* p, double x, double t, double pole[2], double saddle[2]);
FRN_API frn_status frn_omega_saddle(const frn_params* p, double x, double t, double* out);

FRN_API frn_status frn_omega_av(const frn_model* m, double x, double t, double* out);
FRN_API frn_status frn_find_peak(const frn_model* m, double x, const frn_peak_options* o, frn_peak* out);
/* curve has n entries; minimum may be refined off the grid */
FRN_API frn_status frn_basin_scan(const frn_model* m, const double* xs, size_t n, const frn_peak_options* o,
                                  frn_peak* curve, frn_peak* minimum, int* interior_minimum, double* tail_slope);
FRN_API frn_status frn_slope_over(const frn_peak* curve, size_t n, double lo, double hi, double* out);
/* *found = 0 when the curve never crosses omega */
FRN_API frn_status frn_frequency_crossover(const frn_peak* curve, size_t n, double omega, double* x, int* found);
FRN_API frn_status frn_fit_tp(const double* E0, const double* t_p_min, size_t n, double V, frn_fit* out);

FRN_API frn_status frn_find_poles(const frn_params* p, int N, frn_pole* out);
FRN_API frn_status frn_pole_energy(const frn_params* p, const frn_pole* pole, double* out);
/* first_pole may be NULL */
FRN_API frn_status frn_reference_timescales(const frn_params* p, double length, const frn_pole* first_pole,
                                            frn_timescales* out);
FRN_API frn_status frn_transition_time(const frn_params* p, double x, double* out);

/* Crank-Nicolson reference for the shutter (FRN_SHUTTER) or step (FRN_STEP)
   initial state; densities at the probes (xs[i], ts[i]). */
FRN_API frn_status frn_oracle_density(const frn_params* p, frn_model_kind structure, double dx, double dt,
                                      const double* xs, const double* ts, size_t n, double* density,
                                      frn_oracle_stats* stats);
FRN_API frn_status frn_relative_l2(const double* model, const double* oracle, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif
