#ifndef TRICOMI_TRICOMI_H
#define TRICOMI_TRICOMI_H

/*
 * C interface to the tricomi library: special functions, the fundamental
 * system of y'' = lambda^2 t^m y, test functions, exponent algebra,
 * iteration engines and the radial solver for u_tt - t^m Lap u = |u|^p.
 *
 * Every function returns a tricomi_status; on failure tricomi_last_error()
 * describes the problem (thread-local, valid until the next call on the
 * same thread). Handles are opaque and released with their _free function.
 */

#include <stddef.h>

#if defined(TRICOMI_BUILDING_LIBRARY)
#define TRICOMI_API __attribute__((visibility("default")))
#else
#define TRICOMI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tricomi_status {
    TRICOMI_OK = 0,
    TRICOMI_ERR_DOMAIN = 1,    /* argument outside the mathematical domain */
    TRICOMI_ERR_SCOPE = 2,     /* exponent outside the regime an engine covers */
    TRICOMI_ERR_CONFIG = 3,    /* invalid configuration */
    TRICOMI_ERR_NUMERICAL = 4, /* stiffness, nonconvergence, failed run */
    TRICOMI_ERR_FIT = 5,       /* not enough data for a fit */
    TRICOMI_ERR_ARGUMENT = 6,  /* null pointer or index out of range */
    TRICOMI_ERR_INTERNAL = 7
} tricomi_status;

TRICOMI_API const char* tricomi_last_error(void);
TRICOMI_API const char* tricomi_version(void);
TRICOMI_API const char* tricomi_status_name(tricomi_status status);

/* ---------------------------------------------------------------- specfun */

typedef enum tricomi_kummer_regime {
    TRICOMI_KUMMER_IDENTITY = 0,
    TRICOMI_KUMMER_SERIES = 1,
    TRICOMI_KUMMER_KUMMER_SERIES = 2,
    TRICOMI_KUMMER_ASYMPTOTIC = 3
} tricomi_kummer_regime;

TRICOMI_API tricomi_status tricomi_kummer_m(double a, double b, double z, double* value);
TRICOMI_API tricomi_status tricomi_kummer_m_eval(double a, double b, double z, double* value, int* regime,
                                                 double* rel_error);
TRICOMI_API tricomi_status tricomi_kummer_m_deriv(double a, double b, double z, double* value);
TRICOMI_API const char* tricomi_kummer_regime_name(int regime);
TRICOMI_API tricomi_status tricomi_varphi(int n, double r, double* value);
TRICOMI_API tricomi_status tricomi_varphi_scaled(int n, double r, double* value);
TRICOMI_API tricomi_status tricomi_sphere_measure(int n, double* value);

/* -------------------------------------------------------------------- ode */

typedef struct tricomi_fundamental {
    double t;
    double v1;
    double dv1;
    double v2;
    double dv2;
    double wronskian;
} tricomi_fundamental;

TRICOMI_API tricomi_status tricomi_phi_of_t(double m, double t, double* value);
TRICOMI_API tricomi_status tricomi_fundamental_pair(double m, double lambda, double t, tricomi_fundamental* out);
TRICOMI_API tricomi_status tricomi_phi1(double t, double s, double m, double lambda, double* value);
TRICOMI_API tricomi_status tricomi_phi2(double t, double s, double m, double lambda, double* value);
TRICOMI_API tricomi_status tricomi_phi2_ratio(double t, double s, double m, double lambda, double* value);
TRICOMI_API tricomi_status tricomi_ode_oracle(double m, double lambda, double t_end, double y0, double dy0, double tol,
                                              double* y, double* dy);

/* ---------------------------------------------------------------- testfun */

typedef struct tricomi_testfn_params {
    double q;
    double lambda0;
    double R;
    int n;
    double m;
} tricomi_testfn_params;

typedef struct tricomi_grid_spec {
    double t_min;
    double t_max;
    double t_first;
    int t_points;
    int x_points;
    int s_points;
} tricomi_grid_spec;

typedef struct tricomi_bound_row {
    char part[8];
    double t;
    double s;
    double x_norm;
    double value;
    double envelope;
    double ratio;
} tricomi_bound_row;

typedef struct tricomi_part_summary {
    char part[8];
    int lower; /* 1: inf of the ratio, 0: sup */
    double constant;
    int points;
    int excluded;
    int ok;
} tricomi_part_summary;

typedef struct tricomi_stability {
    tricomi_part_summary coarse;
    tricomi_part_summary fine;
    double relative_change;
    int stable;
} tricomi_stability;

typedef struct tricomi_bound_report tricomi_bound_report;

TRICOMI_API void tricomi_testfn_params_default(tricomi_testfn_params* params);
TRICOMI_API void tricomi_grid_spec_default(tricomi_grid_spec* grid);
TRICOMI_API tricomi_status tricomi_xi_q(double x_norm, double t, double s, const tricomi_testfn_params* params,
                                        double* value, double* abs_error);
TRICOMI_API tricomi_status tricomi_eta_q(double x_norm, double t, double s, const tricomi_testfn_params* params,
                                         double* value, double* abs_error);
/* parts: comma-separated subset of "i", "i-eta", "ii", "iii" */
TRICOMI_API tricomi_status tricomi_envelope_report(const tricomi_testfn_params* params, const tricomi_grid_spec* grid,
                                                  const char* parts, tricomi_bound_report** out);
TRICOMI_API size_t tricomi_bound_report_row_count(const tricomi_bound_report* report);
TRICOMI_API tricomi_status tricomi_bound_report_row(const tricomi_bound_report* report, size_t index,
                                                    tricomi_bound_row* row);
TRICOMI_API size_t tricomi_bound_report_part_count(const tricomi_bound_report* report);
TRICOMI_API tricomi_status tricomi_bound_report_part(const tricomi_bound_report* report, size_t index,
                                                     tricomi_part_summary* summary);
TRICOMI_API void tricomi_bound_report_free(tricomi_bound_report* report);
TRICOMI_API tricomi_status tricomi_refinement_check(const tricomi_testfn_params* params,
                                                    const tricomi_grid_spec* grid, const char* part, double tol,
                                                    tricomi_stability* out);

/* -------------------------------------------------------------- exponents */

typedef struct tricomi_context {
    double m;
    int n;
    double p;
} tricomi_context;

typedef struct tricomi_iteration_exponents {
    double mu;
    double a1;
    double b1;
    double alpha_it;
    double beta_it;
} tricomi_iteration_exponents;

typedef enum tricomi_regime {
    TRICOMI_SUBCRITICAL = 0,
    TRICOMI_CRITICAL = 1,
    TRICOMI_SUPERCRITICAL = 2
} tricomi_regime;

TRICOMI_API tricomi_status tricomi_gamma(const tricomi_context* ctx, double* value);
TRICOMI_API tricomi_status tricomi_p_crit(double m, int n, double* value);
TRICOMI_API tricomi_status tricomi_strauss_exponent(int n, double* value);
TRICOMI_API tricomi_status tricomi_exponents_of(const tricomi_context* ctx, tricomi_iteration_exponents* out);
TRICOMI_API tricomi_status tricomi_frame_q(const tricomi_context* ctx, double* value);
TRICOMI_API tricomi_status tricomi_critical_identities(const tricomi_context* ctx, double* frame, double* initiate);
TRICOMI_API tricomi_status tricomi_classify(const tricomi_context* ctx, double tol, int* regime);
TRICOMI_API const char* tricomi_regime_name(int regime);
TRICOMI_API tricomi_status tricomi_lifespan_exponent(const tricomi_context* ctx, double* value);
TRICOMI_API tricomi_status tricomi_lifespan_prediction(const tricomi_context* ctx, double eps, double constant,
                                                       double* value);

/* -------------------------------------------------------------- iteration */

typedef struct tricomi_subcritical_info {
    double T0;
    double C0;
    double log_D1;
    double log_C3;
    double Sp_inf;
    int threshold_index;
    double alpha_it;
    double beta_it;
    int size;
} tricomi_subcritical_info;

typedef struct tricomi_subcritical_row {
    int j;
    double a;
    double b;
    double a_closed;
    double b_closed;
    double log_D;
    double log_D_lower;
    double log_D_lower_closed;
    double log_D_bound;
} tricomi_subcritical_row;

typedef struct tricomi_critical_constants {
    double C;
    double C0;
    double B1;
    double N_denominator; /* 0: 3^2 * 7 * (p+1) */
} tricomi_critical_constants;

typedef struct tricomi_critical_info {
    double eps;
    double M;
    double log_N;
    double log_E;
    double log_C1;
    int size; /* rows j = 0 .. size-1 */
} tricomi_critical_info;

typedef struct tricomi_critical_row {
    int j;
    double a;
    double b;
    double a_rec;
    double b_rec;
    double l;
    double S;
    double log_C;
    double log_C_rec;
} tricomi_critical_row;

typedef struct tricomi_crossing {
    int found;
    int j;
    double t;
    double log_t;
} tricomi_crossing;

typedef struct tricomi_blowup_estimate {
    double C4;
    double exponent;
    double bound;
} tricomi_blowup_estimate;

typedef struct tricomi_scaling_point {
    double eps;
    double log_T;
    double log_log_T;
    int j;
} tricomi_scaling_point;

typedef struct tricomi_subcritical tricomi_subcritical;
typedef struct tricomi_critical tricomi_critical;

TRICOMI_API tricomi_status tricomi_subcritical_run(const tricomi_context* ctx, double D1, double T0, int jmax,
                                                   double C0, tricomi_subcritical** out);
TRICOMI_API tricomi_status tricomi_subcritical_get_info(const tricomi_subcritical* seq, tricomi_subcritical_info* out);
TRICOMI_API tricomi_status tricomi_subcritical_row_at(const tricomi_subcritical* seq, int j,
                                                      tricomi_subcritical_row* out);
TRICOMI_API tricomi_status tricomi_j_function(const tricomi_subcritical* seq, double t, double* value);
TRICOMI_API tricomi_status tricomi_j_threshold_closed_form(const tricomi_subcritical* seq, double* value);
TRICOMI_API tricomi_status tricomi_j_first_crossing(const tricomi_subcritical* seq, double level, double t_hi,
                                                    double* value);
TRICOMI_API tricomi_status tricomi_log_lower_bound(const tricomi_subcritical* seq, int j, double t, double* value);
TRICOMI_API tricomi_status tricomi_subcritical_threshold(const tricomi_subcritical* seq, double log_ceiling,
                                                         double t_hi, tricomi_crossing* out);
TRICOMI_API void tricomi_subcritical_free(tricomi_subcritical* seq);
TRICOMI_API tricomi_status tricomi_blowup_time_estimate(const tricomi_context* ctx, double eps, double C2, double T0,
                                                        double C0, tricomi_blowup_estimate* out);

TRICOMI_API void tricomi_critical_constants_default(tricomi_critical_constants* constants);
TRICOMI_API tricomi_status tricomi_critical_run(const tricomi_context* ctx, double eps,
                                                const tricomi_critical_constants* constants, int jmax,
                                                tricomi_critical** out);
TRICOMI_API tricomi_status tricomi_critical_get_info(const tricomi_critical* seq, tricomi_critical_info* out);
TRICOMI_API tricomi_status tricomi_critical_row_at(const tricomi_critical* seq, int j, tricomi_critical_row* out);
TRICOMI_API tricomi_status tricomi_log_slicing_bound(const tricomi_critical* seq, int j, double log_t, double* value);
TRICOMI_API tricomi_status tricomi_log_initiation_bound(const tricomi_critical* seq, double t, double* value);
TRICOMI_API tricomi_status tricomi_critical_threshold(const tricomi_critical* seq, double log_ceiling,
                                                      double log_t_hi, tricomi_crossing* out);
TRICOMI_API void tricomi_critical_free(tricomi_critical* seq);

/* points must hold count entries */
TRICOMI_API tricomi_status tricomi_subcritical_scaling(const tricomi_context* ctx, const double* eps, size_t count,
                                                       double C2, double T0, int jmax, double log_ceiling,
                                                       tricomi_scaling_point* points, double* slope,
                                                       double* theory_slope);
TRICOMI_API tricomi_status tricomi_critical_scaling(const tricomi_context* ctx, const double* eps, size_t count,
                                                    const tricomi_critical_constants* constants, int jmax,
                                                    double log_ceiling, tricomi_scaling_point* points, double* slope,
                                                    double* theory_slope);

/* -------------------------------------------------------------------- pde */

typedef enum tricomi_profile { TRICOMI_PROFILE_BUMP4 = 0, TRICOMI_PROFILE_SMOOTH = 1 } tricomi_profile;

typedef struct tricomi_run_config {
    double m;
    int n;
    double p;
    double R;
    double eps;
    double dx;
    double domain_radius; /* 0: auto */
    double t_max;
    double cfl;
    double blowup_threshold;
    double confirm_threshold;
    int profile;
    double u1_scale;
    int nonlinear;
    double support_tol; /* 0: dx^2 */
    double f_interval;  /* 0: F not sampled */
    double q;
    int q_auto;
    double lambda0;
    int record_stride;
} tricomi_run_config;

typedef struct tricomi_record {
    double eps;
    double T_blowup; /* NaN when censored */
    double T_confirm;
    int censored;
    int threshold_consistent;
    double peak;
    double t_end;
    long steps;
} tricomi_record;

typedef struct tricomi_series_row {
    double t;
    double max_u;
    double G;
    double F; /* NaN where not sampled */
    double support;
    double Lp;
} tricomi_series_row;

typedef struct tricomi_fit {
    int mode; /* 0 subcritical (log T), 1 critical (log log T) */
    double slope;
    double intercept;
    double residual;
    double slope_stderr;
    int used;
    int excluded;
} tricomi_fit;

typedef struct tricomi_window {
    double eps;
    double t_lo;
    double t_hi;
    double min_ratio;
    double max_ratio;
    int points;
} tricomi_window;

typedef struct tricomi_solver tricomi_solver;
typedef struct tricomi_run tricomi_run;
typedef struct tricomi_scan tricomi_scan;

TRICOMI_API void tricomi_run_config_default(tricomi_run_config* cfg);
TRICOMI_API tricomi_status tricomi_run_config_validate(const tricomi_run_config* cfg);
TRICOMI_API const char* tricomi_profile_name(int profile);
TRICOMI_API tricomi_status tricomi_profile_from_name(const char* name, int* profile);

TRICOMI_API tricomi_status tricomi_solver_create(const tricomi_run_config* cfg, tricomi_solver** out);
TRICOMI_API tricomi_status tricomi_solver_step(tricomi_solver* solver);
TRICOMI_API double tricomi_solver_time(const tricomi_solver* solver);
TRICOMI_API size_t tricomi_solver_size(const tricomi_solver* solver);
/* copies min(size, capacity) radii and values */
TRICOMI_API tricomi_status tricomi_solver_field(const tricomi_solver* solver, double* r, double* u, size_t capacity);
TRICOMI_API tricomi_status tricomi_solver_functionals(const tricomi_solver* solver, double* G, double* Lp,
                                                      double* max_u, double* support);
TRICOMI_API tricomi_status tricomi_solver_functional_F(const tricomi_solver* solver, double* F);
TRICOMI_API void tricomi_solver_free(tricomi_solver* solver);

TRICOMI_API tricomi_status tricomi_run_until_blowup(const tricomi_run_config* cfg, tricomi_run** out);
TRICOMI_API tricomi_status tricomi_run_get_record(const tricomi_run* run, tricomi_record* out);
TRICOMI_API size_t tricomi_run_series_count(const tricomi_run* run);
TRICOMI_API tricomi_status tricomi_run_series_row(const tricomi_run* run, size_t index, tricomi_series_row* out);
TRICOMI_API double tricomi_run_max_support_excess(const tricomi_run* run);
TRICOMI_API tricomi_status tricomi_run_lp_lower_bound(const tricomi_run* run, double T0, tricomi_window* out);
TRICOMI_API tricomi_status tricomi_run_second_difference(const tricomi_run* run, double t_stop,
                                                         double* max_relative, int* points);
TRICOMI_API tricomi_status tricomi_run_frame_check(const tricomi_run* run, double t_stop, double* min_ratio_ball,
                                                   double* min_ratio_bare);
TRICOMI_API void tricomi_run_free(tricomi_run* run);

/* threads = 0 uses the hardware concurrency */
TRICOMI_API tricomi_status tricomi_lifespan_scan(const tricomi_run_config* templ, const double* eps, size_t count,
                                                 int threads, tricomi_scan** out);
TRICOMI_API size_t tricomi_scan_count(const tricomi_scan* scan);
TRICOMI_API tricomi_status tricomi_scan_record(const tricomi_scan* scan, size_t index, tricomi_record* out);
TRICOMI_API int tricomi_scan_monotone(const tricomi_scan* scan);
TRICOMI_API int tricomi_scan_censored(const tricomi_scan* scan);
TRICOMI_API void tricomi_scan_free(tricomi_scan* scan);

TRICOMI_API tricomi_status tricomi_fit_scaling(const tricomi_record* records, size_t count, int mode,
                                               tricomi_fit* out);

#ifdef __cplusplus
}
#endif

#endif
