/* C interface to the juliadim library. Every call returns a jd_status; on
 * failure jd_last_error() holds a message for the calling thread. Objects are
 * opaque and released with their matching *_free function. */
#ifndef JULIADIM_H
#define JULIADIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(JULIADIM_BUILD)
#define JD_API __attribute__((visibility("default")))
#else
#define JD_API
#endif

typedef enum {
    JD_OK = 0,
    JD_INVALID_ARGUMENT = 1,
    JD_OUT_OF_RANGE = 2, /* budget or storage cap exceeded */
    JD_NUMERICAL = 3,    /* bracket failure, non-convergence */
    JD_IO = 4,
    JD_INTERNAL = 5
} jd_status;

JD_API const char* jd_last_error(void);
JD_API const char* jd_status_name(jd_status s);
JD_API const char* jd_version(void);

/* text results */
typedef struct jd_text jd_text;
JD_API const char* jd_text_data(const jd_text* t);
JD_API size_t jd_text_size(const jd_text* t);
JD_API void jd_text_free(jd_text* t);

/* quadratic family */
typedef struct {
    double p_re, p_im, q_re, q_im;
    int regime; /* 0 exterior, 1 tip, 2 small, 3 other */
    double epsilon;
} jd_fixed_points;

JD_API jd_status jd_fixed_points_compute(double c_re, double c_im, jd_fixed_points* out);

typedef struct {
    double value;
    int steps;
    int bounded;
    int flagged;
} jd_green;

JD_API jd_status jd_green_function(double c_re, double c_im, double escape_radius, int max_depth,
                                   jd_green* out);

typedef struct {
    double margin;
    double deviation;
    int membership_violation;
} jd_ce;

JD_API jd_status jd_ce_margin(double c, int depth, double omega_prime, jd_ce* out);

/* point clouds and beta numbers */
typedef struct jd_cloud jd_cloud;

JD_API jd_status jd_cloud_sample(double c_re, double c_im, size_t count, uint64_t seed,
                                 size_t burn_in, jd_cloud** out);
/* xy holds count (re, im) pairs */
JD_API jd_status jd_cloud_from_points(const double* xy, size_t count, jd_cloud** out);
JD_API jd_status jd_cloud_from_csv(const char* text, jd_cloud** out);
JD_API size_t jd_cloud_size(const jd_cloud* cloud);
JD_API jd_status jd_cloud_point(const jd_cloud* cloud, size_t i, double* re, double* im);
JD_API jd_status jd_cloud_csv(const jd_cloud* cloud, jd_text** out); /* re,im */
JD_API void jd_cloud_free(jd_cloud* cloud);

JD_API jd_status jd_beta_at(const jd_cloud* cloud, double x_re, double x_im, double r,
                            double* beta, size_t* count);
/* CSV n,r,beta,count */
JD_API jd_status jd_beta_profile_csv(const jd_cloud* cloud, double x_re, double x_im, int depth,
                                     jd_text** out);

/* components of the depth-n interval cover for real c < -2, CSV left,right,log_length */
JD_API jd_status jd_interval_cover_csv(double c, int depth, jd_text** out);

/* induced repellers */
typedef struct {
    double min_len;
    double C1;
    int max_time;
    int K_max;
} jd_build_options;

JD_API void jd_build_options_default(jd_build_options* opt);

typedef struct jd_repeller jd_repeller;

JD_API jd_status jd_repeller_build(double c, const jd_build_options* opt, jd_repeller** out);
JD_API jd_status jd_repeller_from_json(const char* text, jd_repeller** out);
JD_API jd_status jd_repeller_to_json(const jd_repeller* rep, jd_text** out);
JD_API size_t jd_repeller_branch_count(const jd_repeller* rep);
JD_API void jd_repeller_free(jd_repeller* rep);

typedef struct {
    int ok;
    int itineraries_ok, landing_ok, brackets_ok, disjoint_ok, nonadjacent_ok;
    int coverage_ok, expansion_ok, W_ok, tail_ok;
    double coverage_ratio, measured_C, min_inf_deriv, diam_W_over_sqrt_eps, tail_slope,
        max_distortion;
    char first_failure[256];
} jd_check_report;

JD_API jd_status jd_repeller_check(const jd_repeller* rep, jd_check_report* out);

/* dimensions */
typedef enum {
    JD_METHOD_QSUM = 0,
    JD_METHOD_TRANSFER = 1,
    JD_METHOD_HARMONIC = 2,
    JD_METHOD_MORAN = 3
} jd_method;

typedef struct {
    double value, lo, hi;
    int depth;
    jd_method method;
    int monotone;
} jd_dimension;

JD_API const char* jd_method_name(jd_method m);

JD_API jd_status jd_dim_exterior(double c, double tol, int n_lo, int n_hi, jd_dimension* dim,
                                 double* harmonic_bound, double* green);
JD_API jd_status jd_dim_quasicircle(double c_re, double c_im, int depth, jd_dimension* dim);
JD_API jd_status jd_dim_repeller(const jd_repeller* rep, double tol, jd_dimension* real_only,
                                 jd_dimension* full);
/* word-sum dimension of the linear system plus the independent Moran root */
JD_API jd_status jd_dim_moran(const double* ratios, size_t k, double tol, jd_dimension* dim,
                              double* oracle);

/* fits and statistics */
typedef struct {
    double slope, intercept, r_squared, residual_max;
    size_t n_points;
    int flagged;
} jd_fit;

JD_API jd_status jd_fit_loglog(const double* xs, const double* ys, size_t n, jd_fit* out);

/* sigma ball masses at the critical value, CSV r,mass,confident; the
 * exponent fit over [r_lo, r_hi] goes to *fit when it is not NULL */
JD_API jd_status jd_sigma(double c, size_t orbit_length, uint64_t seed, const double* radii,
                          size_t n_radii, double r_lo, double r_hi, jd_text** csv, jd_fit* fit);

typedef struct {
    double epsilon, beta_norm, I_val, O_val, I_dyadic;
    int O_lower_bound_only;
    double bound_formula, bound_hausTop, bound_mis;
} jd_bounds;

typedef struct {
    size_t orbit_length;
    size_t cloud_size;
    uint64_t seed;
    double R_prime;
    double C, kappa, Z;
} jd_bounds_options;

JD_API void jd_bounds_options_default(jd_bounds_options* opt);
JD_API jd_status jd_bounds_compute(double c, const jd_bounds_options* opt, jd_bounds* out);

/* scans */
typedef struct {
    const char* config_text;  /* key = value text with [sections]; NULL for defaults */
    int apply_env;            /* honour JULIADIM_<SECTION>_<KEY> overrides */
    int workers;              /* > 0 overrides the config */
    int has_seed;
    uint64_t seed;
    const char* output_path;  /* non-NULL overrides the config */
    const char* format;       /* "csv" or "json", non-NULL overrides the config */
} jd_scan_options;

JD_API void jd_scan_options_default(jd_scan_options* opt);
/* runs the scan and writes results plus <path>.manifest.json */
JD_API jd_status jd_scan_run(const jd_scan_options* opt, size_t* rows, size_t* failed);
/* canonical text of a config after overrides */
JD_API jd_status jd_config_normalize(const jd_scan_options* opt, jd_text** out);
/* fit columns of one task from scan CSV text; columns: c, epsilon, value, lo,
 * hi, value2, aux, one-minus-value, value-minus-one, abs-c */
JD_API jd_status jd_scan_fit(const char* csv_text, const char* task, const char* x_column,
                             const char* y_column, jd_fit* out);

#ifdef __cplusplus
}
#endif

#endif
