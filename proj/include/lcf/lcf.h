/* C interface to the lattice compress-and-forward toolkit.
 *
 * Every fallible call returns an lcf_status; on failure lcf_last_error()
 * describes the problem until the next call on the same thread. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * _destroy function.
 */
#ifndef LCF_LCF_H
#define LCF_LCF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LCF_API __declspec(dllexport)
#else
#define LCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcf_status {
  LCF_OK = 0,
  LCF_ERR_INVALID = 1,
  LCF_ERR_DEGENERATE = 2,
  LCF_ERR_CONFIG = 3,
  LCF_ERR_INFEASIBLE = 4,
  LCF_ERR_IO = 5,
  LCF_ERR_INTERNAL = 6
} lcf_status;

typedef enum lcf_scheme {
  LCF_SCHEME_LCF1 = 0,
  LCF_SCHEME_LCF2 = 1,
  LCF_SCHEME_AF = 2,
  LCF_SCHEME_DF = 3,
  LCF_SCHEME_OUTER = 4
} lcf_scheme;

typedef enum lcf_family {
  LCF_FAMILY_ZN = 0,
  LCF_FAMILY_D4 = 1,
  LCF_FAMILY_E8 = 2
} lcf_family;

LCF_API const char* lcf_version(void);
LCF_API const char* lcf_last_error(void);
LCF_API const char* lcf_status_name(lcf_status status);

/* Linear channel parameters; gains are amplitudes. */
typedef struct lcf_channel {
  double h1, h2;
  double P1, P2, PR;
  double sigma_R2, sigma_1_2, sigma_2_2;
} lcf_channel;

/* Powers in dB, squared gains and noise variances linear. */
LCF_API lcf_status lcf_channel_from_db(double p1_db, double p2_db, double pr_db, double h1_sq,
                                       double h2_sq, double sigma_r2, double sigma_1_2,
                                       double sigma_2_2, lcf_channel* out);

/* ---- rates and distortions ---------------------------------------------- */

typedef struct lcf_rates {
  double r12, r21;
  double snr_1to2, snr_2to1;
  double alpha, nu;
  double sum_cap; /* +inf unless the scheme has a sum-rate constraint */
  int relabeled;
} lcf_rates;

/* nu is used by LCF2 only; alpha is ignored by AF. */
LCF_API lcf_status lcf_rates_eval(lcf_scheme scheme, const lcf_channel* channel, double alpha,
                                  double nu, lcf_rates* out);

/* Largest R with (R, R) achievable over uniform alpha (and nu) grids. */
LCF_API lcf_status lcf_equal_rate(lcf_scheme scheme, const lcf_channel* channel, size_t n_alpha,
                                  size_t n_nu, double* out);

typedef struct lcf_params {
  double sigma2_lambda1_min;
  double sigma2_lambda0_min; /* LCF2 only, otherwise equal to sigma2_lambda1_min */
  double gamma1_star, gamma2_star;
  double beta;
  int degenerate;
  int relabeled;
  int refined_terminal;
} lcf_params;

/* scheme must be LCF1 or LCF2; nu is ignored for LCF1. */
LCF_API lcf_status lcf_optimal_params(lcf_scheme scheme, const lcf_channel* channel, double alpha,
                                      double nu, double beta, lcf_params* out);

typedef struct lcf_distortion {
  double d1_min, d2_min;
  double gamma1_star, gamma2_star;
  double beta;
  double r_wz;
  int relabeled;
} lcf_distortion;

LCF_API lcf_status lcf_distortions(lcf_scheme scheme, const lcf_channel* channel, double alpha,
                                   double nu, double beta, lcf_distortion* out);

/* ---- lattices ------------------------------------------------------------ */

typedef struct lcf_lattice lcf_lattice;

/* D4 and E8 require dimension 4 and 8. */
LCF_API lcf_status lcf_lattice_create(lcf_family family, size_t dimension, double scale,
                                      lcf_lattice** out);
LCF_API void lcf_lattice_destroy(lcf_lattice* lattice);
LCF_API size_t lcf_lattice_dimension(const lcf_lattice* lattice);
LCF_API double lcf_lattice_second_moment(const lcf_lattice* lattice);
/* x and out hold dimension values; they may alias. */
LCF_API lcf_status lcf_lattice_nearest(const lcf_lattice* lattice, const double* x, double* out);
LCF_API lcf_status lcf_lattice_mod(const lcf_lattice* lattice, const double* x, double* out);

/* ---- Monte-Carlo link simulation ----------------------------------------- */

typedef struct lcf_sim_request {
  lcf_scheme scheme; /* LCF1 or LCF2 */
  lcf_family family;
  double alpha, nu, beta;
  double margin;
  uint64_t n_blocks;
  uint64_t block_dim;
  uint64_t seed;
  unsigned workers;
} lcf_sim_request;

typedef struct lcf_sim_report {
  unsigned k1, k2;
  double realized_margin;
  double e_q_variance, e_q_expected;
  double corr_eq_yr;
  double e_q0_variance, e_q0_expected;
  double t1_error_variance, t1_error_expected;
  double t1_z_eq_variance, t1_z_eq_expected;
  double t1_overload;
  double t2_error_variance, t2_error_expected;
  double t2_z_eq_variance, t2_z_eq_expected;
  double t2_overload;
  double common_only_error_variance;
  double overload_any;
  double max_identity_residual;
  int rate_exceeds_budget;
  uint64_t vector_count;
} lcf_sim_report;

LCF_API void lcf_sim_request_defaults(lcf_sim_request* request);
LCF_API lcf_status lcf_simulate(const lcf_channel* channel, const lcf_sim_request* request,
                                lcf_sim_report* out);

/* ---- experiments and presets --------------------------------------------- */

typedef struct lcf_experiment lcf_experiment;

LCF_API lcf_status lcf_experiment_from_file(const char* path, lcf_experiment** out);
LCF_API lcf_status lcf_experiment_from_string(const char* yaml, lcf_experiment** out);
LCF_API lcf_status lcf_experiment_from_preset(const char* name, lcf_experiment** out);
LCF_API void lcf_experiment_destroy(lcf_experiment* experiment);

/* "region", "equal_rate" (or "equal-rate"), "distortion", "simulate", "asymptotics". */
LCF_API lcf_status lcf_experiment_set_kind(lcf_experiment* experiment, const char* kind);
LCF_API lcf_status lcf_experiment_set_seed(lcf_experiment* experiment, uint64_t seed);
/* A zero size keeps the current value. */
LCF_API lcf_status lcf_experiment_set_grid(lcf_experiment* experiment, size_t n_alpha, size_t n_nu,
                                           size_t n_eta);
LCF_API lcf_status lcf_experiment_set_output(lcf_experiment* experiment, const char* path);
LCF_API lcf_status lcf_experiment_set_workers(lcf_experiment* experiment, unsigned workers);

/* Writes the CSV files, or prints them to stdout when no output path is set. */
LCF_API lcf_status lcf_experiment_run(lcf_experiment* experiment);
LCF_API size_t lcf_experiment_output_count(const lcf_experiment* experiment);
LCF_API const char* lcf_experiment_output_path(const lcf_experiment* experiment, size_t index);

/* Copies the YAML form into buf (NUL-terminated when capacity allows) and
 * stores the full length, excluding the terminator, in *needed. */
LCF_API lcf_status lcf_experiment_serialize(const lcf_experiment* experiment, char* buf,
                                            size_t capacity, size_t* needed);

LCF_API size_t lcf_preset_count(void);
/* NULL when index is out of range. */
LCF_API const char* lcf_preset_name(size_t index);
LCF_API const char* lcf_preset_kind(size_t index);
LCF_API const char* lcf_preset_caption(size_t index);

#ifdef __cplusplus
}
#endif

#endif /* LCF_LCF_H */
