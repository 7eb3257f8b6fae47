#ifndef GKT4_H
#define GKT4_H

/* C interface of the generalized Kaehler T^4 lab. All handles are opaque and
   owned by the caller once returned; free them with the matching *_free. On a
   non-OK status, gkt4_last_error() holds a message for the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(GKT4_BUILDING)
#define GKT4_API __attribute__((visibility("default")))
#else
#define GKT4_API
#endif

typedef enum gkt4_status {
  GKT4_OK = 0,
  GKT4_ERR_INVALID_ARGUMENT,
  GKT4_ERR_NON_POSITIVE_METRIC,
  GKT4_ERR_SINGULAR_FORM,
  GKT4_ERR_BROKEN_STRUCTURE,
  GKT4_ERR_DEGENERATE_PAIR,
  GKT4_ERR_POSITIVITY_LOSS,
  GKT4_ERR_IO,
  GKT4_ERR_FORMAT_MISMATCH,
  GKT4_ERR_DIMS_MISMATCH,
  GKT4_ERR_CONFIG,
  GKT4_ERR_PRECONDITION,
  GKT4_ERR_INTERNAL
} gkt4_status;

typedef enum gkt4_diff_rule { GKT4_DIFF_SPECTRAL = 0, GKT4_DIFF_FD4 = 1 } gkt4_diff_rule;

typedef enum gkt4_termination {
  GKT4_REACHED_END = 0,
  GKT4_TERM_POSITIVITY_LOSS = 1,
  GKT4_CONVERGED = 2
} gkt4_termination;

typedef struct gkt4_state gkt4_state;
typedef struct gkt4_config gkt4_config;
typedef struct gkt4_trace gkt4_trace;
typedef struct gkt4_report gkt4_report;

GKT4_API const char* gkt4_last_error(void);
GKT4_API const char* gkt4_status_name(gkt4_status status);
GKT4_API const char* gkt4_version(void);

/* States */
typedef struct gkt4_state_info {
  int dims[4];
  double t;
  int valid;
  double margin;
  double lambda;  /* 0 when the pair is degenerate */
  double sup_phi_dev;
} gkt4_state_info;

GKT4_API gkt4_status gkt4_state_flat(const int dims[4], gkt4_diff_rule rule, gkt4_state** out);
GKT4_API gkt4_status gkt4_state_load(const char* path, gkt4_diff_rule rule, gkt4_state** out);
GKT4_API gkt4_status gkt4_state_save(const gkt4_state* s, const char* path);
GKT4_API gkt4_status gkt4_state_info_get(const gkt4_state* s, gkt4_state_info* out);
GKT4_API void gkt4_state_free(gkt4_state* s);

/* Run configuration (flat key = value text) */
typedef struct gkt4_config_info {
  int dims[4];
  gkt4_diff_rule diff;
  double deform_t_end;
  double flow_t_end;
  long checkpoint_stride;
} gkt4_config_info;

GKT4_API gkt4_status gkt4_config_default(gkt4_config** out);
GKT4_API gkt4_status gkt4_config_parse(const char* text, gkt4_config** out);
GKT4_API gkt4_status gkt4_config_load(const char* path, gkt4_config** out);
GKT4_API gkt4_status gkt4_config_info_get(const gkt4_config* c, gkt4_config_info* out);
/* Empty string when unset. Valid until the config is freed. */
GKT4_API const char* gkt4_config_snapshot_out(const gkt4_config* c);
GKT4_API const char* gkt4_config_csv_out(const gkt4_config* c);
/* Documented keys with defaults. Static storage. */
GKT4_API const char* gkt4_config_reference(void);
GKT4_API void gkt4_config_free(gkt4_config* c);

/* Isotopy with the configured generator over [0, deform.t_end]. On
   GKT4_ERR_POSITIVITY_LOSS, *reached_t (if non-null) is the last valid time. */
GKT4_API gkt4_status gkt4_deform(const gkt4_state* in, const gkt4_config* c, gkt4_state** out, double* reached_t);

/* Flow */
typedef void (*gkt4_step_callback)(long step, const gkt4_state* s, void* user);

typedef struct gkt4_row {
  double t, lambda, sup_phi_dev, sup_grad_phi_sq, F_value, dF_dt, energy_rhs, mu_l2, torsion_l2, pos_margin,
      heat_residual;
} gkt4_row;

typedef struct gkt4_trace_info {
  size_t rows;
  long steps;
  double dt;
  gkt4_termination termination;
  int has_final_state;
} gkt4_trace_info;

/* Positivity loss ends the run early but still returns GKT4_OK with a trace. */
GKT4_API gkt4_status gkt4_flow(const gkt4_state* in, const gkt4_config* c, gkt4_step_callback cb, void* user,
                               gkt4_trace** out);
/* The uniform step gkt4_flow would take from this state. */
GKT4_API gkt4_status gkt4_flow_timestep(const gkt4_state* in, const gkt4_config* c, double* out);
GKT4_API gkt4_status gkt4_trace_info_get(const gkt4_trace* t, gkt4_trace_info* out);
GKT4_API gkt4_status gkt4_trace_row(const gkt4_trace* t, size_t index, gkt4_row* out);
GKT4_API const char* gkt4_trace_message(const gkt4_trace* t);
GKT4_API gkt4_status gkt4_trace_final_state(const gkt4_trace* t, gkt4_state** out);
GKT4_API gkt4_status gkt4_trace_write_csv(const gkt4_trace* t, const char* path);
GKT4_API gkt4_status gkt4_trace_load_csv(const char* path, gkt4_trace** out);
GKT4_API void gkt4_trace_free(gkt4_trace* t);

/* Identity battery. fault_check may be NULL; otherwise that check gets a
   perturbation of fault_size. */
typedef struct gkt4_check {
  const char* name;
  double residual;
  double threshold;
  int pass;
} gkt4_check;

GKT4_API gkt4_status gkt4_verify_pointwise(unsigned long long seed, int count, const char* fault_check,
                                           double fault_size, gkt4_report** out);
GKT4_API gkt4_status gkt4_verify_field(const gkt4_state* s, double threshold, const char* fault_check,
                                       double fault_size, gkt4_report** out);
GKT4_API gkt4_status gkt4_verify_flow(const gkt4_trace* t, double dt, const char* fault_check, double fault_size,
                                      gkt4_report** out);
GKT4_API int gkt4_report_passed(const gkt4_report* r);
GKT4_API size_t gkt4_report_count(const gkt4_report* r);
GKT4_API gkt4_status gkt4_report_check(const gkt4_report* r, size_t index, gkt4_check* out);
GKT4_API const char* gkt4_report_table(const gkt4_report* r);
GKT4_API const char* gkt4_report_rows(const gkt4_report* r);
GKT4_API void gkt4_report_free(gkt4_report* r);

/* Functionals of a single state */
typedef struct gkt4_functionals {
  double lambda;
  double F_value;
  double dF_dt;
  double energy_rhs;
  double mu_l2;
  double gscal_mean;
  double torsion_l2;
} gkt4_functionals;

GKT4_API gkt4_status gkt4_functional_report(const gkt4_state* s, gkt4_functionals* out);

#ifdef __cplusplus
}
#endif

#endif
