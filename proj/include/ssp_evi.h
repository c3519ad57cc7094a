/* C interface to the SSP planning and optimistic-operator library. */
#ifndef SSP_EVI_H
#define SSP_EVI_H

#include <stddef.h>
#include <stdint.h>

#if defined(SSP_EVI_BUILD)
#define SSP_API __attribute__((visibility("default")))
#else
#define SSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ssp_instance ssp_instance;
typedef struct ssp_report ssp_report;

typedef enum {
  SSP_OK = 0,
  SSP_VERIFICATION_FAILED = 1, /* report produced, but a check failed */
  SSP_PARSE_ERROR = 2,
  SSP_VALIDATION_ERROR = 3,
  SSP_RUNTIME_ERROR = 4, /* numerical failure: non-convergence, singular system, ... */
  SSP_IO_ERROR = 5
} ssp_status;

typedef enum { SSP_FORMAT_JSON = 0, SSP_FORMAT_CSV = 1 } ssp_format;

typedef struct {
  double tol;
  long max_iter;
  uint64_t seed;
  ssp_format format;
} ssp_options;

typedef struct {
  const char* algorithm; /* "evi" or "greedy" */
  const char* planner;   /* "exact" or "dagger" */
  long episodes;
  double delta;
  double b_star;
  double epsilon_explore;
  double fixed_epsilon; /* used when has_fixed_epsilon != 0 */
  int has_fixed_epsilon;
  int use_star;
  int exact_model; /* pre-seed counts from the true transitions */
} ssp_learn_options;

typedef struct {
  double p11, p12, p21, p22;
  double eps1, eps2;
  double c1, c2;
} ssp_two_state_params;

SSP_API void ssp_options_init(ssp_options* opts);
SSP_API void ssp_learn_options_init(ssp_learn_options* opts);

/* Message for the last failing call on this thread; empty when none. */
SSP_API const char* ssp_last_error(void);
/* Short name of the internal error kind of the last failure. */
SSP_API const char* ssp_last_error_kind(void);

SSP_API ssp_status ssp_instance_load(const char* path, ssp_instance** out);
SSP_API ssp_status ssp_instance_parse(const char* json_text, ssp_instance** out);
SSP_API ssp_status ssp_two_state_instance(const ssp_two_state_params* params, ssp_instance** out);
SSP_API void ssp_instance_free(ssp_instance* inst);
SSP_API int ssp_instance_num_states(const ssp_instance* inst);
/* Canonical JSON encoding; the caller frees the result with ssp_string_free. */
SSP_API ssp_status ssp_instance_encode(const ssp_instance* inst, char** out);
SSP_API void ssp_string_free(char* text);

SSP_API ssp_status ssp_plan(const ssp_instance* inst, const ssp_options* opts, ssp_report** out);
SSP_API ssp_status ssp_evi(const ssp_instance* inst, const ssp_options* opts, ssp_report** out);
SSP_API ssp_status ssp_bounds(const ssp_instance* inst, int state, int action_id, const double* x, size_t n,
                      int grid_resolution, const ssp_options* opts, ssp_report** out);
/* variant: bound variant name; floor: "cost" or "zero"; x0 may be NULL;
   arrow_field: NULL or "lo:hi:steps". */
SSP_API ssp_status ssp_dagger(const ssp_instance* inst, const char* variant, const char* floor, const double* x0, size_t n,
                      const char* arrow_field, const ssp_options* opts, ssp_report** out);
/* Figure presets: "fig2", "fig3", "fig4", "fig5". */
SSP_API ssp_status ssp_dagger_preset(const char* name, const ssp_options* opts, ssp_report** out);
SSP_API ssp_status ssp_two_state(const ssp_two_state_params* params, const ssp_options* opts, ssp_report** out);
SSP_API ssp_status ssp_program(const ssp_instance* inst, int grid_resolution, const ssp_options* opts, ssp_report** out);
SSP_API ssp_status ssp_learn(const ssp_instance* inst, const ssp_learn_options* learn, const ssp_options* opts,
                     ssp_report** out);
SSP_API ssp_status ssp_verify(const char* corpus_dir, const ssp_options* opts, ssp_report** out);

/* Report rendered in the format chosen in ssp_options. */
SSP_API const char* ssp_report_text(const ssp_report* report);
/* Headline numbers of the report (values, bounds or regret trace). */
SSP_API size_t ssp_report_values(const ssp_report* report, const double** values);
SSP_API int ssp_report_passed(const ssp_report* report);
SSP_API void ssp_report_free(ssp_report* report);

#ifdef __cplusplus
}
#endif

#endif
