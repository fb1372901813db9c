/* C interface to the confcov verification library. */
#ifndef CONFCOV_H
#define CONFCOV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define CONFCOV_API __attribute__((visibility("default")))
#else
#define CONFCOV_API
#endif

typedef enum confcov_status {
  CONFCOV_OK = 0,
  CONFCOV_ERR_INVALID_ARGUMENT = 1, /* null pointer, index out of range */
  CONFCOV_ERR_CONFIG = 2,           /* unknown suite, bad key, tolerance below floor */
  CONFCOV_ERR_DOMAIN = 3,           /* mathematical precondition violated */
  CONFCOV_ERR_IO = 4,               /* unreadable config or unwritable report */
  CONFCOV_ERR_INTERNAL = 5
} confcov_status;

typedef enum confcov_check_status { CONFCOV_CHECK_PASS = 0, CONFCOV_CHECK_FAIL = 1, CONFCOV_CHECK_SKIP = 2 } confcov_check_status;

typedef struct confcov_config confcov_config;
typedef struct confcov_report confcov_report;

/* Borrowed view of one record; strings live as long as the report. */
typedef struct confcov_record_view {
  const char* suite;
  const char* check;
  const char* anchor;
  confcov_check_status status;
  int has_residual;
  int exact;            /* 1: identically_zero is meaningful, 0: residual is */
  int identically_zero;
  double residual;
  double runtime_ms;
  const char* params_json;
} confcov_record_view;

CONFCOV_API const char* confcov_version(void);
/* Message of the last failing call on this thread; never null. */
CONFCOV_API const char* confcov_last_error(void);
/* Frees strings returned through char** out-parameters. */
CONFCOV_API void confcov_string_free(char* s);

CONFCOV_API confcov_status confcov_config_new(confcov_config** out);
CONFCOV_API confcov_status confcov_config_load(const char* path, confcov_config** out);
CONFCOV_API confcov_status confcov_config_parse(const char* json_text, confcov_config** out);
CONFCOV_API void confcov_config_free(confcov_config* cfg);
CONFCOV_API confcov_status confcov_config_set_suites(confcov_config* cfg, const char* const* names, size_t count);
CONFCOV_API confcov_status confcov_config_set_seed(confcov_config* cfg, uint64_t seed);
CONFCOV_API confcov_status confcov_config_set_dims(confcov_config* cfg, const int* dims, size_t count);
/* key null: every grid. */
CONFCOV_API confcov_status confcov_config_set_grid(confcov_config* cfg, const char* key, int resolution);
CONFCOV_API confcov_status confcov_config_set_tolerance(confcov_config* cfg, const char* key, double value);
CONFCOV_API confcov_status confcov_config_set_family_size(confcov_config* cfg, int size);
/* format: "json" or "text"; either argument may be null to keep the current value. */
CONFCOV_API confcov_status confcov_config_set_output(confcov_config* cfg, const char* path, const char* format);
CONFCOV_API confcov_status confcov_config_get_output(const confcov_config* cfg, const char** path, const char** format);

CONFCOV_API confcov_status confcov_run(const confcov_config* cfg, confcov_report** out);
CONFCOV_API void confcov_report_free(confcov_report* report);
CONFCOV_API size_t confcov_report_count(const confcov_report* report);
CONFCOV_API size_t confcov_report_failures(const confcov_report* report);
CONFCOV_API confcov_status confcov_report_record(const confcov_report* report, size_t index, confcov_record_view* out);
CONFCOV_API confcov_status confcov_report_render(const confcov_report* report, const char* format, char** out);
CONFCOV_API confcov_status confcov_report_write(const confcov_report* report, const char* path, const char* format);

/* Exact coefficient tables as text; n is a rational such as "7" or "13/3". */
CONFCOV_API confcov_status confcov_b_coefficients(const char* n, int k, char** out);
CONFCOV_API confcov_status confcov_or_coefficients(const char* n, int k, char** out);

/* Rank on the degree-2, 3-variable, {-1,0,1} family in the critical dimension. */
typedef struct confcov_rank_result {
  int rank;
  int witness_degree;
  int certified_zero_degrees[16];
  size_t certified_zero_count;
  size_t samples;
  size_t family_size;
} confcov_rank_result;
/* witness (optional) receives the witnessing conformal factor as text. */
CONFCOV_API confcov_status confcov_rank(const char* invariant, int dim, confcov_rank_result* out, char** witness);

/* 1 when the sigma_k sphere family identity holds with t-degree 2k-1. */
CONFCOV_API confcov_status confcov_sphere_check(int k, int* ok, int* t_degree);

#ifdef __cplusplus
}
#endif

#endif
