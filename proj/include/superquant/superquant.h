#ifndef SUPERQUANT_H
#define SUPERQUANT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SQ_API __attribute__((visibility("default")))
#else
#define SQ_API
#endif

/* Status codes returned by every sq_ function that can fail. */
typedef enum sq_status {
  SQ_OK = 0,
  SQ_ERR_SYNTAX = 1,
  SQ_ERR_UNKNOWN_IDENTIFIER = 2,
  SQ_ERR_ARITY = 3,
  SQ_ERR_DIMENSION = 4,
  SQ_ERR_DOMAIN = 5,
  SQ_ERR_NON_FINITE = 6,
  SQ_ERR_RESOURCE = 7,
  SQ_ERR_INVALID_ARGUMENT = 8,
  SQ_ERR_UNCERTIFIED = 9,
  SQ_ERR_CONFIG = 10,
  SQ_ERR_IO = 11,
  SQ_ERR_NULL_ARGUMENT = 12,
  SQ_ERR_INTERNAL = 13
} sq_status;

/* Command exit codes carried by results. */
enum { SQ_EXIT_PASS = 0, SQ_EXIT_CHECK_FAILURE = 1, SQ_EXIT_CONFIG_ERROR = 2, SQ_EXIT_DISAGREEMENT = 3 };

typedef struct sq_config sq_config;
typedef struct sq_result sq_result;
typedef struct sq_element sq_element;
typedef struct sq_potential sq_potential;

SQ_API const char* sq_version(void);
/* Message of the last failure on this thread; empty when none. */
SQ_API const char* sq_last_error(void);

/* Configuration documents (JSON). */
SQ_API sq_status sq_config_parse(const char* text, sq_config** out);
SQ_API sq_status sq_config_set_seed(sq_config* cfg, uint64_t seed);
SQ_API const char* sq_config_output_dir(const sq_config* cfg);
SQ_API const char* sq_config_output_format(const sq_config* cfg);
/* FNV-1a hash of the canonical config text, 16 hex digits. */
SQ_API const char* sq_config_hash(const sq_config* cfg);
SQ_API void sq_config_free(sq_config* cfg);

/* Runs "verify-kahler", "classify" or "model-check". */
SQ_API sq_status sq_run(const char* command, const sq_config* cfg, int threads, sq_result** out);
SQ_API sq_status sq_berezin_eval(const char* element, int k, sq_result** out);
SQ_API sq_status sq_selftest(sq_result** out);

SQ_API int sq_result_exit_code(const sq_result* r);
SQ_API const char* sq_result_json(const sq_result* r);
/* Empty unless the command produces CSV. */
SQ_API const char* sq_result_csv(const sq_result* r);
SQ_API const char* sq_result_summary(const sq_result* r);
SQ_API void sq_result_free(sq_result* r);

/* Grassmann elements on 2k generators. */
SQ_API sq_status sq_element_parse(const char* text, int k, sq_element** out);
SQ_API sq_status sq_element_multiply(const sq_element* a, const sq_element* b, sq_element** out);
SQ_API sq_status sq_element_add(const sq_element* a, const sq_element* b, sq_element** out);
SQ_API sq_status sq_element_star(const sq_element* a, sq_element** out);
SQ_API sq_status sq_element_derivation(const sq_element* a, int slot, sq_element** out);
/* Text is owned by the element and valid until it is freed. */
SQ_API const char* sq_element_text(const sq_element* a);
SQ_API const char* sq_element_berezin(const sq_element* a);
SQ_API int sq_element_k(const sq_element* a);
SQ_API void sq_element_free(sq_element* a);

/* Potentials on R^(n+m). */
SQ_API sq_status sq_potential_parse(const char* text, int n, int m, sq_potential** out);
SQ_API sq_status sq_potential_f1(int n, int m, sq_potential** out);
SQ_API sq_status sq_potential_f2(const double* mu, size_t len, double epsilon, int n, int m, sq_potential** out);
SQ_API int sq_potential_dim(const sq_potential* p);
/* gradient (dim entries) and hessian (dim*dim, row major) may be NULL. */
SQ_API sq_status sq_potential_eval(const sq_potential* p, const double* x, size_t len, double* value,
                                   double* gradient, double* hessian);
/* Grid certification over [lo, hi]^dim; *certified is 1 on success, 0 with
   the refutation witness in `witness` (dim entries, may be NULL). */
SQ_API sq_status sq_potential_certify(sq_potential* p, double lo, double hi, int grid_density, double tau,
                                      int* certified, double* witness);
/* Log of the truncated weighted norm integral with the default schedule.
   *verdict: 0 converges, 1 diverges, 2 inconclusive. */
SQ_API sq_status sq_weighted_norm_integral(const sq_potential* p, const double* lambda, size_t len,
                                           int* verdict, double* log_value);
SQ_API void sq_potential_free(sq_potential* p);

#ifdef __cplusplus
}
#endif

#endif
