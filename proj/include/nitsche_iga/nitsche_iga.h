/*
 * C interface to the nitsche_iga library.
 *
 * All objects are opaque handles created by niga_*_create / niga_*_load /
 * niga_*_parse and released by the matching niga_*_destroy. Every call that
 * can fail returns a niga_status; niga_last_error() gives the message of the
 * most recent failure on the calling thread.
 */
#ifndef NITSCHE_IGA_H
#define NITSCHE_IGA_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NITSCHE_IGA_BUILDING)
#    define NIGA_API __declspec(dllexport)
#  else
#    define NIGA_API __declspec(dllimport)
#  endif
#else
#  define NIGA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum niga_status {
    NIGA_OK = 0,
    NIGA_ERR_NOT_NONDECREASING,
    NIGA_ERR_NOT_OPEN,
    NIGA_ERR_EXCESS_MULTIPLICITY,
    NIGA_ERR_UNSUPPORTED_DEGREE,
    NIGA_ERR_OUT_OF_DOMAIN,
    NIGA_ERR_INDEX_OUT_OF_RANGE,
    NIGA_ERR_UNSUPPORTED_ORDER,
    NIGA_ERR_DEGENERATE_JACOBIAN,
    NIGA_ERR_INCOMPATIBLE_GEOMETRY,
    NIGA_ERR_UNKNOWN_CASE,
    NIGA_ERR_SINGULAR_GRAM,
    NIGA_ERR_SINGULAR_MATRIX,
    NIGA_ERR_CONVERGENCE_FAILURE,
    NIGA_ERR_NOT_SPD,
    NIGA_ERR_INSUFFICIENT_LEVELS,
    NIGA_ERR_CONFIG,
    NIGA_ERR_IO,
    NIGA_ERR_INVALID_ARGUMENT,
    NIGA_ERR_INTERNAL
} niga_status;

typedef struct niga_knots niga_knots;
typedef struct niga_config niga_config;
typedef struct niga_discretization niga_discretization;
typedef struct niga_matrix niga_matrix;
typedef struct niga_report niga_report;

NIGA_API const char* niga_status_string(niga_status status);
NIGA_API const char* niga_last_error(void);
/* 0 for NIGA_OK, 2 for configuration errors, 3 for numerical failures. */
NIGA_API int niga_exit_code(niga_status status);
NIGA_API const char* niga_version(void);

/* Knot vectors. */
NIGA_API niga_status niga_knots_create(const double* knots, size_t count, int degree, niga_knots** out);
NIGA_API niga_status niga_knots_uniform(int degree, size_t spans, int interior_multiplicity, niga_knots** out);
NIGA_API niga_status niga_knots_parse(const char* text, niga_knots** out);
NIGA_API void niga_knots_destroy(niga_knots* knots);
NIGA_API size_t niga_knots_dimension(const niga_knots* knots);
NIGA_API double niga_knots_theta(const niga_knots* knots);
/* Writes the (degree+1) nonzero values of derivative order `deriv` at x into
 * values[] and the index of the first nonzero function into *first. */
NIGA_API niga_status niga_knots_eval(const niga_knots* knots, double x, int deriv, double* values, size_t* first);

/* Run configurations. */
NIGA_API niga_status niga_config_load(const char* path, niga_config** out);
NIGA_API niga_status niga_config_parse(const char* text, niga_config** out);
NIGA_API niga_status niga_config_set(niga_config* config, const char* key, const char* value);
NIGA_API niga_status niga_config_validate(const niga_config* config);
NIGA_API void niga_config_destroy(niga_config* config);

/* Discretization of one mesh level (spans per direction) of a configuration. */
NIGA_API niga_status niga_discretization_create(const niga_config* config, size_t spans, int threads,
                                                niga_discretization** out);
NIGA_API void niga_discretization_destroy(niga_discretization* disc);
NIGA_API size_t niga_discretization_dof(const niga_discretization* disc);
NIGA_API double niga_discretization_penalty_floor(const niga_discretization* disc);
NIGA_API double niga_discretization_trace_constant(const niga_discretization* disc);
NIGA_API double niga_discretization_epsilon(const niga_discretization* disc);

/* Assembled CSR matrices. */
NIGA_API niga_status niga_assemble_mass(const niga_discretization* disc, niga_matrix** out);
NIGA_API niga_status niga_assemble_stiffness(const niga_discretization* disc, double epsilon, double t,
                                             niga_matrix** out);
NIGA_API void niga_matrix_destroy(niga_matrix* matrix);
NIGA_API size_t niga_matrix_rows(const niga_matrix* matrix);
NIGA_API size_t niga_matrix_nnz(const niga_matrix* matrix);
/* Copies the CSR arrays; row_ptr needs rows+1 entries, cols and values nnz. */
NIGA_API niga_status niga_matrix_copy(const niga_matrix* matrix, size_t* row_ptr, size_t* cols, double* values);

/* Load vector of length dof. */
NIGA_API niga_status niga_assemble_load(const niga_discretization* disc, double epsilon, double t, double* out);
NIGA_API niga_status niga_coercivity_audit(const niga_discretization* disc, double epsilon, double t,
                                           double* alpha_hat);

/* Studies: command is "solve", "convergence" or "calibrate". out_dir may be
 * NULL (keeps the configured directory); threads <= 0 keeps the configured
 * count. */
NIGA_API niga_status niga_run(const char* command, const niga_config* config, const char* out_dir, int threads,
                              niga_report** out);
NIGA_API const char* niga_report_text(const niga_report* report);
/* Fitted L2(J;H1) slope; NaN when the study does not compute one. */
NIGA_API double niga_report_slope(const niga_report* report);
NIGA_API size_t niga_report_levels(const niga_report* report);
NIGA_API niga_status niga_report_level(const niga_report* report, size_t index, double* h, double* err_l2h1,
                                       double* err_l2l2, double* err_bdry);
NIGA_API void niga_report_destroy(niga_report* report);

#ifdef __cplusplus
}
#endif

#endif
