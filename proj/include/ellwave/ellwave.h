#ifndef ELLWAVE_ELLWAVE_H
#define ELLWAVE_ELLWAVE_H

/*
 * C interface to libellwave: Jacobi elliptic functions, periodic KdV / mKdV
 * travelling waves built from lattice superpositions, their cyclic-identity
 * constants, and PDE residual certification.
 *
 * Every function returns an ew_status. On failure a description of the last
 * error on the calling thread is available from ew_last_error(). Output
 * arguments are written only on EW_OK, except ew_extract_constant, which also
 * fills its output on EW_ERR_NON_IDENTITY.
 *
 * m is the elliptic *parameter* (m = k^2): dn^2 + m sn^2 = 1.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(EW_BUILDING_LIBRARY)
#    define EW_API __declspec(dllexport)
#  else
#    define EW_API __declspec(dllimport)
#  endif
#else
#  define EW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ew_status {
  EW_OK = 0,
  EW_ERR_DOMAIN = 1,
  EW_ERR_DIVERGENCE = 2,
  EW_ERR_USAGE = 3,
  EW_ERR_DEGENERATE_SAMPLING = 4,
  EW_ERR_NON_IDENTITY = 5,
  EW_ERR_PARSE = 6,
  EW_ERR_NULL_ARGUMENT = 7,
  EW_ERR_BUFFER_TOO_SMALL = 8,
  EW_ERR_INTERNAL = 9
} ew_status;

typedef enum ew_family {
  EW_KDV_DN2_SUM = 0,
  EW_MKDV1_SN_SUM_ODD = 1,
  EW_MKDV1_SN_PRODUCT_EVEN = 2,
  EW_MKDV2_DN_SUM = 3,
  EW_MKDV2_CN_SUM_ODD = 4,
  EW_MKDV2_DN_ALTERNATING_EVEN = 5,
  EW_MIURA_OF_MKDV1 = 6
} ew_family;

typedef enum ew_constant_kind {
  EW_CONST_A = 0,
  EW_CONST_B,
  EW_CONST_C,
  EW_CONST_D,
  EW_CONST_E,
  EW_CONST_F,
  EW_CONST_G,
  EW_CONST_H,
  EW_CONST_I,
  EW_CONST_J,
  EW_CONST_L,
  EW_CONST_Q
} ew_constant_kind;

typedef enum ew_spacing {
  EW_SPACING_HALF = 0, /* 2K(m)/p */
  EW_SPACING_FULL = 1  /* 4K(m)/p */
} ew_spacing;

typedef struct ew_triple {
  double sn;
  double cn;
  double dn;
} ew_triple;

typedef struct ew_constant {
  ew_constant_kind kind;
  int p;
  double m;
  double value;
  double constancy_dev;
  int samples_used;
  int continued; /* nonzero: value continued from m >= 0.05 */
} ew_constant;

typedef struct ew_solution_info {
  ew_family family;
  int p;
  double alpha;
  double beta;
  int sign;
  double m;
  double velocity;
  ew_family source_family; /* equals family unless produced by ew_solution_miura */
  int source_sign;
} ew_solution_info;

typedef struct ew_residual_report {
  ew_family family;
  int p;
  double m;
  double alpha;
  double beta;
  int sign;
  double max_abs;
  double max_rel;
  double argmax_xi;
  int grid_points;
} ew_residual_report;

typedef struct ew_solution ew_solution;

EW_API const char* ew_last_error(void);
EW_API const char* ew_status_string(ew_status status);
EW_API const char* ew_version(void);

EW_API const char* ew_family_name(ew_family family);
EW_API ew_status ew_family_from_name(const char* name, ew_family* out);
EW_API int ew_family_accepts(ew_family family, int p);
EW_API const char* ew_constant_name(ew_constant_kind kind);
EW_API ew_status ew_constant_from_name(const char* name, ew_constant_kind* out);
EW_API int ew_constant_accepts(ew_constant_kind kind, int p);

/* Special functions. */
EW_API ew_status ew_complete_k(double m, double* out);
EW_API ew_status ew_jacobi(double u, double m, ew_triple* out);
/* Writes p triples; `capacity` is the length of `out`. */
EW_API ew_status ew_lattice_triples(int p, ew_spacing spacing, double base, double m,
                                    ew_triple* out, size_t capacity);

/* Identity constants. samples <= 0 selects the default (32); tol <= 0 selects 1e-9. */
EW_API ew_status ew_constant_q(double m, double* out);
EW_API ew_status ew_extract_constant(ew_constant_kind kind, int p, double m, int samples,
                                     double tol, ew_constant* out);
/* EW_OK with *known = 0 when no closed form is stated for (kind, p, m). */
EW_API ew_status ew_closed_form(ew_constant_kind kind, int p, double m, int* known, double* out);
EW_API ew_status ew_velocity(ew_family family, int p, double m, double beta, double* out);

/* Solutions. Handles are owned by the caller and released with ew_solution_free. */
EW_API ew_status ew_solution_build(ew_family family, int p, double alpha, double beta, int sign,
                                   double m, ew_solution** out);
EW_API ew_status ew_solution_miura(const ew_solution* v, int sign, ew_solution** out);
EW_API void ew_solution_free(ew_solution* w);
EW_API ew_status ew_solution_info_get(const ew_solution* w, ew_solution_info* out);
/* Overrides the stored velocity (negative controls). */
EW_API ew_status ew_solution_set_velocity(ew_solution* w, double velocity);
EW_API ew_status ew_solution_eval(const ew_solution* w, double x, double t, double* out);
/* Profile as text. Needs *required bytes including the terminator; buf may be
 * NULL when capacity is 0. */
EW_API ew_status ew_solution_profile(const ew_solution* w, char* buf, size_t capacity,
                                     size_t* required);

/* Verification. */
EW_API ew_status ew_residual(const ew_solution* w, double xi, double* out);
EW_API ew_status ew_scan_interval(const ew_solution* w, double* xi_min, double* xi_max);
EW_API ew_status ew_residual_scan(const ew_solution* w, double xi_min, double xi_max, int n,
                                  ew_residual_report* out);
EW_API ew_status ew_derivative_crosscheck(const ew_solution* w, double xi, double* out);

#ifdef __cplusplus
}
#endif

#endif /* ELLWAVE_ELLWAVE_H */
