/* psslab — symbolic-numeric toolkit for quasilinear PDEs describing
 * pseudospherical and spherical surfaces.
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * JSON strings for structured data. Every char* output is allocated by the
 * library and must be released with pss_string_free. On a nonzero status,
 * pss_last_error() describes the failure (thread-local).
 */

#ifndef PSSLAB_H
#define PSSLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PSS_OK 0
#define PSS_ERR_PARSE 1
#define PSS_ERR_UNKNOWN_FUNCTION 2
#define PSS_ERR_UNBOUND_VARIABLE 3
#define PSS_ERR_SINGULAR_POINT 4
#define PSS_ERR_DOMAIN 5
#define PSS_ERR_ORDER_OVERFLOW 6
#define PSS_ERR_KIND_MISMATCH 7
#define PSS_ERR_DEGENERATE_F11 8
#define PSS_ERR_DELTA_VANISHES 9
#define PSS_ERR_DELTA0_VANISHES 10
#define PSS_ERR_H_CONSTANT 11
#define PSS_ERR_PSI_VANISHES 12
#define PSS_ERR_SIGN_ASSUMPTION 13
#define PSS_ERR_SHAPE_MISMATCH 14
#define PSS_ERR_DOMAIN_VIOLATION 15
#define PSS_ERR_EMPTY_MASK 16
#define PSS_ERR_SINGULAR_COEFFICIENT 17
#define PSS_ERR_BLOW_UP 18
#define PSS_ERR_INVALID 19
#define PSS_ERR_IO 20
#define PSS_ERR_NO_ADMISSIBLE_POINT 21
#define PSS_ERR_INTERNAL 99

#define PSS_PROBLEM_SL2 0
#define PSS_PROBLEM_SU2 1
#define PSS_PROBLEM_HAT3X3 2

typedef struct pss_expr pss_expr;
typedef struct pss_sextet pss_sextet; /* sextet plus optional relation */
typedef struct pss_grid pss_grid;     /* numeric solution grid */

const char* pss_version(void);
const char* pss_last_error(void);
void pss_string_free(char* s);

/* --- expression kernel ------------------------------------------------- */

int pss_expr_parse(const char* src, pss_expr** out);
void pss_expr_free(pss_expr* e);
int pss_expr_print(const pss_expr* e, char** out);
int pss_expr_normalize(const pss_expr* e, pss_expr** out);
/* var: "z", "z_x", "z_t", ... or a parameter name */
int pss_expr_diff(const pss_expr* e, const char* var, pss_expr** out);
int pss_expr_total_dx(const pss_expr* e, pss_expr** out);
int pss_expr_total_dt(const pss_expr* e, pss_expr** out);
/* equality modulo normalization: *out = 1 when equal */
int pss_expr_equal(const pss_expr* a, const pss_expr* b, int* out);
int pss_expr_eval(const pss_expr* e, const char* const* names, const double* values, size_t n,
                  double* out);

/* --- sextets and verification ------------------------------------------ */

int pss_sextet_from_json(const char* json_text, pss_sextet** out);
int pss_sextet_to_json(const pss_sextet* s, char** out);
void pss_sextet_free(pss_sextet* s);
/* A, B, C from the Theorem-3.2 formulas; JSON {"A","B","C","delta"} */
int pss_sextet_coeffs(const pss_sextet* s, char** coeffs_json);
/* off-shell structure residuals; JSON {"r1","r2","r3"} */
int pss_structure_residuals(const pss_sextet* s, char** residuals_json);
/* opts_json: {"seed":0,"points":200,"tol":1e-9} (all optional).
 * *pass is 1 when every check passed. */
int pss_verify(const pss_sextet* s, const char* opts_json, char** report_json, int* pass);

/* --- families ----------------------------------------------------------- */

/* family_json: {"variant":"cor33"|..., named expression strings, ...}.
 * Result: {"coeffs":..., "sextet":..., "family":..., "verify":...} */
int pss_family_build(const char* family_json, const char* opts_json, char** result_json,
                     int* pass);

/* --- catalog ------------------------------------------------------------ */

int pss_catalog_list(char** json_names);
/* params_json: {"lambda":"1","m":"0",...} values as strings or numbers */
int pss_catalog_export(const char* name, const char* params_json, char** fixture_json);
int pss_catalog_run(const char* name, const char* params_json, const char* opts_json,
                    char** report_json, int* pass);

/* --- numeric lab --------------------------------------------------------- */

/* problem_json (solve):
 *   {"coeffs":{...}|"catalog":"gsp","params":{...},
 *    "z0":"1 + 0.1*sin(x)","v0":"0",
 *    "x0":0,"x1":6.2831853,"nx":256,"t_end":1.0,"bc":"periodic"}
 * problem_json (closed form):
 *   {"closed_form":"4*atan(exp(x + t))",
 *    "grid":{"x0":-8,"x1":8,"t0":-8,"t1":8,"h":0.05}}
 * diag_json reports {"completed":...,"steps":...,"ht":...,"diagnostic":...}. */
int pss_solve(const char* problem_json, pss_grid** out, char** diag_json);
void pss_grid_free(pss_grid* g);
/* CSV with columns x,t,z,K,w,r1,r2,r3; K/w/r need a sextet (may be NULL) */
int pss_grid_csv(const pss_grid* g, const pss_sextet* s, char** csv);
/* curvature statistics against K = -delta; *pass = median <= ktol */
int pss_curvature_report(const pss_grid* g, const pss_sextet* s, double ktol,
                         char** report_json, int* pass);
int pss_transport_check(const pss_grid* g, const pss_sextet* s, int problem_kind,
                        double base_x, double base_t, double step, double extent, double* out);

#ifdef __cplusplus
}
#endif

#endif /* PSSLAB_H */
