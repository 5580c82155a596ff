#ifndef JACOBI_LOBATTO_H
#define JACOBI_LOBATTO_H

#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible call.
typedef enum JlStatus {
  JL_STATUS_OK = 0,
  // Exponents not above -1, zero size, or another rejected argument.
  JL_STATUS_INVALID_ARGUMENT = 1,
  JL_STATUS_NULL_POINTER = 2,
  // The eigenvalue iteration did not converge.
  JL_STATUS_NO_CONVERGENCE = 3,
  // The integrand returned NaN or an infinity.
  JL_STATUS_NON_FINITE = 4,
  // Caller's buffer is shorter than `jl_rule_len`.
  JL_STATUS_BUFFER_TOO_SMALL = 5,
  // A Rust panic was caught at the boundary.
  JL_STATUS_INTERNAL = 6,
} JlStatus;

// Opaque quadrature rule.
typedef struct JlRule JlRule;

// Integrand callback: `f(t, user_data)`.
typedef double (*JlIntegrand)(double t, void *user_data);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds the `m`-point Gauss-Jacobi rule.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum JlStatus jl_rule_gauss(double alpha, double beta, size_t m, struct JlRule **out);

// Builds the Gauss-Jacobi-Lobatto rule with `n` interior nodes (`n + 2` in total).
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum JlStatus jl_rule_lobatto(double alpha, double beta, size_t n, struct JlRule **out);

// Releases a rule. Null is ignored.
//
// # Safety
// `rule` must be null or a handle from this library not yet freed.
void jl_rule_free(struct JlRule *rule);

// Number of nodes, or 0 for a null handle.
//
// # Safety
// `rule` must be null or a live handle.
size_t jl_rule_len(const struct JlRule *rule);

// Polynomial degree integrated exactly, or 0 for a null handle.
//
// # Safety
// `rule` must be null or a live handle.
size_t jl_rule_exactness_degree(const struct JlRule *rule);

// Copies the ascending nodes into `buf[0..len]`.
//
// # Safety
// `rule` must be a live handle and `buf` valid for `cap` doubles.
enum JlStatus jl_rule_nodes(const struct JlRule *rule, double *buf, size_t cap);

// Copies the weights into `buf[0..len]`.
//
// # Safety
// `rule` must be a live handle and `buf` valid for `cap` doubles.
enum JlStatus jl_rule_weights(const struct JlRule *rule, double *buf, size_t cap);

// Applies the rule to `f`, writing the sum to `out`.
//
// # Safety
// `rule` must be a live handle, `out` writable, and `f` safe to call with `user_data`.
enum JlStatus jl_rule_integrate(const struct JlRule *rule,
                                JlIntegrand f,
                                void *user_data,
                                double *out);

// Zeroth moment of the weight `(1-t)^alpha (1+t)^beta`.
//
// # Safety
// `out` must be writable.
enum JlStatus jl_zeroth_moment(double alpha, double beta, double *out);

// Static, NUL-terminated description of a status code.
const char *jl_status_message(enum JlStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JACOBI_LOBATTO_H */
