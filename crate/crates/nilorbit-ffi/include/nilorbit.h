#ifndef NILORBIT_H
#define NILORBIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  /**
   * Success.
   */
  NO_OK = 0,
  /**
   * Malformed input: unknown name, bad JSON, bad rational literal.
   */
  NO_PARSE_ERROR = 1,
  /**
   * Input parsed but is not a valid object (Jacobi failure, σ² ≠ id, …).
   */
  NO_VALIDATION_ERROR = 2,
  /**
   * The verification suite ran and at least one check failed.
   */
  NO_CHECK_FAILED = 3,
  /**
   * A required pointer argument was null.
   */
  NO_NULL_POINTER = 4,
} NoStatus;

/**
 * Opaque: a nilpotent Lie algebra, plus the involution matrix embedded in
 * its source file, if any.
 */
typedef struct NoAlgebra NoAlgebra;

/**
 * Opaque: a validated involutive automorphism of a specific algebra.
 */
typedef struct NoInvolution NoInvolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Borrowed pointer;
 * valid until the next failing call. Never null.
 */
const char *no_last_error(void);

/**
 * Release a string returned through an `out_json` parameter.
 */
void no_string_free(char *s);

/**
 * Build one of the built-in algebras by name ("h3", "filiform4", "ut4", …).
 */
NoStatus no_algebra_catalog(const char *name, NoAlgebra **out);

/**
 * Build an algebra from the JSON schema
 * `{name, dim, labels, brackets: [{i, j, out: [[k, "num/den"], …]}, …]}`
 * (1-based indices; an optional "sigma" key carries an involution matrix).
 */
NoStatus no_algebra_from_json(const char *text, NoAlgebra **out);

void no_algebra_free(NoAlgebra *alg);

/**
 * Dimension, or -1 on a null handle.
 */
int64_t no_algebra_dim(const NoAlgebra *alg);

/**
 * Nilpotency class, or -1 on a null handle.
 */
int64_t no_algebra_class(const NoAlgebra *alg);

/**
 * Parse an involution matrix given as slash-separated rows of
 * comma-separated rationals, e.g. `"-1,0,0/0,1,0/0,0,-1"`.
 */
NoStatus no_involution_parse(const NoAlgebra *alg, const char *rows, NoInvolution **out);

/**
 * Use the involution embedded in the algebra's source JSON ("sigma" key).
 */
NoStatus no_involution_from_algebra(const NoAlgebra *alg, NoInvolution **out);

void no_involution_free(NoInvolution *inv);

/**
 * Vergne polarization at a form given as comma-separated rational
 * coordinates. JSON result: `{phi, polarization_dim, is_polarized, basis}`.
 */
NoStatus no_polarize(const NoAlgebra *alg, const char *phi, char **out_json);

/**
 * Canonical representative of the coadjoint orbit of a form.
 * JSON result: `{phi, canonical, witness}`.
 */
NoStatus no_orbit_canonical(const NoAlgebra *alg, const char *phi, char **out_json);

/**
 * Same-orbit test. JSON result: `{same_orbit, witness}` where `witness`
 * moves the first form to the second when present.
 */
NoStatus no_same_orbit(const NoAlgebra *alg, const char *phi1, const char *phi2, char **out_json);

/**
 * Polar decomposition u = u⁺·u⁻ of a group element given by logarithm
 * coordinates. JSON result: `{u, u_plus, u_minus}`.
 */
NoStatus no_polar_decompose(const NoAlgebra *alg,
                            const NoInvolution *inv,
                            const char *elem,
                            char **out_json);

/**
 * Distinction report for a form. JSON result:
 * `{distinguished, sigma_fixed_rep, stable_polarization, witness}`.
 */
NoStatus no_distinguish(const NoAlgebra *alg,
                        const NoInvolution *inv,
                        const char *phi,
                        char **out_json);

/**
 * Coadjoint action of a group element on a form, as a JSON coordinate list.
 */
NoStatus no_coadjoint(const NoAlgebra *alg, const char *elem, const char *phi, char **out_json);

/**
 * Count and list the orbits of the fixed subgroup on forms vanishing on the
 * fixed subalgebra, in the finite model at `p`.
 * JSON result: `{p, count, reps, sizes}`.
 */
NoStatus no_classify_finite(const NoAlgebra *alg,
                            const NoInvolution *inv,
                            uint64_t p,
                            char **out_json);

/**
 * Run the full finite-field verification suite at `p`. The report is always
 * written on success of the computation; the status is `NoCheckFailed` when
 * any individual check fails.
 */
NoStatus no_oracle(const NoAlgebra *alg, const NoInvolution *inv, uint64_t p, char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NILORBIT_H */
