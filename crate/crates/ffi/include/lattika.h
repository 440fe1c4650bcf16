#ifndef LATTIKA_H
#define LATTIKA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LattikaStatus {
  LATTIKA_STATUS_OK = 0,
  LATTIKA_STATUS_NULL_POINTER = 1,
  LATTIKA_STATUS_INVALID_UTF8 = 2,
  LATTIKA_STATUS_PARSE = 3,
  LATTIKA_STATUS_NOT_A_LATTICE = 4,
  LATTIKA_STATUS_OUT_OF_RANGE = 5,
  LATTIKA_STATUS_SIZE_LIMIT = 6,
  LATTIKA_STATUS_INTERNAL = 7,
} LattikaStatus;

/*
 Opaque lattice handle.
 */
typedef struct LattikaLattice LattikaLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null.
 */
const char *lattika_last_error(void);

/*
 Parses a lattice from its JSON text (strict mode).

 # Safety
 `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum LattikaStatus lattika_lattice_from_json(const char *json, struct LattikaLattice **out);

/*
 # Safety
 `l` must come from `lattika_lattice_from_json` and not be freed twice.
 */
void lattika_lattice_free(struct LattikaLattice *l);

/*
 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_lattice_size(const struct LattikaLattice *l, size_t *out);

/*
 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_meet(const struct LattikaLattice *l,
                                uint32_t a,
                                uint32_t b,
                                uint32_t *out);

/*
 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_join(const struct LattikaLattice *l,
                                uint32_t a,
                                uint32_t b,
                                uint32_t *out);

/*
 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_leq(const struct LattikaLattice *l, uint32_t a, uint32_t b, bool *out);

/*
 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_is_modular(const struct LattikaLattice *l, bool *out);

/*
 Evaluates a property expression such as `"modular and type1(simple)"`.

 # Safety
 `l` must be a live handle, `expr` nul-terminated, `out` valid.
 */
enum LattikaStatus lattika_check(const struct LattikaLattice *l, const char *expr, bool *out);

/*
 JSON object with the `E`, `C`, `D` and `P` element classes.

 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_classes_json(const struct LattikaLattice *l, char **out);

/*
 Canonical form as lowercase hex; equal strings mean isomorphic lattices.

 # Safety
 `l` must be a live handle and `out` a valid pointer.
 */
enum LattikaStatus lattika_canonical_form(const struct LattikaLattice *l, char **out);

/*
 # Safety
 `s` must come from this library and not be freed twice.
 */
void lattika_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATTIKA_H */
