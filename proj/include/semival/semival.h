#ifndef SEMIVAL_SEMIVAL_H
#define SEMIVAL_SEMIVAL_H

/*
 * C interface to the semival library.
 *
 * Every call returns an sv_status. Results are JSON documents handed back
 * through a char** that the caller releases with sv_string_free. On any
 * status other than SV_OK and SV_VERIFY_FAILED the output pointer is left
 * NULL and sv_last_error() describes the failure (per thread).
 * SV_VERIFY_FAILED means the computation ran and the result is attached,
 * but a check it reports did not hold.
 */

#include <stdint.h>

#if defined(_WIN32)
#define SV_API __declspec(dllexport)
#else
#define SV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sv_status {
  SV_OK = 0,
  SV_VERIFY_FAILED = 1,
  SV_USAGE = 2,
  SV_PARSE = 3,
  SV_CAP = 4,
  SV_DOMAIN = 5,
  SV_INTERNAL = 6
} sv_status;

typedef struct sv_limits {
  uint64_t max_states; /* 0: library default (SEMIVAL_MAX_STATES or 1e6) */
  unsigned threads;    /* 0 or 1: sequential */
} sv_limits;

typedef struct sv_valuation sv_valuation;

SV_API const char* sv_version(void);
SV_API const char* sv_status_name(sv_status status);
SV_API const char* sv_last_error(void);
SV_API void sv_string_free(char* s);

/* {"form": "P3"|"Q3"|"Combined5", "sigma": [...], "tau": [...]} or with
   "choose_sigma": {"f": DESC, "i_max": k} / "choose_tau": {"g": DESC, "i_max": k}. */
SV_API sv_status sv_valuation_from_json(const char* descriptor, sv_valuation** out);
SV_API void sv_valuation_free(sv_valuation* v);
SV_API sv_status sv_valuation_describe(const sv_valuation* v, char** out_json);

/* Decimal rendering of an exact number or value vector, for display only. */
SV_API sv_status sv_approx(const char* exact, int digits, char** out_text);

/* Canonical text of a polynomial, or a parse error with position. */
SV_API sv_status sv_poly_normalize(const char* poly, char** out_text);

SV_API sv_status sv_valuate(const sv_valuation* v, const char* poly, char** out_json);
SV_API sv_status sv_expand(const sv_valuation* v, const char* poly, char** out_json);

/* Key identities for indices 1..i_max; symbolic checks up to symbolic_max. */
SV_API sv_status sv_key_identities(const sv_valuation* v, unsigned i_max, unsigned symbolic_max,
                                   char** out_json);

/* request: {"lambdas": ["21/4", ...]} or {"grid": {"step": "1/4", "max": "8"}} */
SV_API sv_status sv_tilde(const sv_valuation* v, const char* request, const sv_limits* limits,
                          char** out_json);

/* Generated sub-semigroup count in the pseudo-box against the growth bound. */
SV_API sv_status sv_box_count(const sv_valuation* v, const char* y1, const char* y2, const sv_limits* limits,
                              char** out_json);

/* request: {"r": 1, "y1": "64", "d": "1000000", "y2": [...]} or "y2_max" instead of "y2". */
SV_API sv_status sv_example3(const char* request, char** out_json);

/* request: {"kind", "f", "g", "a", "a2", "c", "N", optional "valuation"} */
SV_API sv_status sv_wild(const char* request, const sv_limits* limits, char** out_json);

/* request: {"seed", "roundtrip", "homomorphism", "symbolic_max"} */
SV_API sv_status sv_selftest(const sv_valuation* v, const char* request, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* SEMIVAL_SEMIVAL_H */
