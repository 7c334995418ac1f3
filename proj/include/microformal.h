/*
 * microformal C interface.
 *
 * Objects are opaque handles. Every call returns an mf_status; on failure
 * mf_last_error() describes the problem for the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * mf_free_string().
 */
#ifndef MICROFORMAL_H
#define MICROFORMAL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MF_API __declspec(dllexport)
#else
#define MF_API __attribute__((visibility("default")))
#endif

typedef enum mf_status {
    MF_OK = 0,
    MF_CHECK_FAILED = 1, /* a verification check did not pass */
    MF_INVALID = 2,      /* parse, context, truncation or validation error */
    MF_INTERNAL = 3
} mf_status;

typedef struct mf_morphism mf_morphism;

/* Morphism files: dims, trunc, S and optional w lines. */
MF_API mf_status mf_morphism_parse(const char* text, mf_morphism** out);
MF_API mf_status mf_morphism_load(const char* path, mf_morphism** out);
MF_API void mf_morphism_free(mf_morphism* m);

/* Quantum pullback of the file's wave function. With with_exponent set the
 * extracted exponent is appended (single-term wave functions only). */
MF_API mf_status mf_pullback(const mf_morphism* m, int with_exponent, char** out);

/* Classical pullback of the file's pure phase. */
MF_API mf_status mf_classical(const mf_morphism* m, char** out);

/* Generating function of the composite: first, then second. */
MF_API mf_status mf_compose(const mf_morphism* first, const mf_morphism* second, char** out);

/* Runs every check for seeds seed .. seed + cases - 1, one verdict per line.
 * Returns MF_CHECK_FAILED when any verdict fails. */
MF_API mf_status mf_verify(uint64_t seed, int cases, int mutate, char** out);

/* Linear covariance of the file's S and w under the matrix "a,b;c,d". */
MF_API mf_status mf_covariance(const mf_morphism* m, const char* matrix, int mutate, char** out);

MF_API const char* mf_last_error(void);
MF_API void mf_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif
