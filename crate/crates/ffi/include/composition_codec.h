#ifndef COMPOSITION_CODEC_H
#define COMPOSITION_CODEC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_UTF8 = 2,
  CC_STATUS_INVALID_STRING = 3,
  CC_STATUS_INVALID_MESSAGE = 4,
  CC_STATUS_INVALID_MULTISET = 5,
  CC_STATUS_MALFORMED_INPUT = 6,
  CC_STATUS_INCONSISTENT_WEIGHTS = 7,
  CC_STATUS_CAPACITY_EXCEEDED = 8,
  CC_STATUS_NOT_A_CODEWORD = 9,
  CC_STATUS_TOO_LARGE = 10,
  CC_STATUS_UNCORRECTABLE = 11,
  CC_STATUS_AMBIGUOUS_DECODE = 12,
  CC_STATUS_INVALID_ERROR = 13,
  CC_STATUS_INTERNAL = 14,
} CcStatus;

// Code parameters for one message length.
typedef struct CcCodec CcCodec;

// A composition multiset.
typedef struct CcMultiset CcMultiset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the next call.
const char *cc_last_error_message(void);

// Creates a codec for `k`-bit messages; `ecc` selects the single error correcting code.
//
// # Safety
// `out` must be valid for writes.
enum CcStatus cc_codec_new(size_t k, bool ecc, struct CcCodec **out);

// # Safety
// `codec` must come from [`cc_codec_new`] and not be used afterwards. NULL is ignored.
void cc_codec_free(struct CcCodec *codec);

// Codeword length, or 0 for NULL.
//
// # Safety
// `codec` must be NULL or a live handle.
size_t cc_codec_length(const struct CcCodec *codec);

// Encodes a message given as `0`/`1` characters.
//
// # Safety
// `codec` must be a live handle, `message` a NUL-terminated string and `out` valid for writes.
enum CcStatus cc_codec_encode(const struct CcCodec *codec, const char *message, char **out);

// Decodes a multiset. `corrected_class` receives the repaired class, or 0
// when no error was found; it may be NULL.
//
// # Safety
// Handles must be live, `out` valid for writes, `corrected_class` NULL or valid for writes.
enum CcStatus cc_codec_decode(const struct CcCodec *codec,
                              const struct CcMultiset *multiset,
                              char **out,
                              size_t *corrected_class);

// Composition multiset of a `0`/`1` string.
//
// # Safety
// `s` must be NUL-terminated and `out` valid for writes.
enum CcStatus cc_fragment(const char *s, struct CcMultiset **out);

// Parses the canonical text or JSON form and checks class sizes.
//
// # Safety
// `text` must be NUL-terminated and `out` valid for writes.
enum CcStatus cc_multiset_parse(const char *text, struct CcMultiset **out);

// Serializes to the canonical text form, or JSON when `json` is set.
//
// # Safety
// `multiset` must be a live handle and `out` valid for writes.
enum CcStatus cc_multiset_serialize(const struct CcMultiset *multiset, bool json, char **out);

// Replaces `multiset` with a copy carrying one random composition error.
//
// # Safety
// `multiset` must be a live handle.
enum CcStatus cc_multiset_corrupt(struct CcMultiset *multiset, uint64_t seed);

// # Safety
// `multiset` must come from this library and not be used afterwards. NULL is ignored.
void cc_multiset_free(struct CcMultiset *multiset);

// # Safety
// `s` must be a string returned by this library, or NULL.
void cc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMPOSITION_CODEC_H */
