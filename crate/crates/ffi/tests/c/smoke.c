#include <stdio.h>
#include <string.h>

#include "composition_codec.h"

#define CHECK(cond)                                                 \
  do {                                                              \
    if (!(cond)) {                                                  \
      const char *why = cc_last_error_message();                    \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,        \
              why ? why : "no error message");                      \
      return 1;                                                     \
    }                                                               \
  } while (0)

int main(void) {
  CcCodec *codec = NULL;
  CHECK(cc_codec_new(2, true, &codec) == CC_STATUS_OK);
  CHECK(cc_codec_length(codec) == 11);

  char *word = NULL;
  CHECK(cc_codec_encode(codec, "00", &word) == CC_STATUS_OK);
  CHECK(strcmp(word, "00000100001") == 0);

  CcMultiset *ms = NULL;
  CHECK(cc_fragment(word, &ms) == CC_STATUS_OK);
  CHECK(cc_multiset_corrupt(ms, 7) == CC_STATUS_OK);

  char *message = NULL;
  size_t corrected = 0;
  CHECK(cc_codec_decode(codec, ms, &message, &corrected) == CC_STATUS_OK);
  CHECK(strcmp(message, "00") == 0);
  CHECK(corrected > 0);

  CHECK(cc_codec_encode(codec, "0x", &word) == CC_STATUS_INVALID_STRING);
  CHECK(cc_last_error_message() != NULL);

  cc_string_free(message);
  cc_string_free(word);
  cc_multiset_free(ms);
  cc_codec_free(codec);
  puts("ok");
  return 0;
}
