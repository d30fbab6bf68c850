#ifndef CENTERLINE_H
#define CENTERLINE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Enforce semantic type agreement.
 */
#define CENTERLINE_SEMANTICS 1

/**
 * Turn off clause-mate exclusion for pronouns.
 */
#define CENTERLINE_NO_BINDING 2

/**
 * Carry gold entities forward after each resolution.
 */
#define CENTERLINE_CHAIN_CORRECT 4

typedef enum CenterlineStatus {
  CENTERLINE_STATUS_OK = 0,
  CENTERLINE_STATUS_NULL_POINTER = 1,
  CENTERLINE_STATUS_INVALID_UTF8 = 2,
  CENTERLINE_STATUS_PARSE_ERROR = 3,
  CENTERLINE_STATUS_INVALID_ARGUMENT = 4,
  CENTERLINE_STATUS_RESOLVE_ERROR = 5,
  CENTERLINE_STATUS_PANIC = 6,
} CenterlineStatus;

/**
 * Values accepted for the `strategy` argument of [`centerline_resolve`].
 */
typedef enum CenterlineStrategy {
  CENTERLINE_STRATEGY_FUNCTIONAL = 0,
  CENTERLINE_STRATEGY_LINEAR = 1,
  CENTERLINE_STRATEGY_INTER_FIRST = 2,
  CENTERLINE_STRATEGY_INTRA_FIRST = 3,
} CenterlineStrategy;

/**
 * Parsed, validated document.
 */
typedef struct CenterlineDocument CenterlineDocument;

/**
 * Result of one resolution pass.
 */
typedef struct CenterlineReport CenterlineReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a document from NUL-terminated UTF-8 text. On success `*out`
 * receives a new handle.
 */
enum CenterlineStatus centerline_document_parse(const char *text, struct CenterlineDocument **out);

void centerline_document_free(struct CenterlineDocument *doc);

/**
 * Number of anaphoric markables in the document.
 */
enum CenterlineStatus centerline_document_anaphor_count(const struct CenterlineDocument *doc,
                                                        size_t *out);

/**
 * Resolves every anaphor of `doc`. `strategy` is a [`CenterlineStrategy`]
 * value and `flags` a combination of the `CENTERLINE_*` flag constants.
 */
enum CenterlineStatus centerline_resolve(const struct CenterlineDocument *doc,
                                         uint32_t strategy,
                                         uint32_t flags,
                                         struct CenterlineReport **out);

void centerline_report_free(struct CenterlineReport *report);

/**
 * Correctly resolved anaphors and all anaphors of the report.
 */
enum CenterlineStatus centerline_report_score(const struct CenterlineReport *report,
                                              size_t *correct,
                                              size_t *total);

/**
 * One tab-separated line per anaphor. Release with
 * [`centerline_string_free`].
 */
enum CenterlineStatus centerline_report_tsv(const struct CenterlineReport *report, char **out);

void centerline_string_free(char *s);

/**
 * Message of the most recent failure on this thread, or an empty string.
 * Valid until the next call into the library from the same thread.
 */
const char *centerline_last_error(void);

const char *centerline_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CENTERLINE_H */
