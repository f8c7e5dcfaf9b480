#ifndef TOWER_SBOX_H
#define TOWER_SBOX_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_ARGUMENT = 2,
  TS_STATUS_IO = 3,
  TS_STATUS_MALFORMED = 4,
  TS_STATUS_INTERNAL = 5,
} TsStatus;

/**
 * Opaque lookup table.
 */
typedef struct TsTable TsTable;

/**
 * Gate counts per kind and the symbolic critical path of one block.
 */
typedef struct TsCensus {
  uint32_t xor_gates;
  uint32_t xnor_gates;
  uint32_t and_gates;
  uint32_t or_gates;
  uint32_t nand_gates;
  uint32_t nor_gates;
  uint32_t not_gates;
  uint32_t cpd_xor;
  uint32_t cpd_nand;
  uint32_t cpd_nor;
  uint32_t cpd_and;
  uint32_t cpd_not;
} TsCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next library call on the same thread.
 */
const char *ts_last_error(void);

/**
 * The S-box applied to one word.
 */
uint16_t ts_sbox_forward(uint16_t x);

uint16_t ts_sbox_inverse(uint16_t y);

/**
 * Tower-field product of two 16-bit words.
 */
uint16_t ts_mul16(uint16_t a, uint16_t b);

/**
 * Tower-field inverse; 0 maps to 0.
 */
uint16_t ts_inv16(uint16_t a);

/**
 * Creates a builtin table: proposed, proposed_inv, identity, gold16_K or
 * kasami16_K.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TsStatus ts_table_builtin(const char *name, struct TsTable **out);

/**
 * Loads a LUT file (`.csv` is CSV, anything else binary).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TsStatus ts_table_load(const char *path, struct TsTable **out);

/**
 * # Safety
 * `t` must come from this library and not be used afterwards; null is
 * ignored.
 */
void ts_table_free(struct TsTable *t);

/**
 * Number of entries.
 *
 * # Safety
 * `t` must be a live handle or null (which yields 0).
 */
size_t ts_table_len(const struct TsTable *t);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum TsStatus ts_table_get(const struct TsTable *t, uint32_t x, uint16_t *out);

/**
 * SHA-256 of the little-endian table bytes as a hex string; free with
 * [`ts_string_free`].
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum TsStatus ts_table_sha256(const struct TsTable *t, char **out);

/**
 * Writes the table atomically; `csv` selects CSV over binary.
 *
 * # Safety
 * `t` must be a live handle and `path` a NUL-terminated string.
 */
enum TsStatus ts_table_write(const struct TsTable *t, const char *path, bool csv);

/**
 * Runs the metric suite and returns the JSON report; free with
 * [`ts_string_free`]. `metrics` is a comma-separated list or null for
 * all; `workers` 0 means the available parallelism.
 *
 * # Safety
 * `t` must be a live handle, `metrics` null or NUL-terminated, `out` valid.
 */
enum TsStatus ts_analyze(const struct TsTable *t,
                         const char *metrics,
                         uint32_t workers,
                         char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards; null is
 * ignored.
 */
void ts_string_free(char *s);

/**
 * Gate census and critical path of a catalog block such as "I16" or
 * "SCALE8_MU".
 *
 * # Safety
 * `block` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TsStatus ts_netlist_census(const char *block, struct TsCensus *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOWER_SBOX_H */
