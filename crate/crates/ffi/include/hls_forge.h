/* SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef HLS_FORGE_H
#define HLS_FORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HfStatus {
  HF_STATUS_OK = 0,
  /**
   * A document failed to parse or check.
   */
  HF_STATUS_PARSE = 1,
  /**
   * The constraints admit no timing, or the scheduler ran out of margin.
   */
  HF_STATUS_TIMING_INFEASIBLE = 2,
  /**
   * A zero-margin operation could not get a memory port.
   */
  HF_STATUS_MEMORY_CONFLICT = 3,
  HF_STATUS_NULL_POINTER = 4,
  HF_STATUS_INVALID_UTF8 = 5,
  HF_STATUS_INVALID_ARGUMENT = 6,
  HF_STATUS_PANIC = 7,
} HfStatus;

/**
 * Outcome of one synthesis run.
 */
typedef struct HfResult HfResult;

/**
 * A signal flow graph.
 */
typedef struct HfSfg HfSfg;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a
 * successful one. Owned by the library, valid until the next call.
 */
const char *hf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hf_version(void);

/**
 * Parses a graph in the textual SFG format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HfStatus hf_sfg_parse(const char *text, struct HfSfg **out);

/**
 * The three-input toy graph.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum HfStatus hf_sfg_gen_toy(struct HfSfg **out);

/**
 * Radix-2 FFT of `n` points; `fold` elides trivial twiddles.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum HfStatus hf_sfg_gen_fft(uint32_t n, bool fold, struct HfSfg **out);

/**
 * Number of nodes, 0 for a null handle.
 *
 * # Safety
 * `sfg` must be null or a live handle.
 */
size_t hf_sfg_node_count(const struct HfSfg *sfg);

/**
 * Number of edges, 0 for a null handle.
 *
 * # Safety
 * `sfg` must be null or a live handle.
 */
size_t hf_sfg_edge_count(const struct HfSfg *sfg);

/**
 * Canonical text of the graph; free with [`hf_string_free`]. Null for a
 * null handle.
 *
 * # Safety
 * `sfg` must be null or a live handle.
 */
char *hf_sfg_render(const struct HfSfg *sfg);

/**
 * # Safety
 * `sfg` must be null or a handle not yet freed.
 */
void hf_sfg_free(struct HfSfg *sfg);

/**
 * Schedules `sfg` under the I/O constraints `io`, the memory mapping `map`
 * and the operator library `lib_json` (null for unit latencies).
 * A negative `latency_override` keeps the declared bounds.
 *
 * On `Ok`, `TimingInfeasible` and `MemoryConflict`, `*out` receives a result
 * handle; infeasible results carry only the diagnostic. On other statuses
 * `*out` is null.
 *
 * # Safety
 * `sfg` must be a live handle, `io` and `map` NUL-terminated strings,
 * `lib_json` null or NUL-terminated, and `out` a writable pointer.
 */
enum HfStatus hf_synthesize(const struct HfSfg *sfg,
                            const char *io,
                            const char *map,
                            const char *lib_json,
                            int64_t latency_override,
                            struct HfResult **out);

/**
 * Status the result was produced with; `NullPointer` for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
enum HfStatus hf_result_status(const struct HfResult *result);

/**
 * Schedule latency in cycles, or -1 when nothing was scheduled.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
int64_t hf_result_latency(const struct HfResult *result);

/**
 * Architecture report as JSON; empty when nothing was scheduled. Free with
 * [`hf_string_free`].
 *
 * # Safety
 * `result` must be null or a live handle.
 */
char *hf_result_report_json(const struct HfResult *result);

/**
 * Full schedule as JSON. Free with [`hf_string_free`].
 *
 * # Safety
 * `result` must be null or a live handle.
 */
char *hf_result_schedule_json(const struct HfResult *result);

/**
 * Text Gantt trace. Free with [`hf_string_free`].
 *
 * # Safety
 * `result` must be null or a live handle.
 */
char *hf_result_gantt(const struct HfResult *result);

/**
 * Failure explanation; empty on success. Free with [`hf_string_free`].
 *
 * # Safety
 * `result` must be null or a live handle.
 */
char *hf_result_diagnostic(const struct HfResult *result);

/**
 * # Safety
 * `result` must be null or a handle not yet freed.
 */
void hf_result_free(struct HfResult *result);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void hf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HLS_FORGE_H */
