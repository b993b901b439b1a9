#ifndef QFTATLAS_H
#define QFTATLAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QftArch {
  QFT_ARCH_LNN = 0,
  QFT_ARCH_GRID = 1,
  QFT_ARCH_SYCAMORE = 2,
  QFT_ARCH_HEAVY_HEX = 3,
} QftArch;

typedef enum QftMode {
  QFT_MODE_STRICT = 0,
  QFT_MODE_RELAXED = 1,
} QftMode;

typedef enum QftStatus {
  QFT_STATUS_OK = 0,
  QFT_STATUS_NULL_POINTER = 1,
  QFT_STATUS_INVALID_ARGUMENT = 2,
  // The generator rejected the request (bad size, unsupported fault set).
  QFT_STATUS_GENERATION_FAILED = 3,
  // Circuit JSON could not be parsed.
  QFT_STATUS_PARSE_FAILED = 4,
  // A string argument was not valid UTF-8.
  QFT_STATUS_INVALID_UTF8 = 5,
  // A Rust panic was caught at the boundary.
  QFT_STATUS_INTERNAL = 6,
} QftStatus;

// Opaque scheduled circuit.
typedef struct QftCircuit QftCircuit;

typedef struct QftMetrics {
  size_t depth;
  size_t two_qubit_depth;
  size_t swap_count;
  size_t cphase_count;
  size_t h_count;
  size_t logical_qubits;
} QftMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the
// same thread and must not be freed.
const char *qft_last_error(void);

// Library version as a static nul-terminated string.
const char *qft_version(void);

// Generates a QFT schedule.
//
// `size` is the line length for LNN, the side length for grid and
// sycamore, and the qubit count for heavy-hex. `faulty` may be null when
// `faulty_len` is zero.
//
// # Safety
//
// `faulty` must point to `faulty_len` readable `size_t` values unless
// `faulty_len` is zero. `out` must be a valid pointer to writable storage
// for one handle. On success `*out` owns a circuit to be released with
// [`qft_circuit_free`].
enum QftStatus qft_generate(enum QftArch arch,
                            size_t size,
                            enum QftMode mode,
                            const size_t *faulty,
                            size_t faulty_len,
                            struct QftCircuit **out);

// Parses a circuit from its JSON form.
//
// # Safety
//
// `json` must be a valid nul-terminated string and `out` a valid pointer
// to writable storage for one handle.
enum QftStatus qft_circuit_from_json(const char *json, struct QftCircuit **out);

// Serializes a circuit to deterministic JSON.
//
// # Safety
//
// `circuit` must be a live handle from this library and `out` a valid
// pointer. On success `*out` must be released with [`qft_string_free`].
enum QftStatus qft_circuit_to_json(const struct QftCircuit *circuit, char **out);

// Serializes a circuit to OpenQASM 2.0.
//
// # Safety
//
// Same contract as [`qft_circuit_to_json`].
enum QftStatus qft_circuit_to_qasm(const struct QftCircuit *circuit, char **out);

// Depth and gate counts of a circuit.
//
// # Safety
//
// `circuit` must be a live handle and `out` a valid pointer to a
// [`QftMetrics`].
enum QftStatus qft_circuit_metrics(const struct QftCircuit *circuit, struct QftMetrics *out);

// Verifies a circuit against its own architecture under `mode`.
//
// `*ok` receives the verdict. When `report_json` is non-null it receives
// the full JSON report, to be released with [`qft_string_free`].
//
// # Safety
//
// `circuit` must be a live handle, `ok` a valid pointer, and
// `report_json` either null or a valid pointer.
enum QftStatus qft_circuit_verify(const struct QftCircuit *circuit,
                                  enum QftMode mode,
                                  bool *ok,
                                  char **report_json);

// Releases a circuit. Null is ignored.
//
// # Safety
//
// `circuit` must be null or a handle from this library that has not been
// freed yet.
void qft_circuit_free(struct QftCircuit *circuit);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
//
// `s` must be null or a string from this library that has not been freed
// yet.
void qft_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFTATLAS_H */
