#ifndef CHURCH_TRANSDUCERS_H
#define CHURCH_TRANSDUCERS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChtrStatus {
  CHTR_STATUS_OK = 0,
  /**
   * Validation failure: a check did not pass, or the input is out of the codec.
   */
  CHTR_STATUS_SEMANTIC = 1,
  CHTR_STATUS_PARSE = 2,
  /**
   * The reduction budget ran out.
   */
  CHTR_STATUS_RESOURCE = 3,
  CHTR_STATUS_NULL_ARG = 4,
  CHTR_STATUS_INVALID_UTF8 = 5,
  CHTR_STATUS_PANIC = 6,
} ChtrStatus;

typedef enum ChtrTarget {
  CHTR_TARGET_STLC = 0,
  CHTR_TARGET_EAL = 1,
} ChtrTarget;

/**
 * The machines of one description file.
 */
typedef struct ChtrMachines ChtrMachines;

/**
 * A checked program.
 */
typedef struct ChtrProgram ChtrProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *chtr_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void chtr_string_free(char *s);

/**
 * Parse a machine description.
 *
 * # Safety
 * `src` is a NUL-terminated string; `out` is valid for a write.
 */
enum ChtrStatus chtr_machines_parse(const char *src,
                                    bool complete_delta,
                                    struct ChtrMachines **out);

/**
 * Number of machines in the handle; 0 for null.
 *
 * # Safety
 * `m` is null or a live handle.
 */
uintptr_t chtr_machines_count(const struct ChtrMachines *m);

/**
 * # Safety
 * `m` is null or a handle from [`chtr_machines_parse`] not yet freed.
 */
void chtr_machines_free(struct ChtrMachines *m);

/**
 * Run machine `index` on `input`; the result is written to `out` (the
 * empty word is the empty string).
 *
 * # Safety
 * `m` is a live handle, `input` a NUL-terminated string, `out` valid for a write.
 */
enum ChtrStatus chtr_machines_run(const struct ChtrMachines *m,
                                  uintptr_t index,
                                  const char *input,
                                  char **out);

/**
 * Compile machine `index`.
 *
 * # Safety
 * `m` is a live handle and `out` valid for a write.
 */
enum ChtrStatus chtr_compile(const struct ChtrMachines *m,
                             uintptr_t index,
                             enum ChtrTarget target,
                             struct ChtrProgram **out);

/**
 * Read and re-check a program file.
 *
 * # Safety
 * `src` is a NUL-terminated string and `out` valid for a write.
 */
enum ChtrStatus chtr_program_read(const char *src, struct ChtrProgram **out);

/**
 * Render a program in its file format.
 *
 * # Safety
 * `p` is a live handle and `out` valid for a write.
 */
enum ChtrStatus chtr_program_write(const struct ChtrProgram *p, char **out);

/**
 * Normalize the program applied to `input` within `fuel` β-steps and
 * decode the result.
 *
 * # Safety
 * `p` is a live handle, `input` a NUL-terminated string, `out` valid for a write.
 */
enum ChtrStatus chtr_program_eval(const struct ChtrProgram *p,
                                  const char *input,
                                  uint64_t fuel,
                                  char **out);

/**
 * # Safety
 * `p` is null or a program handle not yet freed.
 */
void chtr_program_free(struct ChtrProgram *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHURCH_TRANSDUCERS_H */
