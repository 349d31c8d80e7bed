#ifndef TORICBUNDLE_H
#define TORICBUNDLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  TB_STATUS_NULL_POINTER = 1,
  TB_STATUS_INVALID_UTF8 = 2,
  TB_STATUS_PARSE = 3,
  TB_STATUS_DIMENSION_MISMATCH = 4,
  TB_STATUS_BUDGET = 5,
  TB_STATUS_PRECONDITION = 6,
  TB_STATUS_NON_TROPICAL_ROW = 7,
  TB_STATUS_INVALID = 8,
  TB_STATUS_PANIC = 9,
} TbStatus;

/**
 * Opaque diagram handle.
 */
typedef struct TbDiagram TbDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library.
 */
const char *tb_last_error(void);

/**
 * Parses a diagram from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TbStatus tb_diagram_from_json(const char *json, struct TbDiagram **out);

/**
 * # Safety
 * `d` must come from `tb_diagram_from_json` and not be used afterwards.
 */
void tb_diagram_free(struct TbDiagram *d);

/**
 * Shape of the diagram: rows (rays) and columns (basis elements).
 *
 * # Safety
 * `d` must be a live handle; `rows` and `cols` valid pointers.
 */
enum TbStatus tb_diagram_shape(const struct TbDiagram *d, size_t *rows, size_t *cols);

/**
 * Adaptedness check. Sets `adapted` to 1 or 0; when `report` is not NULL it
 * receives the JSON report.
 *
 * # Safety
 * `d` must be a live handle and `adapted` a valid pointer.
 */
enum TbStatus tb_check_adapted(const struct TbDiagram *d,
                               size_t max_basis,
                               int32_t *adapted,
                               char **report);

/**
 * Mori dream verdict as a JSON report.
 *
 * # Safety
 * `d` must be a live handle and `report` a valid pointer.
 */
enum TbStatus tb_mds_verdict(const struct TbDiagram *d,
                             size_t max_basis,
                             size_t degree_cap,
                             char **report);

/**
 * Cox ring presentation in the polynomial text grammar.
 *
 * # Safety
 * `d` must be a live handle and `text` a valid pointer.
 */
enum TbStatus tb_cox_presentation(const struct TbDiagram *d, size_t max_basis, char **text);

/**
 * Extends the basis by subduction. On termination `extended` (if not NULL)
 * receives a new handle for the extended diagram, otherwise NULL.
 *
 * # Safety
 * `d` must be a live handle; `report` a valid pointer.
 */
enum TbStatus tb_extend(const struct TbDiagram *d,
                        size_t max_basis,
                        size_t degree_cap,
                        size_t max_adjoined,
                        char **report,
                        struct TbDiagram **extended);

/**
 * JSON text of the diagram.
 *
 * # Safety
 * `d` must be a live handle and `json` a valid pointer.
 */
enum TbStatus tb_diagram_to_json(const struct TbDiagram *d, char **json);

/**
 * # Safety
 * `s` must be a string returned by this library, or NULL.
 */
void tb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORICBUNDLE_H */
