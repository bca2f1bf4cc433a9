#ifndef MVP_FFI_H
#define MVP_FFI_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MVP_DECORATION_FREQUENCY = 0,
  MVP_DECORATION_PERFORMANCE = 1,
} MvpDecoration;

/**
 * Result of every call.
 */
typedef enum {
  MVP_STATUS_OK = 0,
  MVP_STATUS_NULL_POINTER = 1,
  MVP_STATUS_INVALID_UTF8 = 2,
  MVP_STATUS_IO = 3,
  /**
   * Malformed CSV, timestamp or JSON input.
   */
  MVP_STATUS_PARSE = 4,
  /**
   * Conflicting definitions of the same event or object.
   */
  MVP_STATUS_CONSISTENCY = 5,
  /**
   * Structurally wrong input (headers, cells).
   */
  MVP_STATUS_FORMAT = 6,
  /**
   * Unknown event, object or class name.
   */
  MVP_STATUS_NOT_FOUND = 7,
  /**
   * Argument outside its domain.
   */
  MVP_STATUS_DOMAIN = 8,
  /**
   * A model dump that does not match its own log.
   */
  MVP_STATUS_INVALID_DUMP = 9,
  /**
   * Output contains an interior NUL and cannot be returned as a C string.
   */
  MVP_STATUS_ENCODING = 10,
  MVP_STATUS_PANIC = 11,
} MvpStatus;

/**
 * Opaque event log.
 */
typedef struct MvpLog MvpLog;

/**
 * Opaque discovered model.
 */
typedef struct MvpModel MvpModel;

typedef struct {
  size_t n_events;
  size_t n_activities;
  size_t n_classes;
  size_t n_objects_per_class;
  size_t links_per_event;
  uint64_t seed;
} MvpGeneratorParams;

typedef struct {
  MvpDecoration decoration;
  /**
   * Dependency threshold in [-1, 1].
   */
  double threshold;
  bool show_isolated;
  uint64_t palette_seed;
} MvpRenderOptions;

/**
 * Sizes of a model's parts.
 */
typedef struct {
  size_t events;
  size_t objects;
  size_t activities;
  size_t classes;
  size_t e2o_edges;
  size_t e2e_edges;
  size_t a2a_edges;
} MvpModelCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *mvp_last_error_message(void);

/**
 * Releases a string returned through a `char **out` parameter. Null is a no-op.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void mvp_string_free(char *s);

/**
 * The generator defaults.
 */
MvpGeneratorParams mvp_generator_params_default(void);

MvpRenderOptions mvp_render_options_default(void);

/**
 * # Safety
 * `path` is a NUL-terminated string; `out` is valid for a pointer write.
 */
MvpStatus mvp_log_load_csv(const char *path, MvpLog **out);

/**
 * Parses columnar CSV text held in memory.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is valid for a pointer write.
 */
MvpStatus mvp_log_from_csv_text(const char *text, MvpLog **out);

/**
 * # Safety
 * `params` points to a parameter block; `out` is valid for a pointer write.
 */
MvpStatus mvp_log_generate(const MvpGeneratorParams *params, MvpLog **out);

/**
 * # Safety
 * `log` is a live handle; `path` is a NUL-terminated string.
 */
MvpStatus mvp_log_export_csv(const MvpLog *log, const char *path);

/**
 * Number of events in `log`, or 0 for a null handle.
 *
 * # Safety
 * `log` is null or a live handle.
 */
size_t mvp_log_event_count(const MvpLog *log);

/**
 * # Safety
 * `log` is null or a live handle not used afterwards.
 */
void mvp_log_free(MvpLog *log);

/**
 * Discovers a model. The log handle stays owned by the caller; the model
 * shares the log data and remains valid after the log handle is freed.
 *
 * # Safety
 * `log` is a live handle; `out` is valid for a pointer write.
 */
MvpStatus mvp_discover(const MvpLog *log, MvpModel **out);

/**
 * # Safety
 * `model` is null or a live handle not used afterwards.
 */
void mvp_model_free(MvpModel *model);

/**
 * # Safety
 * `model` is a live handle; `out` is valid for a write.
 */
MvpStatus mvp_model_counts(const MvpModel *model, MvpModelCounts *out);

/**
 * Serializes a model to its JSON dump.
 *
 * # Safety
 * `model` is a live handle; `out` is valid for a pointer write.
 */
MvpStatus mvp_model_to_json(const MvpModel *model, char **out);

/**
 * Loads and verifies a JSON dump.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is valid for a pointer write.
 */
MvpStatus mvp_model_from_json(const char *json, MvpModel **out);

/**
 * # Safety
 * `model` is a live handle; `path` is a NUL-terminated string.
 */
MvpStatus mvp_model_save(const MvpModel *model, const char *path);

/**
 * # Safety
 * `path` is a NUL-terminated string; `out` is valid for a pointer write.
 */
MvpStatus mvp_model_load(const char *path, MvpModel **out);

/**
 * Projects the model onto the viewpoint of `classes` and returns the
 * directly-follows graph as JSON (`nodes`, `edges` with counts).
 *
 * # Safety
 * `model` is a live handle; `classes` points to `n_classes` NUL-terminated
 * strings; `out` is valid for a pointer write.
 */
MvpStatus mvp_project_dfg_json(const MvpModel *model,
                               const char *const *classes,
                               size_t n_classes,
                               char **out);

/**
 * Projects the model onto the viewpoint of `classes` and returns the
 * classical log as `case_id,activity,timestamp` CSV. `connected` merges
 * whole connected groups of objects instead of one hop.
 *
 * # Safety
 * As for [`mvp_project_dfg_json`].
 */
MvpStatus mvp_project_log_csv(const MvpModel *model,
                              const char *const *classes,
                              size_t n_classes,
                              bool connected,
                              char **out);

/**
 * Renders the model as DOT text. `opts` may be null for the defaults.
 *
 * # Safety
 * `model` is a live handle; `opts` is null or valid; `out` is valid for a
 * pointer write.
 */
MvpStatus mvp_render_dot(const MvpModel *model, const MvpRenderOptions *opts, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MVP_FFI_H */
