/*==============================================================================
 * Copyright 2026 The rangemos Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *============================================================================*/

/* C interface of librangemos.
 *
 * Every call returns an rmos_status. On failure a human-readable message is
 * available from rmos_last_error() on the calling thread until the next call.
 * Handles are opaque; each *_create / *_read / producing call has a matching
 * *_destroy, and destroying NULL is a no-op.
 */

#ifndef RANGEMOS_H
#define RANGEMOS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define RMOS_API __declspec(dllexport)
#else
#  define RMOS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmos_status
{
  RMOS_OK = 0,
  RMOS_ERR_IO = 1,        /* file missing, unreadable or unwritable */
  RMOS_ERR_FORMAT = 2,    /* malformed file content */
  RMOS_ERR_CONTRACT = 3,  /* invalid argument, config or shape mismatch */
  RMOS_ERR_INTERNAL = 4
} rmos_status;

typedef struct rmos_config rmos_config;
typedef struct rmos_cloud rmos_cloud;
typedef struct rmos_image rmos_image;
typedef struct rmos_report rmos_report;

RMOS_API const char* rmos_last_error(void);
RMOS_API const char* rmos_version(void);

/* Pipeline configuration. Keys are dotted ("knn.k", "projection.fov_up_deg",
 * "sequence.dir"); values are given as text. */
RMOS_API rmos_status rmos_config_create(rmos_config** out);
RMOS_API void rmos_config_destroy(rmos_config* cfg);
RMOS_API rmos_status rmos_config_load(rmos_config* cfg, const char* path);
RMOS_API rmos_status rmos_config_set(rmos_config* cfg, const char* key, const char* value);
/* Text form of one dotted key: strings unquoted, everything else as JSON.
 * Buffer semantics as in rmos_config_dump. */
RMOS_API rmos_status rmos_config_get(const rmos_config* cfg, const char* key, char* buf, size_t cap, size_t* needed);
/* RMOS_ERR_CONTRACT with a message when a value is out of range. */
RMOS_API rmos_status rmos_config_validate(const rmos_config* cfg);
/* Writes the JSON dump into buf (NUL-terminated, truncated to cap) and the
 * full length, excluding the terminator, into *needed. buf may be NULL. */
RMOS_API rmos_status rmos_config_dump(const rmos_config* cfg, char* buf, size_t cap, size_t* needed);

/* Scans. */
RMOS_API rmos_status rmos_cloud_read(const char* path, rmos_cloud** out);
RMOS_API void rmos_cloud_destroy(rmos_cloud* cloud);
RMOS_API size_t rmos_cloud_size(const rmos_cloud* cloud);
/* xyzi receives x, y, z, intensity of point i. */
RMOS_API rmos_status rmos_cloud_point(const rmos_cloud* cloud, size_t i, float xyzi[4]);

/* Range images. */
RMOS_API rmos_status rmos_project(const rmos_cloud* cloud, const rmos_config* cfg, rmos_image** out);
RMOS_API void rmos_image_destroy(rmos_image* img);
RMOS_API int rmos_image_width(const rmos_image* img);
RMOS_API int rmos_image_height(const rmos_image* img);
RMOS_API size_t rmos_image_valid_count(const rmos_image* img);
/* channel: 0 range, 1 x, 2 y, 3 z, 4 intensity. *source_point is -1 for
 * invalid pixels and may be NULL. */
RMOS_API rmos_status rmos_image_pixel(const rmos_image* img, int u, int v, int channel, float* value,
                                      int32_t* source_point);
RMOS_API rmos_status rmos_image_write(const rmos_image* img, const char* path);

/* Sequence commands; the sequence comes from the config's sequence.* keys. */
RMOS_API rmos_status rmos_project_file(const rmos_config* cfg, const char* scan_path, const char* out_path);
/* zero_sentinel != 0 writes absent entries as 0 instead of -1. */
RMOS_API rmos_status rmos_associate(const rmos_config* cfg, size_t index, const char* out_dir, int zero_sentinel);
RMOS_API rmos_status rmos_residual(const rmos_config* cfg, size_t index, const char* out_dir);
/* mode: "range", "residual", "labels" or "association". labels_path may be NULL. */
RMOS_API rmos_status rmos_render(const rmos_config* cfg, const char* mode, size_t index, const char* out_dir,
                                 const char* labels_path);
/* Built-in scene (scene_path NULL): `scans` scans, range noise sigma `noise`
 * meters, seeded by the config's pipeline.seed. With a JSON scene file,
 * `scans` is ignored and a negative `noise` keeps the file's own value. */
RMOS_API rmos_status rmos_synth(const rmos_config* cfg, const char* scene_path, size_t scans, double noise,
                                const char* out_dir);

/* Segmentation and evaluation. A report is produced even when individual
 * scans fail; inspect rmos_report_failed(). */
RMOS_API rmos_status rmos_segment(const rmos_config* cfg, rmos_report** out);
RMOS_API rmos_status rmos_evaluate(const rmos_config* cfg, const char* prediction_dir, rmos_report** out);
RMOS_API void rmos_report_destroy(rmos_report* report);
RMOS_API size_t rmos_report_scans(const rmos_report* report);
RMOS_API size_t rmos_report_failed(const rmos_report* report);
/* Index and message of the i-th failed scan. */
RMOS_API rmos_status rmos_report_failure(const rmos_report* report, size_t i, size_t* scan_index,
                                         const char** message);
RMOS_API int rmos_report_aborted(const rmos_report* report);
/* Nonzero when the report carries an evaluation. */
RMOS_API int rmos_report_has_evaluation(const rmos_report* report);
RMOS_API rmos_status rmos_report_counts(const rmos_report* report, uint64_t* tp, uint64_t* fp, uint64_t* fn,
                                        uint64_t* tn);
/* Returns 0 and leaves *iou untouched when the IoU is undefined. */
RMOS_API int rmos_report_iou(const rmos_report* report, double* iou);
/* Plain-text (format 0) or key=value (format 1) evaluation report; pointer
 * valid until the report is destroyed. */
RMOS_API const char* rmos_report_text(const rmos_report* report, int format);

#ifdef __cplusplus
}
#endif

#endif /* RANGEMOS_H */
