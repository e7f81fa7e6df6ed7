// Copyright 2026 The hqfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the hybrid quantum filtering library. All objects are
 * opaque handles owned by the caller and released with the matching
 * *_destroy function. Every fallible call returns an hqf_status; on failure
 * hqf_last_error() describes the problem (per thread, valid until the next
 * call on that thread). */

#ifndef HQF_HQF_H
#define HQF_HQF_H

#include <stddef.h>
#include <stdint.h>

#if defined(HQF_BUILDING)
#define HQF_API __attribute__((visibility("default")))
#else
#define HQF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hqf_status {
    HQF_OK = 0,
    HQF_ERR_INVALID_ARGUMENT = 1,
    HQF_ERR_DIMENSION = 2,
    HQF_ERR_NUMERICAL = 3,
    HQF_ERR_IO = 4,
    HQF_ERR_PARSE = 5,
    HQF_ERR_INTERNAL = 6,
} hqf_status;

typedef enum hqf_method {
    HQF_METHOD_SME = 1,
    HQF_METHOD_QEKF = 2,
    HQF_METHOD_BOTH = 3,
} hqf_method;

typedef struct hqf_config hqf_config;
typedef struct hqf_record hqf_record;
typedef struct hqf_metrics hqf_metrics;

HQF_API const char* hqf_version(void);
HQF_API const char* hqf_last_error(void);
HQF_API const char* hqf_status_name(hqf_status status);

/* Experiment configuration; starts at the library defaults. */
HQF_API hqf_status hqf_config_create(hqf_config** out);
HQF_API hqf_status hqf_config_load(const char* path, hqf_config** out);
HQF_API hqf_status hqf_config_set(hqf_config* config, const char* key, const char* value);
/* Copies the value of `key` into buf (NUL-terminated). *needed, if non-NULL,
 * receives the buffer size required including the terminator. A buffer that
 * is too small yields HQF_ERR_INVALID_ARGUMENT. */
HQF_API hqf_status hqf_config_get(const hqf_config* config, const char* key, char* buf, size_t buflen,
                                  size_t* needed);
HQF_API hqf_status hqf_config_validate(const hqf_config* config);
HQF_API hqf_status hqf_config_save(const hqf_config* config, const char* path);
HQF_API void hqf_config_destroy(hqf_config* config);

/* Truth simulation of one trajectory; the record keeps the sampled truth. */
HQF_API hqf_status hqf_simulate(const hqf_config* config, uint64_t trajectory, hqf_record** out);
/* Writes truth_<index>.csv for every trajectory of the config into dir. */
HQF_API hqf_status hqf_simulate_ensemble(const hqf_config* config, const char* dir);

HQF_API hqf_status hqf_record_load(const char* path, hqf_record** out);
/* Truth CSV; only available for records produced by hqf_simulate. */
HQF_API hqf_status hqf_record_save(const hqf_record* record, const char* path);
HQF_API size_t hqf_record_length(const hqf_record* record);
HQF_API double hqf_record_dt(const hqf_record* record);
HQF_API hqf_status hqf_record_increments(const hqf_record* record, double* out, size_t n);
HQF_API void hqf_record_destroy(hqf_record* record);

/* Run a filter over a record at the config's n_prime and write its estimate CSV. */
HQF_API hqf_status hqf_filter_sme(const hqf_config* config, const hqf_record* record, const char* csv_path);
HQF_API hqf_status hqf_filter_qekf(const hqf_config* config, const hqf_record* record, const char* csv_path);

/* Ensemble, metrics, figure CSVs and manifest (and the timing sweep when
 * with_bench is nonzero) into out_dir. *out may be NULL. */
HQF_API hqf_status hqf_experiment_run(const hqf_config* config, const char* out_dir, int with_bench,
                                      hqf_metrics** out);
/* Names: trajectories, rmse_q_sme, rmse_q_qekf, sme_seconds_mean, qekf_seconds_mean. */
HQF_API hqf_status hqf_metrics_get(const hqf_metrics* metrics, const char* name, double* out);
HQF_API void hqf_metrics_destroy(hqf_metrics* metrics);

/* Timing sweep over the config's bench_n_primes, written as CSV. */
HQF_API hqf_status hqf_bench(const hqf_config* config, const char* csv_path);

/* Render every figure CSV in dir to SVG; *written (optional) gets the count. */
HQF_API hqf_status hqf_plot(const char* dir, size_t* written);

#ifdef __cplusplus
}
#endif

#endif /* HQF_HQF_H */
