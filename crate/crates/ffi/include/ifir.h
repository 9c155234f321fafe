#ifndef IFIR_H
#define IFIR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum IfirStatus {
  IFIR_STATUS_OK = 0,
  IFIR_STATUS_NULL_POINTER = 1,
  IFIR_STATUS_INVALID_UTF8 = 2,
  IFIR_STATUS_INVALID_PARAMETER = 3,
  IFIR_STATUS_DIMENSION_MISMATCH = 4,
  IFIR_STATUS_SINGULAR = 5,
  IFIR_STATUS_UNSTABLE = 6,
  IFIR_STATUS_CONFIG = 7,
  IFIR_STATUS_IO = 8,
  IFIR_STATUS_SERIALIZATION = 9,
  IFIR_STATUS_BUFFER_TOO_SMALL = 10,
  IFIR_STATUS_PANIC = 11,
} IfirStatus;

/*
 Per-symbol metric selected by `ifir_campaign_series`.
 */
typedef enum IfirMetric {
  IFIR_METRIC_MSE = 0,
  IFIR_METRIC_SINR_DB = 1,
  IFIR_METRIC_BER = 2,
} IfirMetric;

/*
 Output file format for `ifir_campaign_export`.
 */
typedef enum IfirFormat {
  IFIR_FORMAT_CSV = 0,
  IFIR_FORMAT_JSON = 1,
} IfirFormat;

/*
 Rows of the operation-count tables.
 */
typedef enum IfirAlgorithm {
  IFIR_ALGORITHM_LMS_FULL = 0,
  IFIR_ALGORITHM_LMS_INT = 1,
  IFIR_ALGORITHM_LMS_PD = 2,
  IFIR_ALGORITHM_RLS_FULL = 3,
  IFIR_ALGORITHM_RLS_INT = 4,
  IFIR_ALGORITHM_RLS_PD = 5,
  IFIR_ALGORITHM_CMV_SG_FULL = 6,
  IFIR_ALGORITHM_CMV_SG_INT = 7,
  IFIR_ALGORITHM_CMV_RLS_FULL = 8,
  IFIR_ALGORITHM_CMV_RLS_INT = 9,
} IfirAlgorithm;

/*
 Opaque Monte-Carlo campaign result.
 */
typedef struct IfirCampaign IfirCampaign;

/*
 Opaque scenario configuration.
 */
typedef struct IfirConfig IfirConfig;

/*
 Opaque adaptive receiver for user 0 of a configuration.
 */
typedef struct IfirReceiver IfirReceiver;

/*
 Campaign summary.
 */
typedef struct IfirSummary {
  size_t runs;
  double final_mse;
  double final_sinr_db;
  double sinr_std_err;
  double ber;
} IfirSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `buf` (NUL
 terminated, truncated to `len`). Returns the full message length
 excluding the terminator.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t ifir_last_error(char *buf, size_t len);

/*
 Default configuration.

 # Safety
 `out` must be a valid pointer to a handle slot.
 */
enum IfirStatus ifir_config_default(struct IfirConfig **out);

/*
 Parses and validates a JSON configuration; missing fields take defaults.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid handle slot.
 */
enum IfirStatus ifir_config_from_json(const char *json, struct IfirConfig **out);

/*
 Overrides the seed, run count and symbol count; zero keeps a value.

 # Safety
 `cfg` must be a handle from `ifir_config_*`.
 */
enum IfirStatus ifir_config_set_run(struct IfirConfig *cfg,
                                    uint64_t seed,
                                    size_t runs,
                                    size_t symbols);

/*
 Observation length `M` of a configuration.

 # Safety
 `cfg` must be a handle from `ifir_config_*`; `out` must be valid.
 */
enum IfirStatus ifir_config_observation_len(const struct IfirConfig *cfg, size_t *out);

/*
 # Safety
 `cfg` must be null or a handle from `ifir_config_*` not yet freed.
 */
void ifir_config_free(struct IfirConfig *cfg);

/*
 Runs the Monte-Carlo campaign described by `cfg`.

 # Safety
 `cfg` must be a valid handle and `out` a valid handle slot.
 */
enum IfirStatus ifir_campaign_run(const struct IfirConfig *cfg, struct IfirCampaign **out);

/*
 # Safety
 `campaign` must be a valid handle and `out` valid.
 */
enum IfirStatus ifir_campaign_summary(const struct IfirCampaign *campaign, struct IfirSummary *out);

/*
 Number of symbols in the averaged series.

 # Safety
 `campaign` must be a valid handle and `out` valid.
 */
enum IfirStatus ifir_campaign_len(const struct IfirCampaign *campaign, size_t *out);

/*
 Copies the averaged per-symbol `metric` into `buf`, which must hold at
 least `ifir_campaign_len` values.

 # Safety
 `buf` must point to `len` writable doubles.
 */
enum IfirStatus ifir_campaign_series(const struct IfirCampaign *campaign,
                                     enum IfirMetric metric,
                                     double *buf,
                                     size_t len);

/*
 Writes the averaged series to `path`.

 # Safety
 Handles must be valid and `path` NUL terminated.
 */
enum IfirStatus ifir_campaign_export(const struct IfirCampaign *campaign,
                                     const struct IfirConfig *cfg,
                                     const char *path,
                                     enum IfirFormat format);

/*
 # Safety
 `campaign` must be null or a handle from `ifir_campaign_run` not yet freed.
 */
void ifir_campaign_free(struct IfirCampaign *campaign);

/*
 Builds the configured receiver for a user with spreading code `code`
 (`code_len` complex chips, equal to the configured spreading gain).

 # Safety
 `code` must point to `2 * code_len` doubles and `out` be a valid slot.
 */
enum IfirStatus ifir_receiver_new(const struct IfirConfig *cfg,
                                  const double *code,
                                  size_t code_len,
                                  struct IfirReceiver **out);

/*
 Adapts on the received vector `r` (`r_len = M` complex samples). With
 `trained != 0` the update uses the known `symbol`, otherwise it is blind.
 The pre-update output is written to `out` as `(re, im)`.

 # Safety
 `r` must point to `2 * r_len` doubles and `out` to two writable doubles.
 */
enum IfirStatus ifir_receiver_update(struct IfirReceiver *rx,
                                     const double *r,
                                     size_t r_len,
                                     int32_t trained,
                                     double symbol,
                                     double *out);

/*
 Output of the current receiver for `r` without adapting.

 # Safety
 As for `ifir_receiver_update`.
 */
enum IfirStatus ifir_receiver_output(const struct IfirReceiver *rx,
                                     const double *r,
                                     size_t r_len,
                                     double *out);

/*
 # Safety
 `rx` must be null or a handle from `ifir_receiver_new` not yet freed.
 */
void ifir_receiver_free(struct IfirReceiver *rx);

/*
 Additions and multiplications per symbol of `alg`.

 # Safety
 `additions` and `multiplications` must be valid pointers.
 */
enum IfirStatus ifir_complexity(enum IfirAlgorithm alg,
                                uint64_t m,
                                uint64_t l,
                                uint64_t ni,
                                uint64_t d,
                                uint64_t lp,
                                uint64_t *additions,
                                uint64_t *multiplications);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IFIR_H */
