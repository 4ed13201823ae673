/* airtrace — encrypted-traffic identification toolkit, C interface.
 *
 * All objects are opaque handles created and destroyed by this library.
 * Functions returning at_status never throw across the boundary; on any
 * status other than AT_OK, at_last_error() carries a thread-local message.
 * Functions returning const char* keep the storage alive inside the
 * queried handle until the next call on that handle (or its free).
 */
#ifndef AIRTRACE_H
#define AIRTRACE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum at_status {
    AT_OK = 0,
    AT_EINVAL = 1,        /* invalid argument */
    AT_EIO = 2,           /* file I/O failure */
    AT_EPARSE = 3,        /* malformed input */
    AT_EFORMAT = 4,       /* recognizable but unsupported format */
    AT_EEMPTY = 5,        /* empty trace */
    AT_EINSUFFICIENT = 6, /* not enough data for the operation */
    AT_ECONFIG = 7,       /* bad parameter/configuration value */
    AT_EDIM = 8,          /* feature dimension mismatch */
    AT_ECLASS_SMALL = 9,  /* a class has too few samples for the fold count */
    AT_EDEGENERATE = 10,  /* detector target indistinguishable from noise */
    AT_EINTERNAL = 11
} at_status;

const char* at_version(void);
const char* at_last_error(void);

/* ------------------------------------------------------------------ */
/* Traces                                                              */

typedef struct at_trace at_trace;

/* device may be NULL or "" for an unlabeled trace; service likewise
 * defaults to "None". Device names: EchoDot, Echo, GoogleNestMini,
 * Noise, Synthetic-<k>. Services: Music, News, None. */
at_status at_trace_from_csv(const char* path, const char* device, const char* service,
                            at_trace** out);
/* map_spec example: "time=col0,size=col2,scale=1e-6,header=auto" */
at_status at_trace_from_csv_mapped(const char* path, const char* map_spec, const char* device,
                                   const char* service, at_trace** out);
/* receiver_mac formatted AA:BB:CC:DD:EE:FF. The optional out counters
 * report total frames seen, frames kept, and truncated frames skipped. */
at_status at_trace_from_pcap(const char* path, const char* receiver_mac, const char* device,
                             const char* service, at_trace** out, uint64_t* frames,
                             uint64_t* matched, uint64_t* truncated);
/* profile_json: a generator profile document (single distribution or
 * mixture). has_seed/seed and n_packets (0 = keep document value)
 * override the document. */
at_status at_trace_synth(const char* profile_json, int has_seed, uint64_t seed,
                         uint64_t n_packets, at_trace** out);
at_status at_trace_write_csv(const at_trace* trace, const char* path);
at_status at_trace_relabel(const at_trace* trace, const char* device, const char* service,
                           at_trace** out);
/* pad_to = 0 leaves sizes alone; max_delay = 0 leaves timing alone. */
at_status at_trace_reshape(const at_trace* trace, uint32_t pad_to, double max_delay,
                           uint64_t seed, uint64_t trace_id, at_trace** out);
/* Contiguous time split: head gets the first floor(n * head_fraction)
 * packets, tail the rest; both rebased to epoch 0. */
at_status at_trace_split(const at_trace* trace, double head_fraction, at_trace** head,
                         at_trace** tail);
size_t at_trace_len(const at_trace* trace);
double at_trace_duration(const at_trace* trace);
uint32_t at_trace_max_size(const at_trace* trace);
const char* at_trace_class(const at_trace* trace); /* "" when unlabeled */
void at_trace_free(at_trace* trace);

/* ------------------------------------------------------------------ */
/* Parameters                                                          */

typedef struct at_window_params {
    uint32_t window_size; /* packets per window */
    uint32_t stride;      /* 0 = tumbling (stride = window_size) */
    /* comma-separated statistic names, NULL = default 8
     * (mean,std,var,min,max,median,skewness,kurtosis; "sum" opt-in) */
    const char* feature_set;
    const char* source; /* "interarrival", "size", or "combined" */
} at_window_params;
void at_window_params_init(at_window_params* p);

typedef struct at_forest_params {
    uint32_t n_trees;
    uint32_t k_folds;
    uint32_t max_depth;          /* 0 = unlimited */
    uint32_t min_samples_leaf;
    uint32_t features_per_split; /* 0 = ceil(sqrt(d)) */
    uint64_t seed;
    int bootstrap; /* nonzero = bagging on (normal operation) */
} at_forest_params;
void at_forest_params_init(at_forest_params* p);

/* ------------------------------------------------------------------ */
/* Features and identification                                         */

typedef struct at_report at_report;
typedef struct at_wcurve at_wcurve;

at_status at_features_to_csv(const at_trace* const* traces, size_t n_traces,
                             const at_window_params* wp, const char* config_hash,
                             const char* out_path);
/* extract -> balance classes -> stratified k-fold cross-validation */
at_status at_identify(const at_trace* const* traces, size_t n_traces,
                      const at_window_params* wp, const at_forest_params* fp, at_report** out);
/* per-packet 1-feature baseline; raw_source is "interarrival" or "size",
 * per_class_cap = 0 keeps every sample */
at_status at_identify_raw(const at_trace* const* traces, size_t n_traces,
                          const char* raw_source, uint64_t per_class_cap,
                          const at_forest_params* fp, at_report** out);
double at_report_accuracy(const at_report* r);
const char* at_report_csv(at_report* r, const char* config_hash);
/* extra_note: optional trailing line for the summary, NULL for none */
const char* at_report_summary(at_report* r, const char* config_hash, const char* extra_note);
void at_report_free(at_report* r);

at_status at_sweep_windows(const at_trace* const* traces, size_t n_traces,
                           const uint32_t* sizes, size_t n_sizes, const at_window_params* wp,
                           const at_forest_params* fp, at_wcurve** out);
size_t at_wcurve_len(const at_wcurve* c);
const char* at_wcurve_csv(at_wcurve* c, const char* config_hash);
void at_wcurve_free(at_wcurve* c);

/* ------------------------------------------------------------------ */
/* Detection against ambient noise                                     */

typedef struct at_detector at_detector;
typedef struct at_detection at_detection;
typedef struct at_table at_table;

at_status at_detector_build(const at_trace* target, const at_trace* noise,
                            const at_window_params* wp, const at_forest_params* fp,
                            at_detector** out);
at_status at_detector_save(const at_detector* d, const char* path);
at_status at_detector_load(const char* path, at_detector** out);
const char* at_detector_target(const at_detector* d);
double at_detector_cv_accuracy(const at_detector* d);
void at_detector_free(at_detector* d);

at_status at_detect(const at_detector* d, const at_trace* unknown, at_detection** out);
size_t at_detection_chunks(const at_detection* r);
size_t at_detection_positives(const at_detection* r);
const char* at_detection_csv(at_detection* r, const char* config_hash);
void at_detection_free(at_detection* r);

at_status at_evaluate_detection(const at_detector* const* detectors, size_t n_detectors,
                                const at_trace* const* tests, size_t n_tests, at_table** out);
size_t at_table_rows(const at_table* t);
/* tpr/fpr are NaN when the corresponding truth class never occurred */
at_status at_table_row(const at_table* t, size_t i, double* tpr, double* fpr,
                       double* accuracy);
const char* at_table_csv(at_table* t, const char* config_hash);
void at_table_free(at_table* t);

/* ------------------------------------------------------------------ */
/* Traffic reshaping sweep                                             */

typedef struct at_dcurve at_dcurve;

/* Query pattern: call with out = NULL to receive the grid length in
 * *inout_len, then again with a buffer at least that long. */
at_status at_default_delay_grid(double* out, size_t* inout_len);
at_status at_sweep_delay(const at_trace* const* traces, size_t n_traces, const double* delays,
                         size_t n_delays, const at_window_params* wp,
                         const at_forest_params* fp, int with_padding, at_dcurve** out);
size_t at_dcurve_len(const at_dcurve* c);
at_status at_dcurve_point(const at_dcurve* c, size_t i, double* delay_s, double* acc_clean,
                          double* acc_retrained);
const char* at_dcurve_csv(at_dcurve* c, const char* config_hash);
void at_dcurve_free(at_dcurve* c);

/* ------------------------------------------------------------------ */

/* FNV-1a hex digest of a canonical configuration string. */
at_status at_config_hash(const char* text, char* out, size_t out_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AIRTRACE_H */
