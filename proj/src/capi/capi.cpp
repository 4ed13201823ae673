// C boundary: every entry point catches, records a thread-local message,
// and maps the error taxonomy onto at_status. No exception escapes.
#include "airtrace.h"

#include <cmath>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "../core/csv_io.hpp"
#include "../core/detect.hpp"
#include "../core/eclipse.hpp"
#include "../core/error.hpp"
#include "../core/pcap.hpp"
#include "../core/sweep.hpp"
#include "../core/synth.hpp"
#include "../core/util.hpp"
#include "../core/version.hpp"

using namespace airtrace;

namespace {

thread_local std::string g_last_error;

at_status map_errc(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return AT_EINVAL;
        case Errc::io: return AT_EIO;
        case Errc::parse: return AT_EPARSE;
        case Errc::unsupported_format: return AT_EFORMAT;
        case Errc::empty_trace: return AT_EEMPTY;
        case Errc::insufficient_data: return AT_EINSUFFICIENT;
        case Errc::config: return AT_ECONFIG;
        case Errc::dimension_mismatch: return AT_EDIM;
        case Errc::class_too_small: return AT_ECLASS_SMALL;
        case Errc::degenerate_separation: return AT_EDEGENERATE;
        case Errc::internal: return AT_EINTERNAL;
    }
    return AT_EINTERNAL;
}

template <typename Fn>
at_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return AT_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_errc(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AT_EINTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return AT_EINTERNAL;
    }
}

std::optional<ClassLabel> make_label(const char* device, const char* service) {
    if (device == nullptr || *device == '\0') return std::nullopt;
    const std::string svc = (service == nullptr || *service == '\0') ? "None" : service;
    return ClassLabel::parse(device, svc);
}

const char* c_or_empty(const char* s) { return s == nullptr ? "" : s; }

} // namespace

struct at_trace {
    Trace trace;
    std::string class_cache;
};

struct at_report {
    EvaluationReport report;
    std::string cache;
};

struct at_wcurve {
    WindowSweepCurve curve;
    std::string cache;
};

struct at_detector {
    Detector detector;
    std::string target_cache;
    explicit at_detector(Detector d) : detector(std::move(d)) {
        target_cache = detector.target().display();
    }
};

struct at_detection {
    DetectionReport report;
    std::string cache;
};

struct at_table {
    DetectionTable table;
    std::string cache;
};

struct at_dcurve {
    DelaySweepCurve curve;
    std::string cache;
};

namespace {

WindowParams to_wparams(const at_window_params* wp) {
    if (wp == nullptr) raise(Errc::invalid_argument, "window params are null");
    WindowParams p;
    p.window_size = wp->window_size;
    p.stride = wp->stride;
    if (wp->feature_set != nullptr && *wp->feature_set != '\0')
        p.feature_set = parse_feature_set(wp->feature_set);
    if (wp->source != nullptr && *wp->source != '\0') p.source = parse_source(wp->source);
    p.validate();
    return p;
}

ForestParams to_fparams(const at_forest_params* fp) {
    if (fp == nullptr) raise(Errc::invalid_argument, "forest params are null");
    ForestParams p;
    p.n_trees = fp->n_trees;
    p.k_folds = fp->k_folds;
    p.max_depth = fp->max_depth;
    p.min_samples_leaf = fp->min_samples_leaf;
    p.features_per_split = fp->features_per_split;
    p.seed = fp->seed;
    p.bootstrap = fp->bootstrap != 0;
    return p;
}

std::vector<Trace> to_traces(const at_trace* const* traces, size_t n) {
    if (traces == nullptr || n == 0) raise(Errc::invalid_argument, "no traces given");
    std::vector<Trace> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (traces[i] == nullptr) raise(Errc::invalid_argument, "null trace handle");
        out.push_back(traces[i]->trace);
    }
    return out;
}

} // namespace

extern "C" {

const char* at_version(void) { return AIRTRACE_VERSION; }

const char* at_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ */

at_status at_trace_from_csv(const char* path, const char* device, const char* service,
                            at_trace** out) {
    return guarded([&] {
        if (path == nullptr || out == nullptr) raise(Errc::invalid_argument, "null argument");
        *out = new at_trace{load_csv_trace(path, make_label(device, service)), {}};
    });
}

at_status at_trace_from_csv_mapped(const char* path, const char* map_spec, const char* device,
                                   const char* service, at_trace** out) {
    return guarded([&] {
        if (path == nullptr || out == nullptr) raise(Errc::invalid_argument, "null argument");
        const CsvMapping mapping = CsvMapping::parse_spec(c_or_empty(map_spec));
        *out = new at_trace{load_csv_mapped(path, mapping, make_label(device, service)), {}};
    });
}

at_status at_trace_from_pcap(const char* path, const char* receiver_mac, const char* device,
                             const char* service, at_trace** out, uint64_t* frames,
                             uint64_t* matched, uint64_t* truncated) {
    return guarded([&] {
        if (path == nullptr || receiver_mac == nullptr || out == nullptr)
            raise(Errc::invalid_argument, "null argument");
        PcapSummary summary;
        Trace t = load_pcap(path, MacAddress::parse(receiver_mac), &summary);
        if (frames != nullptr) *frames = summary.frames;
        if (matched != nullptr) *matched = summary.matched;
        if (truncated != nullptr) *truncated = summary.truncated;
        const auto label = make_label(device, service);
        if (label) t = t.with_label(*label);
        *out = new at_trace{std::move(t), {}};
    });
}

at_status at_trace_synth(const char* profile_json, int has_seed, uint64_t seed,
                         uint64_t n_packets, at_trace** out) {
    return guarded([&] {
        if (profile_json == nullptr || out == nullptr)
            raise(Errc::invalid_argument, "null argument");
        const TrafficProfile profile = TrafficProfile::from_json_text(profile_json);
        Trace t = has_seed ? profile.synthesize_seeded(n_packets, seed)
                           : profile.synthesize(n_packets);
        *out = new at_trace{std::move(t), {}};
    });
}

at_status at_trace_write_csv(const at_trace* trace, const char* path) {
    return guarded([&] {
        if (trace == nullptr || path == nullptr) raise(Errc::invalid_argument, "null argument");
        save_csv_trace(trace->trace, path);
    });
}

at_status at_trace_relabel(const at_trace* trace, const char* device, const char* service,
                           at_trace** out) {
    return guarded([&] {
        if (trace == nullptr || out == nullptr) raise(Errc::invalid_argument, "null argument");
        const auto label = make_label(device, service);
        if (!label) raise(Errc::invalid_argument, "relabel needs a device name");
        *out = new at_trace{trace->trace.with_label(*label), {}};
    });
}

at_status at_trace_reshape(const at_trace* trace, uint32_t pad_to, double max_delay,
                           uint64_t seed, uint64_t trace_id, at_trace** out) {
    return guarded([&] {
        if (trace == nullptr || out == nullptr) raise(Errc::invalid_argument, "null argument");
        ReshapePolicy policy;
        if (pad_to != 0) policy.pad_to = pad_to;
        policy.max_delay = max_delay;
        policy.seed = seed;
        *out = new at_trace{reshape_trace(trace->trace, policy, trace_id), {}};
    });
}

at_status at_trace_split(const at_trace* trace, double head_fraction, at_trace** head,
                         at_trace** tail) {
    return guarded([&] {
        if (trace == nullptr || head == nullptr || tail == nullptr)
            raise(Errc::invalid_argument, "null argument");
        auto [h, t] = split_trace(trace->trace, head_fraction);
        *head = new at_trace{std::move(h), {}};
        *tail = new at_trace{std::move(t), {}};
    });
}

size_t at_trace_len(const at_trace* trace) {
    return trace == nullptr ? 0 : trace->trace.size();
}

double at_trace_duration(const at_trace* trace) {
    if (trace == nullptr || trace->trace.empty()) return 0.0;
    return trace->trace.records().back().timestamp - trace->trace.records().front().timestamp;
}

uint32_t at_trace_max_size(const at_trace* trace) {
    return trace == nullptr ? 0 : trace->trace.max_packet_size();
}

const char* at_trace_class(const at_trace* trace) {
    if (trace == nullptr) return "";
    auto* mut = const_cast<at_trace*>(trace);
    mut->class_cache = trace->trace.label() ? trace->trace.label()->display() : "";
    return mut->class_cache.c_str();
}

void at_trace_free(at_trace* trace) { delete trace; }

/* ------------------------------------------------------------------ */

void at_window_params_init(at_window_params* p) {
    if (p == nullptr) return;
    p->window_size = 180;
    p->stride = 0;
    p->feature_set = nullptr;
    p->source = "combined";
}

void at_forest_params_init(at_forest_params* p) {
    if (p == nullptr) return;
    p->n_trees = 30;
    p->k_folds = 15;
    p->max_depth = 0;
    p->min_samples_leaf = 1;
    p->features_per_split = 0;
    p->seed = 0;
    p->bootstrap = 1;
}

/* ------------------------------------------------------------------ */

at_status at_features_to_csv(const at_trace* const* traces, size_t n_traces,
                             const at_window_params* wp, const char* config_hash,
                             const char* out_path) {
    return guarded([&] {
        if (out_path == nullptr) raise(Errc::invalid_argument, "null output path");
        const WindowParams params = to_wparams(wp);
        const std::vector<Trace> ts = to_traces(traces, n_traces);
        const FeatureDataset ds = extract_dataset(ts, params);
        write_file(out_path, export_features_csv(ds, params, c_or_empty(config_hash)));
    });
}

at_status at_identify(const at_trace* const* traces, size_t n_traces,
                      const at_window_params* wp, const at_forest_params* fp, at_report** out) {
    return guarded([&] {
        if (out == nullptr) raise(Errc::invalid_argument, "null output");
        const WindowParams params = to_wparams(wp);
        const ForestParams forest = to_fparams(fp);
        const std::vector<Trace> ts = to_traces(traces, n_traces);
        const FeatureDataset balanced =
            balance_classes(extract_dataset(ts, params), forest.seed);
        *out = new at_report{cross_validate(balanced, forest), {}};
    });
}

at_status at_identify_raw(const at_trace* const* traces, size_t n_traces,
                          const char* raw_source, uint64_t per_class_cap,
                          const at_forest_params* fp, at_report** out) {
    return guarded([&] {
        if (out == nullptr) raise(Errc::invalid_argument, "null output");
        RawSource source;
        const std::string name = c_or_empty(raw_source);
        if (name == "interarrival" || name == "iat") source = RawSource::Interarrival;
        else if (name == "size") source = RawSource::Size;
        else raise(Errc::config, "raw source must be \"interarrival\" or \"size\"");
        const ForestParams forest = to_fparams(fp);
        const std::vector<Trace> ts = to_traces(traces, n_traces);
        const FeatureDataset balanced =
            balance_classes(raw_dataset(ts, source, per_class_cap, forest.seed), forest.seed);
        *out = new at_report{cross_validate(balanced, forest), {}};
    });
}

double at_report_accuracy(const at_report* r) {
    return r == nullptr ? 0.0 : r->report.accuracy();
}

const char* at_report_csv(at_report* r, const char* config_hash) {
    if (r == nullptr) return "";
    r->cache = r->report.to_csv(c_or_empty(config_hash));
    return r->cache.c_str();
}

const char* at_report_summary(at_report* r, const char* config_hash, const char* extra_note) {
    if (r == nullptr) return "";
    std::vector<std::string> notes;
    if (extra_note != nullptr && *extra_note != '\0') notes.emplace_back(extra_note);
    r->cache = r->report.to_summary(c_or_empty(config_hash), notes);
    return r->cache.c_str();
}

void at_report_free(at_report* r) { delete r; }

at_status at_sweep_windows(const at_trace* const* traces, size_t n_traces,
                           const uint32_t* sizes, size_t n_sizes, const at_window_params* wp,
                           const at_forest_params* fp, at_wcurve** out) {
    return guarded([&] {
        if (out == nullptr || sizes == nullptr || n_sizes == 0)
            raise(Errc::invalid_argument, "no sweep sizes");
        const WindowParams params = to_wparams(wp);
        const ForestParams forest = to_fparams(fp);
        const std::vector<Trace> ts = to_traces(traces, n_traces);
        const std::vector<uint32_t> ns(sizes, sizes + n_sizes);
        *out = new at_wcurve{sweep_window_sizes(ts, ns, params, forest), {}};
    });
}

size_t at_wcurve_len(const at_wcurve* c) { return c == nullptr ? 0 : c->curve.points.size(); }

const char* at_wcurve_csv(at_wcurve* c, const char* config_hash) {
    if (c == nullptr) return "";
    c->cache = c->curve.to_csv(c_or_empty(config_hash));
    return c->cache.c_str();
}

void at_wcurve_free(at_wcurve* c) { delete c; }

/* ------------------------------------------------------------------ */

at_status at_detector_build(const at_trace* target, const at_trace* noise,
                            const at_window_params* wp, const at_forest_params* fp,
                            at_detector** out) {
    return guarded([&] {
        if (target == nullptr || noise == nullptr || out == nullptr)
            raise(Errc::invalid_argument, "null argument");
        *out = new at_detector(
            Detector::build(target->trace, noise->trace, to_wparams(wp), to_fparams(fp)));
    });
}

at_status at_detector_save(const at_detector* d, const char* path) {
    return guarded([&] {
        if (d == nullptr || path == nullptr) raise(Errc::invalid_argument, "null argument");
        d->detector.save(path);
    });
}

at_status at_detector_load(const char* path, at_detector** out) {
    return guarded([&] {
        if (path == nullptr || out == nullptr) raise(Errc::invalid_argument, "null argument");
        *out = new at_detector(Detector::load(path));
    });
}

const char* at_detector_target(const at_detector* d) {
    return d == nullptr ? "" : d->target_cache.c_str();
}

double at_detector_cv_accuracy(const at_detector* d) {
    return d == nullptr ? 0.0 : d->detector.cv_accuracy();
}

void at_detector_free(at_detector* d) { delete d; }

at_status at_detect(const at_detector* d, const at_trace* unknown, at_detection** out) {
    return guarded([&] {
        if (d == nullptr || unknown == nullptr || out == nullptr)
            raise(Errc::invalid_argument, "null argument");
        *out = new at_detection{d->detector.detect(unknown->trace), {}};
    });
}

size_t at_detection_chunks(const at_detection* r) {
    return r == nullptr ? 0 : r->report.verdicts.size();
}

size_t at_detection_positives(const at_detection* r) {
    return r == nullptr ? 0 : r->report.positives();
}

const char* at_detection_csv(at_detection* r, const char* config_hash) {
    if (r == nullptr) return "";
    r->cache = r->report.to_csv(c_or_empty(config_hash));
    return r->cache.c_str();
}

void at_detection_free(at_detection* r) { delete r; }

at_status at_evaluate_detection(const at_detector* const* detectors, size_t n_detectors,
                                const at_trace* const* tests, size_t n_tests, at_table** out) {
    return guarded([&] {
        if (detectors == nullptr || n_detectors == 0 || out == nullptr)
            raise(Errc::invalid_argument, "no detectors given");
        std::vector<Detector> ds;
        ds.reserve(n_detectors);
        for (size_t i = 0; i < n_detectors; ++i) {
            if (detectors[i] == nullptr) raise(Errc::invalid_argument, "null detector handle");
            ds.push_back(detectors[i]->detector);
        }
        // an empty test set is legal: every rate in the table becomes NA
        std::vector<Trace> ts;
        if (n_tests > 0) ts = to_traces(tests, n_tests);
        *out = new at_table{evaluate_detection(ds, ts), {}};
    });
}

size_t at_table_rows(const at_table* t) { return t == nullptr ? 0 : t->table.rows.size(); }

at_status at_table_row(const at_table* t, size_t i, double* tpr, double* fpr,
                       double* accuracy) {
    return guarded([&] {
        if (t == nullptr || i >= t->table.rows.size())
            raise(Errc::invalid_argument, "row index out of range");
        const DetectionRow& row = t->table.rows[i];
        if (tpr != nullptr) *tpr = row.tpr.value_or(std::nan(""));
        if (fpr != nullptr) *fpr = row.fpr.value_or(std::nan(""));
        if (accuracy != nullptr) *accuracy = row.accuracy;
    });
}

const char* at_table_csv(at_table* t, const char* config_hash) {
    if (t == nullptr) return "";
    t->cache = t->table.to_csv(c_or_empty(config_hash));
    return t->cache.c_str();
}

void at_table_free(at_table* t) { delete t; }

/* ------------------------------------------------------------------ */

at_status at_default_delay_grid(double* out, size_t* inout_len) {
    return guarded([&] {
        if (inout_len == nullptr) raise(Errc::invalid_argument, "null length pointer");
        const std::vector<double> grid = default_delay_grid();
        if (out == nullptr) {
            *inout_len = grid.size();
            return;
        }
        if (*inout_len < grid.size())
            raise(Errc::invalid_argument, "grid buffer too small");
        std::memcpy(out, grid.data(), grid.size() * sizeof(double));
        *inout_len = grid.size();
    });
}

at_status at_sweep_delay(const at_trace* const* traces, size_t n_traces, const double* delays,
                         size_t n_delays, const at_window_params* wp,
                         const at_forest_params* fp, int with_padding, at_dcurve** out) {
    return guarded([&] {
        if (out == nullptr || delays == nullptr || n_delays == 0)
            raise(Errc::invalid_argument, "no sweep delays");
        const WindowParams params = to_wparams(wp);
        const ForestParams forest = to_fparams(fp);
        const std::vector<Trace> ts = to_traces(traces, n_traces);
        const std::vector<double> ds(delays, delays + n_delays);
        *out = new at_dcurve{sweep_delay(ts, ds, params, forest, with_padding != 0), {}};
    });
}

size_t at_dcurve_len(const at_dcurve* c) { return c == nullptr ? 0 : c->curve.points.size(); }

at_status at_dcurve_point(const at_dcurve* c, size_t i, double* delay_s, double* acc_clean,
                          double* acc_retrained) {
    return guarded([&] {
        if (c == nullptr || i >= c->curve.points.size())
            raise(Errc::invalid_argument, "point index out of range");
        const DelaySweepPoint& p = c->curve.points[i];
        if (delay_s != nullptr) *delay_s = p.max_delay;
        if (acc_clean != nullptr) *acc_clean = p.acc_clean_model;
        if (acc_retrained != nullptr) *acc_retrained = p.acc_retrained;
    });
}

const char* at_dcurve_csv(at_dcurve* c, const char* config_hash) {
    if (c == nullptr) return "";
    c->cache = c->curve.to_csv(c_or_empty(config_hash));
    return c->cache.c_str();
}

void at_dcurve_free(at_dcurve* c) { delete c; }

/* ------------------------------------------------------------------ */

at_status at_config_hash(const char* text, char* out, size_t out_len) {
    return guarded([&] {
        if (text == nullptr || out == nullptr) raise(Errc::invalid_argument, "null argument");
        const std::string hex = fnv1a64_hex(text);
        if (out_len < hex.size() + 1) raise(Errc::invalid_argument, "hash buffer too small");
        std::memcpy(out, hex.c_str(), hex.size() + 1);
    });
}

} // extern "C"
