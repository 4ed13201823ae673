// airtrace command-line front end. Talks to the toolkit exclusively through
// the C API in airtrace.h; experiment wiring (config files, path handling,
// report placement) lives here, the math lives in the library.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airtrace.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError {
    std::string message;
};

[[noreturn]] void fail(const std::string& message) { throw CliError{message}; }

void check(at_status st, const std::string& what) {
    if (st != AT_OK) fail(what + ": " + at_last_error());
}

// RAII over the C handles so early exits cannot leak.
template <typename T, void (*FreeFn)(T*)>
class Handle {
public:
    Handle() = default;
    ~Handle() { reset(); }
    Handle(Handle&& other) noexcept : p_(other.p_) { other.p_ = nullptr; }
    Handle& operator=(Handle&& other) noexcept {
        if (this != &other) {
            reset();
            p_ = other.p_;
            other.p_ = nullptr;
        }
        return *this;
    }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;

    T** out() {
        reset();
        return &p_;
    }
    T* get() const { return p_; }
    explicit operator bool() const { return p_ != nullptr; }

private:
    void reset() {
        if (p_ != nullptr) FreeFn(p_);
        p_ = nullptr;
    }
    T* p_ = nullptr;
};

using TraceH = Handle<at_trace, at_trace_free>;
using ReportH = Handle<at_report, at_report_free>;
using WCurveH = Handle<at_wcurve, at_wcurve_free>;
using DCurveH = Handle<at_dcurve, at_dcurve_free>;
using DetectorH = Handle<at_detector, at_detector_free>;
using DetectionH = Handle<at_detection, at_detection_free>;
using TableH = Handle<at_table, at_table_free>;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    bool verbose = false;
};

void note(const GlobalOpts& g, const std::string& line) {
    if (g.verbose) std::cerr << line << "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write file: " + path.string());
    out << content;
    if (!out) fail("write failed: " + path.string());
}

std::string sanitize(std::string name) {
    for (char& c : name)
        if (c == ' ' || c == '/' || c == '\\') c = '_';
    return name;
}

/* ------------------------------------------------------------------ */
/* Experiment configuration                                            */

struct Experiment {
    json doc;
    fs::path base_dir; // config location; relative input paths resolve here
    std::uint64_t seed = 0;
    std::string config_hash;

    // Stable storage backing the const char* fields of the param structs.
    std::string feature_set_str;
    std::string source_str;
    at_window_params wp{};
    at_forest_params fp{};
};

std::string hash_text(const std::string& text) {
    char buf[32];
    check(at_config_hash(text.c_str(), buf, sizeof(buf)), "config hash");
    return buf;
}

fs::path resolve(const Experiment& exp, const std::string& path) {
    fs::path p(path);
    return p.is_absolute() ? p : exp.base_dir / p;
}

Experiment load_experiment(const GlobalOpts& g, bool need_config) {
    Experiment exp;
    at_window_params_init(&exp.wp);
    at_forest_params_init(&exp.fp);
    exp.source_str = "combined";

    if (g.config_path.empty()) {
        if (need_config) fail("this command needs --config <file>");
        exp.doc = json::object();
        exp.base_dir = fs::current_path();
    } else {
        if (!fs::exists(g.config_path)) fail("config file does not exist: " + g.config_path);
        exp.doc = json::parse(read_text_file(g.config_path), nullptr, false);
        if (exp.doc.is_discarded()) fail("config is not valid JSON: " + g.config_path);
        exp.base_dir = fs::absolute(g.config_path).parent_path();
    }

    try {
        if (g.seed) {
            exp.seed = *g.seed;
            exp.doc["seed"] = exp.seed; // folded in so the hash tracks the override
        } else if (exp.doc.contains("seed")) {
            exp.seed = exp.doc.at("seed").get<std::uint64_t>();
        } else if (need_config) {
            fail("config must set \"seed\" (or pass --seed); runs must be reproducible");
        }

        if (exp.doc.contains("window")) {
            const json& w = exp.doc.at("window");
            if (w.contains("window_size")) exp.wp.window_size = w.at("window_size").get<std::uint32_t>();
            if (w.contains("stride")) exp.wp.stride = w.at("stride").get<std::uint32_t>();
            if (w.contains("source")) exp.source_str = w.at("source").get<std::string>();
            if (w.contains("feature_set")) {
                std::string joined;
                for (const auto& s : w.at("feature_set")) {
                    if (!joined.empty()) joined += ",";
                    joined += s.get<std::string>();
                }
                exp.feature_set_str = joined;
            }
        }
        if (exp.doc.contains("forest")) {
            const json& f = exp.doc.at("forest");
            if (f.contains("n_trees")) exp.fp.n_trees = f.at("n_trees").get<std::uint32_t>();
            if (f.contains("k_folds")) exp.fp.k_folds = f.at("k_folds").get<std::uint32_t>();
            if (f.contains("max_depth")) exp.fp.max_depth = f.at("max_depth").get<std::uint32_t>();
            if (f.contains("min_samples_leaf"))
                exp.fp.min_samples_leaf = f.at("min_samples_leaf").get<std::uint32_t>();
            if (f.contains("features_per_split"))
                exp.fp.features_per_split = f.at("features_per_split").get<std::uint32_t>();
        }
    } catch (const json::exception& e) {
        fail(std::string("config error: ") + e.what());
    }

    exp.wp.source = exp.source_str.c_str();
    exp.wp.feature_set = exp.feature_set_str.empty() ? nullptr : exp.feature_set_str.c_str();
    exp.fp.seed = exp.seed;
    exp.config_hash = hash_text(exp.doc.dump());
    return exp;
}

// One trace entry: {"device":..., "service":..., and exactly one of
// "csv" (+"map"), "pcap" (+"mac"), "profile" (+"n_packets"/"seed")}.
TraceH load_trace_entry(const Experiment& exp, const json& entry, const GlobalOpts& g,
                        bool require_label) {
    std::string device, service;
    try {
        if (entry.contains("device")) device = entry.at("device").get<std::string>();
        if (entry.contains("service")) service = entry.at("service").get<std::string>();

        const int kinds = static_cast<int>(entry.contains("csv")) +
                          static_cast<int>(entry.contains("pcap")) +
                          static_cast<int>(entry.contains("profile"));
        if (kinds != 1)
            fail("trace entry needs exactly one of \"csv\", \"pcap\", \"profile\": " +
                 entry.dump());
        if (require_label && device.empty())
            fail("trace entry needs a \"device\" label: " + entry.dump());

        TraceH trace;
        if (entry.contains("csv")) {
            const fs::path path = resolve(exp, entry.at("csv").get<std::string>());
            if (!fs::exists(path)) fail("input trace does not exist: " + path.string());
            if (entry.contains("map")) {
                check(at_trace_from_csv_mapped(path.string().c_str(),
                                               entry.at("map").get<std::string>().c_str(),
                                               device.c_str(), service.c_str(), trace.out()),
                      "reading " + path.string());
            } else {
                check(at_trace_from_csv(path.string().c_str(), device.c_str(), service.c_str(),
                                        trace.out()),
                      "reading " + path.string());
            }
        } else if (entry.contains("pcap")) {
            const fs::path path = resolve(exp, entry.at("pcap").get<std::string>());
            if (!fs::exists(path)) fail("input capture does not exist: " + path.string());
            if (!entry.contains("mac")) fail("pcap entry needs \"mac\": " + entry.dump());
            std::uint64_t frames = 0, matched = 0, truncated = 0;
            check(at_trace_from_pcap(path.string().c_str(),
                                     entry.at("mac").get<std::string>().c_str(), device.c_str(),
                                     service.c_str(), trace.out(), &frames, &matched, &truncated),
                  "reading " + path.string());
            note(g, path.string() + ": frames=" + std::to_string(frames) +
                        " matched=" + std::to_string(matched) +
                        " truncated=" + std::to_string(truncated));
        } else {
            std::string profile_text;
            const json& prof = entry.at("profile");
            if (prof.is_string()) {
                const fs::path path = resolve(exp, prof.get<std::string>());
                if (!fs::exists(path)) fail("profile does not exist: " + path.string());
                profile_text = read_text_file(path.string());
            } else {
                profile_text = prof.dump();
            }
            const bool has_seed = entry.contains("seed");
            const std::uint64_t seed = has_seed ? entry.at("seed").get<std::uint64_t>() : 0;
            const std::uint64_t n =
                entry.contains("n_packets") ? entry.at("n_packets").get<std::uint64_t>() : 0;
            TraceH raw;
            check(at_trace_synth(profile_text.c_str(), has_seed ? 1 : 0, seed, n, raw.out()),
                  "synthesizing trace");
            if (!device.empty()) {
                check(at_trace_relabel(raw.get(), device.c_str(), service.c_str(), trace.out()),
                      "labeling trace");
            } else {
                trace = std::move(raw);
            }
        }
        return trace;
    } catch (const json::exception& e) {
        fail(std::string("trace entry error: ") + e.what());
    }
}

std::vector<TraceH> load_config_traces(const Experiment& exp, const GlobalOpts& g,
                                       bool require_label) {
    if (!exp.doc.contains("traces") || !exp.doc.at("traces").is_array() ||
        exp.doc.at("traces").empty())
        fail("config needs a non-empty \"traces\" array");
    std::vector<TraceH> traces;
    for (const json& entry : exp.doc.at("traces"))
        traces.push_back(load_trace_entry(exp, entry, g, require_label));
    for (const TraceH& t : traces)
        note(g, std::string(at_trace_class(t.get())) + ": " +
                    std::to_string(at_trace_len(t.get())) + " packets");
    return traces;
}

std::vector<const at_trace*> raw_ptrs(const std::vector<TraceH>& traces) {
    std::vector<const at_trace*> out;
    out.reserve(traces.size());
    for (const TraceH& t : traces) out.push_back(t.get());
    return out;
}

/* ------------------------------------------------------------------ */
/* Subcommands                                                         */

struct IngestArgs {
    std::string csv, map_spec, pcap, mac, device, service, out_file;
};

int cmd_ingest(const GlobalOpts& g, const IngestArgs& a) {
    if (a.out_file.empty()) fail("ingest needs --out <file>");
    if (a.csv.empty() == a.pcap.empty())
        fail("ingest needs exactly one of --csv or --pcap");

    TraceH trace;
    if (!a.csv.empty()) {
        if (!fs::exists(a.csv)) fail("input trace does not exist: " + a.csv);
        if (!a.map_spec.empty()) {
            check(at_trace_from_csv_mapped(a.csv.c_str(), a.map_spec.c_str(), a.device.c_str(),
                                           a.service.c_str(), trace.out()),
                  "reading " + a.csv);
        } else {
            check(at_trace_from_csv(a.csv.c_str(), a.device.c_str(), a.service.c_str(),
                                    trace.out()),
                  "reading " + a.csv);
        }
        std::cerr << "kept " << at_trace_len(trace.get()) << " records from " << a.csv << "\n";
    } else {
        if (!fs::exists(a.pcap)) fail("input capture does not exist: " + a.pcap);
        if (a.mac.empty()) fail("--pcap needs --mac <receiver address>");
        std::uint64_t frames = 0, matched = 0, truncated = 0;
        check(at_trace_from_pcap(a.pcap.c_str(), a.mac.c_str(), a.device.c_str(),
                                 a.service.c_str(), trace.out(), &frames, &matched, &truncated),
              "reading " + a.pcap);
        std::cerr << "frames seen: " << frames << ", kept for " << a.mac << ": " << matched
                  << ", truncated skipped: " << truncated << "\n";
    }
    check(at_trace_write_csv(trace.get(), a.out_file.c_str()), "writing " + a.out_file);
    note(g, "wrote " + a.out_file);
    return 0;
}

struct SynthArgs {
    std::string profile, device, service, out_file;
    std::uint64_t n_packets = 0;
    std::optional<std::uint64_t> seed;
};

int cmd_synth(const GlobalOpts& g, const SynthArgs& a) {
    if (a.profile.empty()) fail("synth needs --profile <json file>");
    if (a.out_file.empty()) fail("synth needs --out <file>");
    if (!fs::exists(a.profile)) fail("profile does not exist: " + a.profile);

    const std::string text = read_text_file(a.profile);
    const std::optional<std::uint64_t> seed = a.seed ? a.seed : g.seed;
    TraceH raw;
    check(at_trace_synth(text.c_str(), seed ? 1 : 0, seed.value_or(0), a.n_packets, raw.out()),
          "synthesizing from " + a.profile);
    TraceH trace;
    if (!a.device.empty()) {
        check(at_trace_relabel(raw.get(), a.device.c_str(), a.service.c_str(), trace.out()),
              "labeling trace");
    } else {
        trace = std::move(raw);
    }
    check(at_trace_write_csv(trace.get(), a.out_file.c_str()), "writing " + a.out_file);
    std::cerr << "synthesized " << at_trace_len(trace.get()) << " packets ("
              << at_trace_duration(trace.get()) << " s) -> " << a.out_file << "\n";
    return 0;
}

int cmd_features(const GlobalOpts& g) {
    Experiment exp = load_experiment(g, true);
    const std::vector<TraceH> traces = load_config_traces(exp, g, true);
    const std::vector<const at_trace*> ptrs = raw_ptrs(traces);

    const fs::path out = fs::path(g.out_dir) / "features.csv";
    fs::create_directories(g.out_dir);
    check(at_features_to_csv(ptrs.data(), ptrs.size(), &exp.wp, exp.config_hash.c_str(),
                             out.string().c_str()),
          "extracting features");
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

struct IdentifyArgs {
    std::string raw_baseline; // "", "interarrival", or "size"
};

int cmd_identify(const GlobalOpts& g, const IdentifyArgs& a) {
    Experiment exp = load_experiment(g, true);
    const std::vector<TraceH> traces = load_config_traces(exp, g, true);
    const std::vector<const at_trace*> ptrs = raw_ptrs(traces);
    fs::create_directories(g.out_dir);

    ReportH report;
    check(at_identify(ptrs.data(), ptrs.size(), &exp.wp, &exp.fp, report.out()),
          "cross-validating");
    write_text_file(fs::path(g.out_dir) / "confusion.csv",
                    at_report_csv(report.get(), exp.config_hash.c_str()));
    write_text_file(fs::path(g.out_dir) / "summary.txt",
                    at_report_summary(report.get(), exp.config_hash.c_str(), nullptr));
    std::cout << "overall accuracy: " << at_report_accuracy(report.get()) << "\n";

    if (exp.doc.contains("window_sweep")) {
        std::vector<std::uint32_t> sizes;
        try {
            for (const auto& s : exp.doc.at("window_sweep"))
                sizes.push_back(s.get<std::uint32_t>());
        } catch (const json::exception& e) {
            fail(std::string("window_sweep must be an array of sizes: ") + e.what());
        }
        WCurveH curve;
        check(at_sweep_windows(ptrs.data(), ptrs.size(), sizes.data(), sizes.size(), &exp.wp,
                               &exp.fp, curve.out()),
              "window sweep");
        write_text_file(fs::path(g.out_dir) / "window_sweep.csv",
                        at_wcurve_csv(curve.get(), exp.config_hash.c_str()));
        note(g, "window sweep over " + std::to_string(sizes.size()) + " sizes written");
    }

    std::string raw_source = a.raw_baseline;
    if (raw_source.empty() && exp.doc.contains("raw_baseline"))
        raw_source = exp.doc.at("raw_baseline").get<std::string>();
    if (!raw_source.empty()) {
        std::uint64_t cap = 20000;
        if (exp.doc.contains("raw_cap")) cap = exp.doc.at("raw_cap").get<std::uint64_t>();
        ReportH raw;
        check(at_identify_raw(ptrs.data(), ptrs.size(), raw_source.c_str(), cap, &exp.fp,
                              raw.out()),
              "raw baseline");
        const std::string caveat =
            "note: raw baseline treats every " + raw_source +
            " value as a 1-feature sample" +
            (cap > 0 ? " (per-class cap " + std::to_string(cap) + ")" : "") +
            "; it is a floor, not a tuned competitor";
        write_text_file(fs::path(g.out_dir) / "raw_baseline.csv",
                        at_report_csv(raw.get(), exp.config_hash.c_str()));
        write_text_file(fs::path(g.out_dir) / "raw_baseline_summary.txt",
                        at_report_summary(raw.get(), exp.config_hash.c_str(), caveat.c_str()));
        std::cout << "raw " << raw_source
                  << " baseline accuracy: " << at_report_accuracy(raw.get()) << "\n";
    }
    return 0;
}

struct DetectArgs {
    std::string save_models;
};

int cmd_detect(const GlobalOpts& g, const DetectArgs& a) {
    Experiment exp = load_experiment(g, true);
    if (!exp.doc.contains("noise")) fail("detect config needs a \"noise\" trace entry");
    const std::vector<TraceH> targets = load_config_traces(exp, g, true);

    TraceH noise_raw = load_trace_entry(exp, exp.doc.at("noise"), g, false);
    TraceH noise;
    check(at_trace_relabel(noise_raw.get(), "Noise", "None", noise.out()), "labeling noise");

    double test_split = 0.2;
    if (exp.doc.contains("test_split")) test_split = exp.doc.at("test_split").get<double>();
    if (!(test_split > 0.0 && test_split < 1.0)) fail("test_split must lie in (0, 1)");

    // Contiguous time split: detectors train on the head of every trace and
    // are scored on tails they have never seen.
    TraceH noise_train, noise_test;
    check(at_trace_split(noise.get(), 1.0 - test_split, noise_train.out(), noise_test.out()),
          "splitting noise trace");

    std::vector<DetectorH> detectors;
    std::vector<TraceH> tests;
    std::vector<std::string> seen_classes;
    for (const TraceH& target : targets) {
        const std::string klass = at_trace_class(target.get());
        for (const std::string& seen : seen_classes)
            if (seen == klass) fail("duplicate class in detect config: " + klass);
        seen_classes.push_back(klass);

        TraceH train, test;
        check(at_trace_split(target.get(), 1.0 - test_split, train.out(), test.out()),
              "splitting " + klass);
        DetectorH det;
        check(at_detector_build(train.get(), noise_train.get(), &exp.wp, &exp.fp, det.out()),
              "building detector for " + klass);
        note(g, klass + ": detector cv accuracy " +
                    std::to_string(at_detector_cv_accuracy(det.get())));
        detectors.push_back(std::move(det));
        tests.push_back(std::move(test));
    }
    tests.push_back(std::move(noise_test));

    if (!a.save_models.empty()) {
        fs::create_directories(a.save_models);
        for (const DetectorH& det : detectors) {
            const fs::path path =
                fs::path(a.save_models) / (sanitize(at_detector_target(det.get())) + ".json");
            check(at_detector_save(det.get(), path.string().c_str()),
                  "saving " + path.string());
        }
    }

    std::vector<const at_detector*> det_ptrs;
    for (const DetectorH& d : detectors) det_ptrs.push_back(d.get());
    const std::vector<const at_trace*> test_ptrs = raw_ptrs(tests);

    TableH table;
    check(at_evaluate_detection(det_ptrs.data(), det_ptrs.size(), test_ptrs.data(),
                                test_ptrs.size(), table.out()),
          "evaluating detection");
    fs::create_directories(g.out_dir);
    write_text_file(fs::path(g.out_dir) / "detection_table.csv",
                    at_table_csv(table.get(), exp.config_hash.c_str()));
    std::cout << "detection table: " << at_table_rows(table.get()) << " rows -> "
              << (fs::path(g.out_dir) / "detection_table.csv").string() << "\n";
    return 0;
}

struct EclipseArgs {
    std::optional<double> delay;
    bool no_pad = false;
    bool write_reshaped = true;
};

int cmd_eclipse(const GlobalOpts& g, const EclipseArgs& a) {
    Experiment exp = load_experiment(g, true);
    const std::vector<TraceH> traces = load_config_traces(exp, g, true);
    const std::vector<const at_trace*> ptrs = raw_ptrs(traces);
    fs::create_directories(g.out_dir);

    bool with_padding = !a.no_pad;
    if (exp.doc.contains("reshape") && exp.doc.at("reshape").contains("pad") && !a.no_pad)
        with_padding = exp.doc.at("reshape").at("pad").get<bool>();

    std::vector<double> delays;
    if (a.delay) {
        delays.push_back(*a.delay);
    } else if (exp.doc.contains("delay_sweep") && exp.doc.at("delay_sweep").is_array()) {
        try {
            for (const auto& d : exp.doc.at("delay_sweep")) delays.push_back(d.get<double>());
        } catch (const json::exception& e) {
            fail(std::string("delay_sweep must be an array of seconds: ") + e.what());
        }
    } else {
        std::size_t n = 0;
        check(at_default_delay_grid(nullptr, &n), "delay grid");
        delays.resize(n);
        check(at_default_delay_grid(delays.data(), &n), "delay grid");
    }

    DCurveH curve;
    check(at_sweep_delay(ptrs.data(), ptrs.size(), delays.data(), delays.size(), &exp.wp,
                         &exp.fp, with_padding ? 1 : 0, curve.out()),
          "delay sweep");
    write_text_file(fs::path(g.out_dir) / "eclipse_curve.csv",
                    at_dcurve_csv(curve.get(), exp.config_hash.c_str()));

    double last_delay = 0, acc_clean = 0, acc_retrained = 0;
    check(at_dcurve_point(curve.get(), at_dcurve_len(curve.get()) - 1, &last_delay, &acc_clean,
                          &acc_retrained),
          "reading sweep curve");
    std::cout << "max delay " << last_delay << " s: clean-model accuracy " << acc_clean
              << ", retrained accuracy " << acc_retrained << "\n";

    if (a.write_reshaped) {
        // Emit the reshaped traces at the strongest setting of the sweep so
        // the defense's output can be inspected or re-ingested.
        std::uint32_t pad_to = 0;
        if (with_padding) {
            for (const at_trace* t : ptrs) pad_to = std::max(pad_to, at_trace_max_size(t));
        }
        const fs::path dir = fs::path(g.out_dir) / "reshaped";
        fs::create_directories(dir);
        for (std::size_t i = 0; i < ptrs.size(); ++i) {
            TraceH reshaped;
            check(at_trace_reshape(ptrs[i], pad_to, last_delay, exp.seed, i, reshaped.out()),
                  "reshaping trace");
            const std::string klass = at_trace_class(ptrs[i]);
            const fs::path path =
                dir / ("trace_" + std::to_string(i) + "_" + sanitize(klass) + ".csv");
            check(at_trace_write_csv(reshaped.get(), path.string().c_str()),
                  "writing " + path.string());
        }
        note(g, "reshaped traces written to " + dir.string());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"airtrace: device/service identification from encrypted WiFi traffic, "
                 "and the traffic-reshaping defense against it"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "experiment config (JSON)");
    app.add_option("--seed", g.seed, "seed override (wins over the config)");
    app.add_option("--out", g.out_dir, "output directory (default: out)");
    app.add_flag("--verbose", g.verbose, "progress details on stderr");

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand("ingest", "convert a capture to the canonical CSV");
    ingest->add_option("--csv", ingest_args.csv, "CSV input");
    ingest->add_option("--map", ingest_args.map_spec,
                       "column mapping, e.g. time=col0,size=col2,scale=1e-6");
    ingest->add_option("--pcap", ingest_args.pcap, "pcap input");
    ingest->add_option("--mac", ingest_args.mac, "receiver MAC filter (AA:BB:CC:DD:EE:FF)");
    ingest->add_option("--device", ingest_args.device, "class device name");
    ingest->add_option("--service", ingest_args.service, "class service name");
    ingest->add_option("--out", ingest_args.out_file, "output trace file")->required();

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a trace from a profile");
    synth->add_option("--profile", synth_args.profile, "profile JSON file")->required();
    synth->add_option("--n", synth_args.n_packets, "packet count (0 = profile default)");
    synth->add_option("--seed", synth_args.seed, "generator seed");
    synth->add_option("--device", synth_args.device, "class device name");
    synth->add_option("--service", synth_args.service, "class service name");
    synth->add_option("--out", synth_args.out_file, "output trace file")->required();

    app.add_subcommand("features", "extract window features to CSV");

    IdentifyArgs identify_args;
    CLI::App* identify =
        app.add_subcommand("identify", "cross-validated multi-class identification");
    identify->add_option("--raw-baseline", identify_args.raw_baseline,
                         "also run the per-packet baseline (interarrival|size)");

    DetectArgs detect_args;
    CLI::App* detect = app.add_subcommand("detect", "one-vs-noise detection table");
    detect->add_option("--save-models", detect_args.save_models,
                       "directory to store detector bundles");

    EclipseArgs eclipse_args;
    CLI::App* eclipse = app.add_subcommand("eclipse", "traffic reshaping and delay sweep");
    eclipse->add_option("--delay", eclipse_args.delay,
                        "single max delay in seconds instead of the sweep grid");
    eclipse->add_flag("--no-pad", eclipse_args.no_pad, "skip constant-size padding");
    eclipse->add_flag("!--no-reshaped-out", eclipse_args.write_reshaped,
                      "skip writing reshaped traces");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(g, ingest_args);
        if (synth->parsed()) return cmd_synth(g, synth_args);
        if (app.get_subcommand("features")->parsed()) return cmd_features(g);
        if (identify->parsed()) return cmd_identify(g, identify_args);
        if (detect->parsed()) return cmd_detect(g, detect_args);
        if (eclipse->parsed()) return cmd_eclipse(g, eclipse_args);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
