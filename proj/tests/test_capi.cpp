#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "airtrace.h"

namespace {

// Two cleanly separated synthetic classes plus crowd noise, shared by the
// pipeline tests below.
const char* kFastBig = R"({
    "interarrival": {"family": "lognormal", "mu": -8.0, "sigma": 0.4},
    "size": {"values": [1200, 1400]}
})";
const char* kSlowSmall = R"({
    "interarrival": {"family": "lognormal", "mu": -6.0, "sigma": 0.4},
    "size": {"values": [100, 300]}
})";
const char* kCrowd = R"({
    "mixture": {
        "segment_packets": [300, 800],
        "components": [
            {"interarrival": {"family": "exponential", "mean": 1e-4}, "size": {"values": [1000, 1500]}},
            {"interarrival": {"family": "exponential", "mean": 5e-4}, "size": {"values": [300, 700]}},
            {"interarrival": {"family": "exponential", "mean": 2.5e-3}, "size": {"values": [60, 200]}}
        ]
    }
})";

at_trace* synth_labeled(const char* profile, uint64_t seed, uint64_t n, const char* device,
                        const char* service) {
    at_trace* raw = nullptr;
    REQUIRE(at_trace_synth(profile, 1, seed, n, &raw) == AT_OK);
    at_trace* labeled = nullptr;
    REQUIRE(at_trace_relabel(raw, device, service, &labeled) == AT_OK);
    at_trace_free(raw);
    return labeled;
}

std::string slurp(const char* path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("version and error channel") {
    REQUIRE(at_version() != nullptr);
    CHECK(std::strlen(at_version()) >= 5);

    at_trace* t = nullptr;
    CHECK(at_trace_from_csv("/nonexistent/trace.csv", nullptr, nullptr, &t) == AT_EIO);
    CHECK(std::strstr(at_last_error(), "/nonexistent/trace.csv") != nullptr);
    CHECK(t == nullptr);

    CHECK(at_trace_from_csv(nullptr, nullptr, nullptr, &t) == AT_EINVAL);
    CHECK(at_trace_synth("{]", 0, 0, 10, &t) == AT_ECONFIG);
    CHECK(at_trace_from_pcap("/nonexistent.pcap", "not-a-mac", nullptr, nullptr, &t, nullptr,
                             nullptr, nullptr) == AT_EINVAL);
}

TEST_CASE("parameter defaults") {
    at_window_params wp;
    at_window_params_init(&wp);
    CHECK(wp.window_size == 180);
    CHECK(wp.stride == 0);
    CHECK(wp.feature_set == nullptr);
    CHECK(std::strcmp(wp.source, "combined") == 0);

    at_forest_params fp;
    at_forest_params_init(&fp);
    CHECK(fp.n_trees == 30);
    CHECK(fp.k_folds == 15);
    CHECK(fp.max_depth == 0);
    CHECK(fp.min_samples_leaf == 1);
    CHECK(fp.features_per_split == 0);
    CHECK(fp.bootstrap == 1);
}

TEST_CASE("trace lifecycle: synth, inspect, write, read back") {
    at_trace* t = synth_labeled(kFastBig, 7, 2000, "EchoDot", "Music");
    CHECK(at_trace_len(t) == 2000);
    CHECK(at_trace_duration(t) > 0.0);
    CHECK(at_trace_max_size(t) == 1400);
    CHECK(std::strcmp(at_trace_class(t), "EchoDot Music") == 0);

    const char* path = "/tmp/at_capi_trace.csv";
    REQUIRE(at_trace_write_csv(t, path) == AT_OK);
    at_trace* back = nullptr;
    REQUIRE(at_trace_from_csv(path, "EchoDot", "Music", &back) == AT_OK);
    CHECK(at_trace_len(back) == 2000);
    CHECK(std::strcmp(at_trace_class(back), "EchoDot Music") == 0);
    at_trace_free(back);
    std::remove(path);

    // determinism across calls with the same seed
    at_trace* again = synth_labeled(kFastBig, 7, 2000, "EchoDot", "Music");
    CHECK(at_trace_duration(again) == at_trace_duration(t));
    at_trace* other = synth_labeled(kFastBig, 8, 2000, "EchoDot", "Music");
    CHECK(at_trace_duration(other) != at_trace_duration(t));

    at_trace_free(other);
    at_trace_free(again);
    at_trace_free(t);
}

TEST_CASE("mapped csv ingest") {
    const char* path = "/tmp/at_capi_mapped.csv";
    {
        std::ofstream out(path);
        out << "when_us,proto,bytes\n0,udp,100\n250000,udp,200\n1250000,udp,300\n";
    }
    at_trace* t = nullptr;
    REQUIRE(at_trace_from_csv_mapped(path, "time=when_us,size=bytes,scale=1e-6", "Echo", "News",
                                     &t) == AT_OK);
    CHECK(at_trace_len(t) == 3);
    CHECK(at_trace_duration(t) == doctest::Approx(1.25));
    CHECK(at_trace_max_size(t) == 300);
    at_trace_free(t);

    CHECK(at_trace_from_csv_mapped(path, "time=missing,size=bytes", nullptr, nullptr, &t) ==
          AT_EPARSE);
    std::remove(path);
}

TEST_CASE("split and reshape") {
    at_trace* t = synth_labeled(kFastBig, 3, 1000, "Synthetic-0", nullptr);
    at_trace *head = nullptr, *tail = nullptr;
    REQUIRE(at_trace_split(t, 0.8, &head, &tail) == AT_OK);
    CHECK(at_trace_len(head) == 800);
    CHECK(at_trace_len(tail) == 200);
    CHECK(std::strcmp(at_trace_class(tail), "Synthetic-0") == 0);
    CHECK(at_trace_split(t, 1.5, &head, &tail) == AT_EINVAL);

    at_trace* reshaped = nullptr;
    REQUIRE(at_trace_reshape(t, 1500, 1e-3, 42, 0, &reshaped) == AT_OK);
    CHECK(at_trace_len(reshaped) == 1000);
    CHECK(at_trace_max_size(reshaped) == 1500);

    at_trace* reshaped2 = nullptr;
    REQUIRE(at_trace_reshape(t, 1500, 1e-3, 42, 0, &reshaped2) == AT_OK);
    CHECK(at_trace_duration(reshaped2) == at_trace_duration(reshaped));
    at_trace* reshaped3 = nullptr;
    REQUIRE(at_trace_reshape(t, 1500, 1e-3, 42, 1, &reshaped3) == AT_OK);
    CHECK(at_trace_duration(reshaped3) != at_trace_duration(reshaped));

    at_trace* truncating = nullptr;
    CHECK(at_trace_reshape(t, 100, 0.0, 0, 0, &truncating) == AT_EINVAL);

    at_trace_free(reshaped3);
    at_trace_free(reshaped2);
    at_trace_free(reshaped);
    at_trace_free(tail);
    at_trace_free(head);
    at_trace_free(t);
}

TEST_CASE("feature export and identification pipeline") {
    at_trace* a = synth_labeled(kFastBig, 1, 6000, "Synthetic-0", nullptr);
    at_trace* b = synth_labeled(kSlowSmall, 2, 6000, "Synthetic-1", nullptr);
    const at_trace* traces[] = {a, b};

    at_window_params wp;
    at_window_params_init(&wp);
    wp.window_size = 100;
    at_forest_params fp;
    at_forest_params_init(&fp);
    fp.n_trees = 10;
    fp.k_folds = 5;
    fp.seed = 11;

    const char* fpath = "/tmp/at_capi_features.csv";
    REQUIRE(at_features_to_csv(traces, 2, &wp, "beef", fpath) == AT_OK);
    const std::string features = slurp(fpath);
    CHECK(features.find("# config: beef\n") != std::string::npos);
    CHECK(features.find("Synthetic-1,None,") != std::string::npos);
    std::remove(fpath);

    at_report* report = nullptr;
    REQUIRE(at_identify(traces, 2, &wp, &fp, &report) == AT_OK);
    CHECK(at_report_accuracy(report) > 0.95);
    const std::string csv = at_report_csv(report, "beef");
    CHECK(csv.find("true_class,Synthetic-0,Synthetic-1,recall\n") != std::string::npos);
    const std::string summary = at_report_summary(report, "beef", "extra note");
    CHECK(summary.find("overall accuracy:") != std::string::npos);
    CHECK(summary.find("extra note\n") != std::string::npos);

    // windowed features must beat the raw per-packet baseline; use classes
    // whose size values overlap so no single packet can settle the question
    const char* mostly_big = R"({
        "interarrival": {"family": "exponential", "mean": 1e-3},
        "size": {"values": [1200, 1400], "weights": [0.8, 0.2]}
    })";
    const char* mostly_small = R"({
        "interarrival": {"family": "exponential", "mean": 1e-3},
        "size": {"values": [1200, 1400], "weights": [0.2, 0.8]}
    })";
    at_trace* c = synth_labeled(mostly_big, 5, 6000, "Synthetic-0", nullptr);
    at_trace* d = synth_labeled(mostly_small, 6, 6000, "Synthetic-1", nullptr);
    const at_trace* overlap[] = {c, d};

    at_report* windowed = nullptr;
    REQUIRE(at_identify(overlap, 2, &wp, &fp, &windowed) == AT_OK);
    at_report* raw = nullptr;
    REQUIRE(at_identify_raw(overlap, 2, "size", 2000, &fp, &raw) == AT_OK);
    CHECK(at_report_accuracy(windowed) > 0.95);
    CHECK(at_report_accuracy(raw) < 0.9);
    CHECK(at_report_accuracy(raw) < at_report_accuracy(windowed));
    CHECK(at_identify_raw(overlap, 2, "velocity", 0, &fp, &raw) == AT_ECONFIG);

    at_report_free(raw);
    at_report_free(windowed);
    at_report_free(report);
    at_trace_free(d);
    at_trace_free(c);

    // window sweep over two candidate sizes
    const uint32_t sizes[] = {50, 100};
    at_wcurve* curve = nullptr;
    REQUIRE(at_sweep_windows(traces, 2, sizes, 2, &wp, &fp, &curve) == AT_OK);
    CHECK(at_wcurve_len(curve) == 2);
    const std::string wcsv = at_wcurve_csv(curve, "beef");
    CHECK(wcsv.find("window_size,samples_per_class,accuracy,status\n") != std::string::npos);
    at_wcurve_free(curve);

    at_trace_free(b);
    at_trace_free(a);
}

TEST_CASE("detector lifecycle") {
    at_trace* target_full = synth_labeled(kFastBig, 21, 5000, "GoogleNestMini", "Music");
    at_trace *target_head = nullptr, *target_tail = nullptr;
    REQUIRE(at_trace_split(target_full, 0.8, &target_head, &target_tail) == AT_OK);

    at_trace* noise_raw = nullptr;
    REQUIRE(at_trace_synth(kCrowd, 1, 22, 20000, &noise_raw) == AT_OK);
    at_trace *noise_head = nullptr, *noise_tail = nullptr;
    REQUIRE(at_trace_split(noise_raw, 0.8, &noise_head, &noise_tail) == AT_OK);
    at_trace* noise_tail_labeled = nullptr;
    REQUIRE(at_trace_relabel(noise_tail, "Noise", nullptr, &noise_tail_labeled) == AT_OK);

    at_window_params wp;
    at_window_params_init(&wp);
    wp.window_size = 100;
    at_forest_params fp;
    at_forest_params_init(&fp);
    fp.n_trees = 10;
    fp.k_folds = 5;
    fp.seed = 33;

    at_detector* det = nullptr;
    REQUIRE(at_detector_build(target_head, noise_head, &wp, &fp, &det) == AT_OK);
    CHECK(std::strcmp(at_detector_target(det), "GoogleNestMini Music") == 0);
    CHECK(at_detector_cv_accuracy(det) > 0.9);

    const char* dpath = "/tmp/at_capi_detector.json";
    REQUIRE(at_detector_save(det, dpath) == AT_OK);
    at_detector* loaded = nullptr;
    REQUIRE(at_detector_load(dpath, &loaded) == AT_OK);
    CHECK(std::strcmp(at_detector_target(loaded), "GoogleNestMini Music") == 0);
    CHECK(at_detector_cv_accuracy(loaded) == at_detector_cv_accuracy(det));
    std::remove(dpath);

    at_detection* hit = nullptr;
    REQUIRE(at_detect(loaded, target_tail, &hit) == AT_OK);
    CHECK(at_detection_chunks(hit) == 1);
    CHECK(at_detection_positives(hit) == 1);
    const std::string dcsv = at_detection_csv(hit, "c0de");
    CHECK(dcsv.find("# target: GoogleNestMini Music\n") != std::string::npos);

    at_detection* miss = nullptr;
    REQUIRE(at_detect(loaded, noise_tail_labeled, &miss) == AT_OK);
    CHECK(at_detection_positives(miss) == 0);

    const at_detector* dets[] = {det};
    const at_trace* tests[] = {target_tail, noise_tail_labeled};
    at_table* table = nullptr;
    REQUIRE(at_evaluate_detection(dets, 1, tests, 2, &table) == AT_OK);
    REQUIRE(at_table_rows(table) == 1);
    double tpr = 0, fpr = 0, acc = 0;
    REQUIRE(at_table_row(table, 0, &tpr, &fpr, &acc) == AT_OK);
    CHECK(tpr == 1.0);
    CHECK(fpr == 0.0);
    CHECK(acc == 1.0);
    CHECK(at_table_row(table, 5, &tpr, &fpr, &acc) == AT_EINVAL);
    const std::string tcsv = at_table_csv(table, "c0de");
    CHECK(tcsv.find("GoogleNestMini,Music,1,0,1\n") != std::string::npos);
    at_table_free(table);

    // with no test traffic the rates are undefined and reported as NaN
    at_table* empty_table = nullptr;
    REQUIRE(at_evaluate_detection(dets, 1, nullptr, 0, &empty_table) == AT_OK);
    REQUIRE(at_table_rows(empty_table) == 1);
    REQUIRE(at_table_row(empty_table, 0, &tpr, &fpr, &acc) == AT_OK);
    CHECK(std::isnan(tpr));
    CHECK(std::isnan(fpr));
    at_table_free(empty_table);

    at_detection_free(miss);
    at_detection_free(hit);
    at_detector_free(loaded);
    at_detector_free(det);
    at_trace_free(noise_tail_labeled);
    at_trace_free(noise_tail);
    at_trace_free(noise_head);
    at_trace_free(noise_raw);
    at_trace_free(target_tail);
    at_trace_free(target_head);
    at_trace_free(target_full);
}

TEST_CASE("delay grid query pattern and sweep") {
    size_t len = 0;
    REQUIRE(at_default_delay_grid(nullptr, &len) == AT_OK);
    REQUIRE(len == 12);
    double grid[12];
    REQUIRE(at_default_delay_grid(grid, &len) == AT_OK);
    CHECK(grid[0] == 0.0);
    CHECK(grid[11] == 5e-4);
    size_t small = 3;
    CHECK(at_default_delay_grid(grid, &small) == AT_EINVAL);

    at_trace* a = synth_labeled(kFastBig, 1, 4000, "Synthetic-0", nullptr);
    at_trace* b = synth_labeled(kSlowSmall, 2, 4000, "Synthetic-1", nullptr);
    const at_trace* traces[] = {a, b};
    at_window_params wp;
    at_window_params_init(&wp);
    wp.window_size = 100;
    at_forest_params fp;
    at_forest_params_init(&fp);
    fp.n_trees = 10;
    fp.k_folds = 5;
    fp.seed = 11;

    const double delays[] = {0.0};
    at_dcurve* curve = nullptr;
    REQUIRE(at_sweep_delay(traces, 2, delays, 1, &wp, &fp, 0, &curve) == AT_OK);
    REQUIRE(at_dcurve_len(curve) == 1);
    double d = -1, clean = 0, retrained = 0;
    REQUIRE(at_dcurve_point(curve, 0, &d, &clean, &retrained) == AT_OK);
    CHECK(d == 0.0);
    CHECK(clean == retrained);

    // the no-op sweep point reproduces the identification accuracy exactly
    at_report* report = nullptr;
    REQUIRE(at_identify(traces, 2, &wp, &fp, &report) == AT_OK);
    CHECK(clean == at_report_accuracy(report));
    at_report_free(report);

    CHECK(at_dcurve_point(curve, 3, &d, &clean, &retrained) == AT_EINVAL);
    const std::string csv = at_dcurve_csv(curve, "0ddba11");
    CHECK(csv.find("delay_s,acc_clean_model,acc_retrained\n") != std::string::npos);
    at_dcurve_free(curve);
    at_trace_free(b);
    at_trace_free(a);
}

TEST_CASE("config hash") {
    char h1[17], h2[17];
    REQUIRE(at_config_hash("alpha", h1, sizeof(h1)) == AT_OK);
    REQUIRE(at_config_hash("alpha", h2, sizeof(h2)) == AT_OK);
    CHECK(std::strlen(h1) == 16);
    CHECK(std::strcmp(h1, h2) == 0);
    REQUIRE(at_config_hash("beta", h2, sizeof(h2)) == AT_OK);
    CHECK(std::strcmp(h1, h2) != 0);
    CHECK(at_config_hash("alpha", h1, 8) == AT_EINVAL);
    CHECK(at_config_hash(nullptr, h1, sizeof(h1)) == AT_EINVAL);
}
