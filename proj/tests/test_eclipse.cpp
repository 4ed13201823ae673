#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "core/eclipse.hpp"
#include "core/features.hpp"
#include "core/synth.hpp"
#include "test_util.hpp"

using namespace airtrace;
using airtrace_tests::expect_error;

namespace {

const ClassLabel kA = ClassLabel::synthetic(0);
const ClassLabel kB = ClassLabel::synthetic(1);

Trace sized_trace(ClassLabel label = kA) {
    return Trace({{0.0, 60}, {0.1, 1500}, {0.5, 600}, {0.9, 60}}, label);
}

Trace dense_trace(std::size_t n, double gap, std::uint32_t size = 500) {
    std::vector<PacketRecord> recs;
    for (std::size_t i = 0; i < n; ++i) recs.push_back({gap * static_cast<double>(i), size});
    return Trace(std::move(recs), kA);
}

// Same 50 us mean rate, different dispersion: separable through window
// statistics without any size or rate signal.
Trace uniform_gap_trace(double half_width, std::uint64_t seed, std::uint64_t n, ClassLabel label) {
    SynthProfile p;
    p.interarrival = {IntervalDist::Family::uniform, 50e-6 - half_width, 50e-6 + half_width};
    p.size.values = {600};
    p.seed = seed;
    return synthesize_trace(p, n, label);
}

} // namespace

TEST_CASE("padding rewrites every size and nothing else") {
    const Trace t = sized_trace();
    const Trace padded = pad_sizes(t, 1500);
    REQUIRE(padded.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(padded.records()[i].size == 1500);
        CHECK(padded.records()[i].timestamp == t.records()[i].timestamp);
    }
    CHECK(padded.label() == t.label());
    CHECK(pad_sizes(padded, 1500) == padded); // idempotent
    CHECK(pad_sizes(t, 2000).records()[0].size == 2000);
}

TEST_CASE("padding refuses to truncate") {
    try {
        pad_sizes(sized_trace(), 1400);
        FAIL_CHECK("expected invalid_argument");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_argument);
        CHECK(std::string(e.what()).find("1400") != std::string::npos);
        CHECK(std::string(e.what()).find("1500") != std::string::npos);
    }
}

TEST_CASE("padding flattens all size-window statistics") {
    std::vector<PacketRecord> varied;
    const std::uint32_t sizes[] = {100, 900, 1500, 60};
    for (int i = 0; i < 300; ++i) varied.push_back({1e-3 * i, sizes[i % 4]});
    const Trace padded = pad_sizes(Trace(std::move(varied)), 1500);
    WindowParams p;
    p.window_size = 64;
    p.source = FeatureSource::SizeOnly;
    p.feature_set = {Stat::Std, Stat::Var, Stat::Min, Stat::Max, Stat::Skewness, Stat::Kurtosis};
    for (const FeatureVector& w : extract_features(padded.with_label(kA), p)) {
        CHECK(w.degenerate);
        CHECK(w.values[0] == 0.0);
        CHECK(w.values[1] == 0.0);
        CHECK(w.values[2] == w.values[3]); // min == max
        CHECK(w.values[4] == 0.0);
        CHECK(w.values[5] == 0.0);
    }
}

TEST_CASE("zero delay and empty traces pass through jitter untouched") {
    ReshapePolicy none;
    CHECK(jitter_delays(sized_trace(), none, 3) == sized_trace());
    ReshapePolicy some;
    some.max_delay = 1e-3;
    CHECK(jitter_delays(Trace{}, some, 0) == Trace{});
}

TEST_CASE("jitter respects the per-packet bound and keeps order, count, sizes") {
    const Trace t = dense_trace(2000, 1e-6); // gaps far below the bound
    ReshapePolicy policy;
    policy.max_delay = 1e-3;
    policy.seed = 9;
    const Trace out = jitter_delays(t, policy, 0);

    REQUIRE(out.size() == t.size());
    CHECK(out.label() == t.label());
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double added = out.records()[i].timestamp - t.records()[i].timestamp;
        CHECK(added >= 0.0);
        CHECK(added <= policy.max_delay + 1e-12);
        CHECK(out.records()[i].size == t.records()[i].size);
        if (i > 0) {
            CHECK(out.records()[i].timestamp >= out.records()[i - 1].timestamp);
            clamped += out.records()[i].timestamp == out.records()[i - 1].timestamp;
        }
    }
    // With gaps 1000x below the bound the FIFO clamp must have engaged.
    CHECK(clamped > 0);
}

TEST_CASE("jitter is deterministic per trace substream") {
    const Trace t = dense_trace(500, 1e-4);
    ReshapePolicy policy;
    policy.max_delay = 5e-4;
    policy.seed = 41;
    CHECK(jitter_delays(t, policy, 7) == jitter_delays(t, policy, 7));
    CHECK(jitter_delays(t, policy, 7) != jitter_delays(t, policy, 8));
    ReshapePolicy other = policy;
    other.seed = 42;
    CHECK(jitter_delays(t, policy, 7) != jitter_delays(t, other, 7));
}

TEST_CASE("sparse-trace added delay concentrates at half the bound") {
    const double bound = 0.01;
    const Trace t = dense_trace(100001, 1.0); // gaps dwarf the bound: no clamping
    ReshapePolicy policy;
    policy.max_delay = bound;
    policy.seed = 4;
    const double mean = mean_added_delay(t, jitter_delays(t, policy, 0));
    const double se = bound / std::sqrt(12.0 * 100001.0);
    CHECK(std::abs(mean - bound / 2.0) < 4.0 * se);
}

TEST_CASE("reshape composes padding and jitter") {
    const Trace t = sized_trace();
    ReshapePolicy policy;
    policy.pad_to = 1600;
    policy.max_delay = 1e-3;
    policy.seed = 6;
    const Trace direct = reshape_trace(t, policy, 4);
    const Trace manual = jitter_delays(pad_sizes(t, 1600), policy, 4);
    CHECK(direct == manual);

    ReshapePolicy jitter_only;
    jitter_only.max_delay = 1e-3;
    jitter_only.seed = 6;
    CHECK(reshape_trace(t, jitter_only, 4) == jitter_delays(t, jitter_only, 4));
}

TEST_CASE("policy validation") {
    ReshapePolicy bad;
    bad.max_delay = -1e-6;
    expect_error(Errc::config, [&] { bad.validate(); });
    bad.max_delay = std::numeric_limits<double>::infinity();
    expect_error(Errc::config, [&] { bad.validate(); });
    bad = ReshapePolicy{};
    bad.pad_to = 0;
    expect_error(Errc::config, [&] { bad.validate(); });
}

TEST_CASE("max packet size spans traces") {
    const std::vector<Trace> traces = {sized_trace(), dense_trace(3, 0.1, 1600)};
    CHECK(max_packet_size(traces) == 1600);
    expect_error(Errc::empty_trace, [] { max_packet_size(std::vector<Trace>{}); });
    expect_error(Errc::empty_trace, [] { max_packet_size(std::vector<Trace>{Trace{}}); });
}

TEST_CASE("mean added delay input checks") {
    expect_error(Errc::invalid_argument,
                 [] { mean_added_delay(dense_trace(3, 0.1), dense_trace(4, 0.1)); });
    expect_error(Errc::empty_trace, [] { mean_added_delay(Trace{}, Trace{}); });
}

TEST_CASE("default delay grid") {
    const auto grid = default_delay_grid();
    REQUIRE(grid.size() == 12);
    CHECK(grid[0] == 0.0);
    CHECK(grid[1] == doctest::Approx(1e-5));
    CHECK(grid.back() == 5e-4);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("delay sweep input checks") {
    const std::vector<Trace> traces = {uniform_gap_trace(20e-6, 1, 600, kA),
                                       uniform_gap_trace(0.0, 2, 600, kB)};
    WindowParams w;
    w.window_size = 50;
    ForestParams f;
    f.n_trees = 3;
    f.k_folds = 2;
    expect_error(Errc::config, [&] { sweep_delay(traces, {}, w, f); });
    expect_error(Errc::config, [&] { sweep_delay(traces, {-1e-3}, w, f); });
    expect_error(Errc::config, [&] { sweep_delay(traces, {1e-3, 1e-4}, w, f); });
    expect_error(Errc::config, [&] { sweep_delay(traces, {0.0, std::nan("")}, w, f); });
}

TEST_CASE("delay sweep: identity point matches plain cross-validation") {
    const std::vector<Trace> traces = {uniform_gap_trace(20e-6, 1, 3000, kA),
                                       uniform_gap_trace(0.0, 2, 3000, kB)};
    WindowParams w;
    w.window_size = 50;
    ForestParams f;
    f.n_trees = 10;
    f.k_folds = 5;
    f.seed = 13;

    const FeatureDataset clean = balance_classes(extract_dataset(traces, w), f.seed);
    const double baseline = cross_validate(clean, f).accuracy();

    const DelaySweepCurve curve = sweep_delay(traces, {0.0}, w, f, /*with_padding=*/false);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].acc_clean_model == baseline);
    CHECK(curve.points[0].acc_retrained == baseline);
    CHECK(baseline > 0.95);
}

TEST_CASE("heavy jitter collapses a timing-only separation") {
    // Same mean rate, same sizes; only gap dispersion separates the classes,
    // and a bound 40x the mean gap swamps it.
    const std::vector<Trace> traces = {uniform_gap_trace(20e-6, 1, 6000, kA),
                                       uniform_gap_trace(0.0, 2, 6000, kB)};
    WindowParams w;
    w.window_size = 50;
    ForestParams f;
    f.n_trees = 10;
    f.k_folds = 5;
    f.seed = 29;

    const DelaySweepCurve curve = sweep_delay(traces, {0.0, 2e-3}, w, f);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points[0].acc_clean_model > 0.95);
    CHECK(curve.points[0].acc_retrained > 0.95);
    CHECK(curve.points[1].acc_clean_model < 0.65);
    CHECK(curve.points[1].acc_retrained < 0.65);

    const std::string csv = curve.to_csv("abcd");
    CHECK(csv.find("# report: delay-sweep\n") != std::string::npos);
    CHECK(csv.find("delay_s,acc_clean_model,acc_retrained\n") != std::string::npos);
    CHECK(csv.find("\n0,") != std::string::npos);
    CHECK(csv.find("\n0.002,") != std::string::npos);
}
