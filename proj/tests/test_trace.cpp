#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "core/trace.hpp"
#include "test_util.hpp"

using namespace airtrace;
using airtrace_tests::expect_error;

namespace {

Trace make_trace(std::size_t n, double gap = 0.5, std::uint32_t size = 100) {
    std::vector<PacketRecord> rec;
    for (std::size_t i = 0; i < n; ++i)
        rec.push_back({static_cast<double>(i) * gap, size + static_cast<std::uint32_t>(i)});
    return Trace(std::move(rec));
}

} // namespace

TEST_CASE("record validation happens at construction") {
    CHECK_NOTHROW(Trace({{0.0, 1}, {0.0, 2}, {1.5, 3}}));
    expect_error(Errc::invalid_argument, [] { Trace({{0.0, 0}}); });
    expect_error(Errc::invalid_argument, [] { Trace({{-0.1, 100}}); });
    expect_error(Errc::invalid_argument, [] { Trace({{1.0, 100}, {0.5, 100}}); });
}

TEST_CASE("rebased shifts the epoch to zero") {
    const Trace t({{10.0, 5}, {11.25, 6}});
    const Trace r = t.rebased();
    CHECK(r.records()[0].timestamp == 0.0);
    CHECK(r.records()[1].timestamp == doctest::Approx(1.25));
    CHECK(r.records()[1].size == 6);
    // already at zero: unchanged, and never a negative zero
    const Trace z = r.rebased();
    CHECK(z == r);
    CHECK(!std::signbit(z.records()[0].timestamp));
}

TEST_CASE("labels travel with the trace") {
    const ClassLabel label = ClassLabel::parse("EchoDot", "Music");
    const Trace t = make_trace(4).with_label(label);
    REQUIRE(t.label().has_value());
    CHECK(*t.label() == label);
    CHECK(t.rebased().label() == t.label());
}

TEST_CASE("chunking slices exact windows and drops the remainder") {
    const Trace t = make_trace(10).with_label(ClassLabel::noise());
    const auto chunks = chunk_trace(t, 3);
    REQUIRE(chunks.size() == 3);
    for (const Trace& c : chunks) {
        CHECK(c.size() == 3);
        CHECK(c.records().front().timestamp == 0.0);
        CHECK(c.label() == t.label());
    }
    // middle chunk carries packets 3..5 of the original
    CHECK(chunks[1].records()[0].size == 103);

    CHECK(chunk_trace(t, 10).size() == 1);
    expect_error(Errc::invalid_argument, [&] { chunk_trace(t, 11); });
    expect_error(Errc::invalid_argument, [&] { chunk_trace(t, 0); });
}

TEST_CASE("contiguous split keeps order and label") {
    const Trace t = make_trace(10).with_label(ClassLabel::parse("Echo", "News"));
    const auto [head, tail] = split_trace(t, 0.8);
    CHECK(head.size() == 8);
    CHECK(tail.size() == 2);
    CHECK(head.label() == t.label());
    CHECK(tail.label() == t.label());
    CHECK(tail.records().front().timestamp == 0.0);
    CHECK(tail.records()[0].size == 108); // first record after the cut

    expect_error(Errc::invalid_argument, [&] { split_trace(t, 0.0); });
    expect_error(Errc::invalid_argument, [&] { split_trace(t, 1.0); });
    expect_error(Errc::insufficient_data, [] { split_trace(make_trace(1), 0.5); });
}

TEST_CASE("max packet size") {
    CHECK(make_trace(5).max_packet_size() == 104);
    CHECK(Trace().max_packet_size() == 0);
}

TEST_CASE("class labels parse and order") {
    const ClassLabel ed = ClassLabel::parse("EchoDot", "Music");
    CHECK(ed.display() == "EchoDot Music");
    CHECK(ClassLabel::parse_display("EchoDot Music") == ed);
    CHECK(ClassLabel::parse_display("Noise") == ClassLabel::noise());

    const ClassLabel s3 = ClassLabel::parse("Synthetic-3", "None");
    CHECK(s3.synth_id() == 3);
    CHECK(s3.display() == "Synthetic-3");
    CHECK(ClassLabel::synthetic(3) == s3);

    // device dominates, then synth id, then service
    CHECK(ClassLabel::parse("EchoDot", "News") < ClassLabel::parse("Echo", "Music"));
    CHECK(ClassLabel::synthetic(1) < ClassLabel::synthetic(2));
    CHECK(ed < ClassLabel::parse("EchoDot", "News"));

    expect_error(Errc::invalid_argument, [] { ClassLabel::parse("Noise", "Music"); });
    expect_error(Errc::invalid_argument, [] { ClassLabel::parse("Toaster", "Music"); });
    expect_error(Errc::invalid_argument, [] { ClassLabel::parse("EchoDot", "Sports"); });
    expect_error(Errc::invalid_argument, [] { ClassLabel::parse("Synthetic-x", "None"); });
}
