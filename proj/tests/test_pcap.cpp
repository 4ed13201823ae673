#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>

#include "core/pcap.hpp"
#include "test_util.hpp"

using namespace airtrace;
using airtrace_tests::expect_error;

namespace {

// Byte-level pcap writer so the parser is tested against real container
// layouts, both byte orders, without fixture files.
struct PcapBuilder {
    std::string data;
    bool big_endian;

    explicit PcapBuilder(std::uint32_t linktype, bool big = false) : big_endian(big) {
        u32(0xa1b2c3d4); // magic in writer order; readers see it swapped or not
        u16(2);
        u16(4);
        u32(0); // thiszone
        u32(0); // sigfigs
        u32(65535);
        u32(linktype);
    }

    void u16(std::uint16_t v) {
        if (big_endian) {
            data.push_back(static_cast<char>(v >> 8));
            data.push_back(static_cast<char>(v & 0xff));
        } else {
            data.push_back(static_cast<char>(v & 0xff));
            data.push_back(static_cast<char>(v >> 8));
        }
    }

    void u32(std::uint32_t v) {
        if (big_endian) {
            for (int s = 24; s >= 0; s -= 8) data.push_back(static_cast<char>((v >> s) & 0xff));
        } else {
            for (int s = 0; s <= 24; s += 8) data.push_back(static_cast<char>((v >> s) & 0xff));
        }
    }

    void frame(std::uint32_t sec, std::uint32_t usec, const std::string& payload,
               std::uint32_t orig_len) {
        u32(sec);
        u32(usec);
        u32(static_cast<std::uint32_t>(payload.size()));
        u32(orig_len);
        data += payload;
    }
};

const std::string kTarget = "\xAA\xBB\xCC\xDD\xEE\xFF";
const std::string kOther = "\x11\x22\x33\x44\x55\x66";

std::string eth_frame(const std::string& dest) {
    return dest + kOther + std::string("\x08\x00", 2) + "payload";
}

std::string wifi_frame(const std::string& addr1) {
    // frame control + duration, then addr1/addr2/addr3 + seq
    return std::string("\x08\x01\x00\x00", 4) + addr1 + kOther + kOther + std::string(2, '\0');
}

std::string radiotap_frame(const std::string& addr1, std::uint16_t rt_len = 8) {
    std::string rt;
    rt.push_back('\0'); // version
    rt.push_back('\0');
    rt.push_back(static_cast<char>(rt_len & 0xff)); // length is always LE
    rt.push_back(static_cast<char>(rt_len >> 8));
    rt.append(rt_len - 4, '\0'); // present flags / fields
    return rt + wifi_frame(addr1);
}

const MacAddress kMac = MacAddress::parse("AA:BB:CC:DD:EE:FF");

} // namespace

TEST_CASE("ethernet destination filter") {
    PcapBuilder b(1);
    b.frame(100, 0, eth_frame(kTarget), 100);
    b.frame(100, 500000, eth_frame(kOther), 900);
    b.frame(101, 0, eth_frame(kTarget), 200);
    b.frame(101, 250000, eth_frame(kOther), 901);
    b.frame(102, 0, eth_frame(kTarget), 300);

    PcapSummary s;
    const Trace t = convert_pcap(b.data, kMac, &s);
    CHECK(s.frames == 5);
    CHECK(s.matched == 3);
    CHECK(s.truncated == 0);
    REQUIRE(t.size() == 3);
    CHECK(t.records()[0] == PacketRecord{0.0, 100});
    CHECK(t.records()[1] == PacketRecord{1.0, 200});
    CHECK(t.records()[2] == PacketRecord{2.0, 300});
}

TEST_CASE("size comes from the original length, time from sec+usec") {
    PcapBuilder b(1);
    b.frame(12, 0, eth_frame(kTarget), 1024);
    b.frame(12, 345678, eth_frame(kTarget), 60);
    const Trace t = convert_pcap(b.data, kMac, nullptr);
    CHECK(t.records()[0].size == 1024);
    CHECK(t.records()[1].timestamp == doctest::Approx(0.345678));
}

TEST_CASE("byte-swapped captures parse identically") {
    PcapBuilder le(1, false), be(1, true);
    for (PcapBuilder* b : {&le, &be}) {
        b->frame(5, 250000, eth_frame(kTarget), 777);
        b->frame(6, 0, eth_frame(kTarget), 778);
    }
    CHECK(convert_pcap(le.data, kMac, nullptr) == convert_pcap(be.data, kMac, nullptr));
}

TEST_CASE("802.11 frames resolve addr1 as the receiver") {
    PcapBuilder b(105);
    b.frame(0, 0, wifi_frame(kTarget), 500);
    b.frame(0, 100, wifi_frame(kOther), 501);
    PcapSummary s;
    const Trace t = convert_pcap(b.data, kMac, &s);
    CHECK(s.matched == 1);
    CHECK(t.records()[0].size == 500);
}

TEST_CASE("radiotap headers are skipped by their declared length") {
    PcapBuilder b(127);
    b.frame(0, 0, radiotap_frame(kTarget, 8), 600);
    b.frame(1, 0, radiotap_frame(kTarget, 24), 601); // longer header, same frame
    b.frame(2, 0, radiotap_frame(kOther, 8), 602);
    PcapSummary s;
    const Trace t = convert_pcap(b.data, kMac, &s);
    CHECK(s.matched == 2);
    CHECK(t.records()[1].size == 601);
}

TEST_CASE("frames out of capture order are sorted") {
    PcapBuilder b(1);
    b.frame(10, 0, eth_frame(kTarget), 2);
    b.frame(9, 0, eth_frame(kTarget), 1);
    const Trace t = convert_pcap(b.data, kMac, nullptr);
    CHECK(t.records()[0].size == 1);
    CHECK(t.records()[1] == PacketRecord{1.0, 2});
}

TEST_CASE("truncated frames are skipped and counted") {
    PcapBuilder b(1);
    b.frame(0, 0, eth_frame(kTarget).substr(0, 4), 100); // too short for an address
    b.frame(1, 0, eth_frame(kTarget), 0);                // zero original length
    b.frame(2, 0, eth_frame(kTarget), 100);
    PcapSummary s;
    const Trace t = convert_pcap(b.data, kMac, &s);
    CHECK(s.frames == 3);
    CHECK(s.truncated == 2);
    CHECK(t.size() == 1);
}

TEST_CASE("format rejections") {
    expect_error(Errc::unsupported_format, [] { convert_pcap("tiny", kMac, nullptr); });

    PcapBuilder nano(1);
    nano.data[0] = '\x4d';
    nano.data[1] = '\x3c';
    nano.data[2] = '\xb2';
    nano.data[3] = '\xa1';
    expect_error(Errc::unsupported_format, [&] { convert_pcap(nano.data, kMac, nullptr); });

    PcapBuilder garbage(1);
    garbage.data[0] = '\x00';
    expect_error(Errc::unsupported_format, [&] { convert_pcap(garbage.data, kMac, nullptr); });

    PcapBuilder badlink(228);
    badlink.frame(0, 0, eth_frame(kTarget), 10);
    expect_error(Errc::unsupported_format, [&] { convert_pcap(badlink.data, kMac, nullptr); });
}

TEST_CASE("zero matching frames is an empty-trace error") {
    PcapBuilder b(1);
    b.frame(0, 0, eth_frame(kOther), 100);
    try {
        convert_pcap(b.data, kMac, nullptr);
        FAIL_CHECK("expected empty-trace error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_trace);
        CHECK(std::string(e.what()).find("AA:BB:CC:DD:EE:FF") != std::string::npos);
    }
}

TEST_CASE("mac address parsing") {
    CHECK(MacAddress::parse("aa:bb:cc:dd:ee:ff").to_string() == "AA:BB:CC:DD:EE:FF");
    CHECK(MacAddress::parse("00:00:00:00:00:01").bytes[5] == 1);
    expect_error(Errc::invalid_argument, [] { MacAddress::parse("AA:BB:CC:DD:EE"); });
    expect_error(Errc::invalid_argument, [] { MacAddress::parse("AA:BB:CC:DD:EE:GG"); });
    expect_error(Errc::invalid_argument, [] { MacAddress::parse("AABBCCDDEEFF"); });
}
