#include "pcap.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "error.hpp"
#include "util.hpp"

namespace airtrace {

namespace {

constexpr std::uint32_t kMagicNative = 0xa1b2c3d4;
constexpr std::uint32_t kMagicSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNanoNative = 0xa1b23c4d;
constexpr std::uint32_t kMagicNanoSwapped = 0x4d3cb2a1;

constexpr std::uint32_t kLinkEthernet = 1;
constexpr std::uint32_t kLink80211 = 105;
constexpr std::uint32_t kLinkRadiotap = 127;

class Reader {
public:
    Reader(std::string_view data, bool swap) : data_(data), swap_(swap) {}

    std::size_t remaining(std::size_t pos) const {
        return pos >= data_.size() ? 0 : data_.size() - pos;
    }

    std::uint32_t u32(std::size_t pos) const {
        const auto* p = reinterpret_cast<const unsigned char*>(data_.data()) + pos;
        std::uint32_t v = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                          (static_cast<std::uint32_t>(p[2]) << 16) |
                          (static_cast<std::uint32_t>(p[3]) << 24);
        if (swap_) v = __builtin_bswap32(v);
        return v;
    }

    std::uint16_t u16le(std::size_t pos) const {
        // Always little-endian, independent of the capture byte order
        // (radiotap length is defined LE).
        const auto* p = reinterpret_cast<const unsigned char*>(data_.data()) + pos;
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }

    const unsigned char* at(std::size_t pos) const {
        return reinterpret_cast<const unsigned char*>(data_.data()) + pos;
    }

private:
    std::string_view data_;
    bool swap_;
};

// Returns true and fills addr with the receiver address of the frame at
// [off, off+len), or false when the frame is too short to resolve it.
bool receiver_address(const Reader& r, std::size_t off, std::size_t len, std::uint32_t linktype,
                      std::array<std::uint8_t, 6>& addr) {
    std::size_t frame_off = off;
    std::size_t frame_len = len;

    if (linktype == kLinkRadiotap) {
        if (frame_len < 4) return false;
        const std::uint16_t rt_len = r.u16le(frame_off + 2);
        if (rt_len < 8 || rt_len > frame_len) return false;
        frame_off += rt_len;
        frame_len -= rt_len;
    }

    std::size_t addr_off;
    if (linktype == kLinkEthernet) {
        addr_off = frame_off; // destination MAC leads the Ethernet header
        if (frame_len < 6) return false;
    } else {
        addr_off = frame_off + 4; // 802.11 addr1 after frame control + duration
        if (frame_len < 10) return false;
    }
    std::copy_n(r.at(addr_off), 6, addr.begin());
    return true;
}

} // namespace

MacAddress MacAddress::parse(const std::string& text) {
    MacAddress mac;
    const auto parts = split(text, ':');
    if (parts.size() != 6)
        raise(Errc::invalid_argument, "bad MAC address \"" + text + "\" (want 6 colon-separated octets)");
    for (std::size_t i = 0; i < 6; ++i) {
        const std::string& p = parts[i];
        if (p.size() != 2 || !std::isxdigit(static_cast<unsigned char>(p[0])) ||
            !std::isxdigit(static_cast<unsigned char>(p[1])))
            raise(Errc::invalid_argument, "bad MAC octet \"" + p + "\" in \"" + text + "\"");
        mac.bytes[i] = static_cast<std::uint8_t>(std::stoul(p, nullptr, 16));
    }
    return mac;
}

std::string MacAddress::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02X:%02X:%02X:%02X:%02X:%02X", bytes[0], bytes[1], bytes[2],
                  bytes[3], bytes[4], bytes[5]);
    return buf;
}

Trace convert_pcap(std::string_view data, const MacAddress& receiver_mac, PcapSummary* summary) {
    if (data.size() < 24) raise(Errc::unsupported_format, "not a pcap file: too short");

    const auto* head = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t raw_magic = static_cast<std::uint32_t>(head[0]) |
                                    (static_cast<std::uint32_t>(head[1]) << 8) |
                                    (static_cast<std::uint32_t>(head[2]) << 16) |
                                    (static_cast<std::uint32_t>(head[3]) << 24);
    bool swap;
    if (raw_magic == kMagicNative) {
        swap = false;
    } else if (raw_magic == kMagicSwapped) {
        swap = true;
    } else if (raw_magic == kMagicNanoNative || raw_magic == kMagicNanoSwapped) {
        raise(Errc::unsupported_format, "nanosecond pcap is not supported");
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "unknown pcap magic 0x%08x", raw_magic);
        raise(Errc::unsupported_format, buf);
    }

    const Reader r(data, swap);
    const std::uint32_t linktype = r.u32(20);
    if (linktype != kLinkEthernet && linktype != kLink80211 && linktype != kLinkRadiotap)
        raise(Errc::unsupported_format, "unsupported link-layer type " + std::to_string(linktype));

    PcapSummary local;
    std::vector<PacketRecord> records;
    std::size_t pos = 24;
    while (r.remaining(pos) >= 16) {
        const std::uint32_t ts_sec = r.u32(pos);
        const std::uint32_t ts_usec = r.u32(pos + 4);
        const std::uint32_t incl_len = r.u32(pos + 8);
        const std::uint32_t orig_len = r.u32(pos + 12);
        pos += 16;
        ++local.frames;

        const std::size_t have = std::min<std::size_t>(incl_len, r.remaining(pos));
        std::array<std::uint8_t, 6> addr{};
        if (!receiver_address(r, pos, have, linktype, addr) || orig_len == 0) {
            ++local.truncated;
        } else if (addr == receiver_mac.bytes) {
            ++local.matched;
            records.push_back({static_cast<double>(ts_sec) + static_cast<double>(ts_usec) * 1e-6,
                               orig_len});
        }
        pos += have;
        if (have < incl_len) break; // file ends mid-record
    }

    if (summary != nullptr) *summary = local;
    if (records.empty())
        raise(Errc::empty_trace, "no frames addressed to " + receiver_mac.to_string());

    std::stable_sort(records.begin(), records.end(),
                     [](const PacketRecord& a, const PacketRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
    return Trace(std::move(records)).rebased();
}

Trace load_pcap(const std::string& path, const MacAddress& receiver_mac, PcapSummary* summary) {
    return convert_pcap(read_file(path), receiver_mac, summary);
}

} // namespace airtrace
