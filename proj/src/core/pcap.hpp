#ifndef AIRTRACE_CORE_PCAP_HPP
#define AIRTRACE_CORE_PCAP_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "trace.hpp"

namespace airtrace {

struct MacAddress {
    std::array<std::uint8_t, 6> bytes{};

    static MacAddress parse(const std::string& text); // "AA:BB:CC:DD:EE:FF"
    std::string to_string() const;

    friend bool operator==(const MacAddress&, const MacAddress&) = default;
};

struct PcapSummary {
    std::uint64_t frames = 0;    // records seen
    std::uint64_t matched = 0;   // receiver address matched
    std::uint64_t truncated = 0; // skipped: too short to resolve the receiver
};

// Reads a classic pcap capture (magic 0xa1b2c3d4 / 0xd4c3b2a1, either byte
// order) and keeps only frames whose receiver address equals receiver_mac.
// Each kept frame is reduced to (capture timestamp, on-air frame length);
// everything else in the headers is dropped here and never reaches the
// classifier. Supported link types: Ethernet, 802.11, 802.11+radiotap.
Trace convert_pcap(std::string_view data, const MacAddress& receiver_mac,
                   PcapSummary* summary = nullptr);

Trace load_pcap(const std::string& path, const MacAddress& receiver_mac,
                PcapSummary* summary = nullptr);

} // namespace airtrace

#endif
