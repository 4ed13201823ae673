#ifndef AIRTRACE_CORE_TRACE_HPP
#define AIRTRACE_CORE_TRACE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "label.hpp"

namespace airtrace {

// One eavesdropped frame: arrival time (seconds since trace epoch) and
// on-air payload size in bytes.
struct PacketRecord {
    double timestamp = 0.0; // >= 0
    std::uint32_t size = 0; // >= 1

    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

// Ordered packet sequence with an optional class label. Timestamps are
// validated non-decreasing on construction; instances are immutable
// afterwards and safe to share across threads.
class Trace {
public:
    Trace() = default;
    Trace(std::vector<PacketRecord> records, std::optional<ClassLabel> label = std::nullopt);

    const std::vector<PacketRecord>& records() const noexcept { return records_; }
    const std::optional<ClassLabel>& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    Trace with_label(ClassLabel label) const { return Trace(records_, label); }

    // Shifts timestamps so the first record sits at 0.
    Trace rebased() const;

    std::uint32_t max_packet_size() const;

    friend bool operator==(const Trace& a, const Trace& b) {
        return a.records_ == b.records_ && a.label_ == b.label_;
    }

private:
    std::vector<PacketRecord> records_;
    std::optional<ClassLabel> label_;
};

// Consecutive non-overlapping chunks of exactly chunk_len records; the
// trailing remainder is discarded. Each chunk is rebased to epoch 0 and
// inherits the parent label. chunk_len > trace length is an error.
std::vector<Trace> chunk_trace(const Trace& trace, std::size_t chunk_len);

// Contiguous-in-time split: the first floor(n * head_fraction) records and
// the rest, both rebased, both keeping the label. A split that would leave
// either side empty is an error.
std::pair<Trace, Trace> split_trace(const Trace& trace, double head_fraction);

} // namespace airtrace

#endif
