#include "trace.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace airtrace {

Trace::Trace(std::vector<PacketRecord> records, std::optional<ClassLabel> label)
    : records_(std::move(records)), label_(std::move(label)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.size < 1)
            raise(Errc::invalid_argument,
                  "packet size must be >= 1 at record " + std::to_string(i));
        if (r.timestamp < 0.0)
            raise(Errc::invalid_argument,
                  "negative timestamp at record " + std::to_string(i));
        if (i > 0 && r.timestamp < records_[i - 1].timestamp)
            raise(Errc::invalid_argument,
                  "timestamps not non-decreasing at record " + std::to_string(i));
    }
}

Trace Trace::rebased() const {
    if (records_.empty()) return *this;
    const double epoch = records_.front().timestamp;
    if (epoch == 0.0) return *this;
    std::vector<PacketRecord> shifted = records_;
    for (auto& r : shifted) r.timestamp -= epoch;
    // Guard against negative zero drift from the subtraction.
    shifted.front().timestamp = 0.0;
    return Trace(std::move(shifted), label_);
}

std::uint32_t Trace::max_packet_size() const {
    std::uint32_t m = 0;
    for (const auto& r : records_) m = std::max(m, r.size);
    return m;
}

std::vector<Trace> chunk_trace(const Trace& trace, std::size_t chunk_len) {
    if (chunk_len < 1)
        raise(Errc::invalid_argument, "chunk_len must be >= 1");
    if (chunk_len > trace.size())
        raise(Errc::invalid_argument,
              "chunk_len " + std::to_string(chunk_len) + " exceeds trace length " +
                  std::to_string(trace.size()));

    const std::size_t n_chunks = trace.size() / chunk_len;
    std::vector<Trace> chunks;
    chunks.reserve(n_chunks);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const auto begin = trace.records().begin() + static_cast<std::ptrdiff_t>(c * chunk_len);
        std::vector<PacketRecord> part(begin, begin + static_cast<std::ptrdiff_t>(chunk_len));
        chunks.push_back(Trace(std::move(part), trace.label()).rebased());
    }
    return chunks;
}

std::pair<Trace, Trace> split_trace(const Trace& trace, double head_fraction) {
    if (!(head_fraction > 0.0 && head_fraction < 1.0))
        raise(Errc::invalid_argument, "head_fraction must lie in (0, 1)");
    const std::size_t cut =
        static_cast<std::size_t>(static_cast<double>(trace.size()) * head_fraction);
    if (cut == 0 || cut == trace.size())
        raise(Errc::insufficient_data, "trace of " + std::to_string(trace.size()) +
                                           " packets cannot be split at fraction " +
                                           std::to_string(head_fraction));
    const auto& rec = trace.records();
    std::vector<PacketRecord> head(rec.begin(), rec.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<PacketRecord> tail(rec.begin() + static_cast<std::ptrdiff_t>(cut), rec.end());
    return {Trace(std::move(head), trace.label()).rebased(),
            Trace(std::move(tail), trace.label()).rebased()};
}

} // namespace airtrace
