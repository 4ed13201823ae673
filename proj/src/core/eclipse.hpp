#ifndef AIRTRACE_CORE_ECLIPSE_HPP
#define AIRTRACE_CORE_ECLIPSE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eval.hpp"
#include "trace.hpp"

namespace airtrace {

struct ReshapePolicy {
    std::optional<std::uint32_t> pad_to; // empty = leave sizes alone
    double max_delay = 0.0;              // seconds; 0 = leave timing alone
    std::uint64_t seed = 0;

    void validate() const;
};

// Every record's size becomes pad_to; timestamps and label untouched.
// pad_to below the trace's max size would truncate, so it is an error.
Trace pad_sizes(const Trace& trace, std::uint32_t pad_to);

// Per-packet i.i.d. delay d_i ~ Uniform[0, max_delay] with a FIFO clamp:
// departure_i = max(t_i + d_i, departure_{i-1}). Sizes and label untouched.
// trace_id picks the per-trace substream, so a dataset can be reshaped in
// any order (or in parallel) with identical results.
Trace jitter_delays(const Trace& trace, const ReshapePolicy& policy, std::uint64_t trace_id = 0);

// pad_sizes (when enabled) followed by jitter_delays (when max_delay > 0).
Trace reshape_trace(const Trace& trace, const ReshapePolicy& policy, std::uint64_t trace_id = 0);

// Largest packet size across a set of traces; the natural pad_to.
std::uint32_t max_packet_size(std::span<const Trace> traces);

// Mean of (reshaped timestamp - original timestamp) over aligned records.
double mean_added_delay(const Trace& before, const Trace& after);

struct DelaySweepPoint {
    double max_delay = 0.0;
    double acc_clean_model = 0.0; // model fit on clean traffic, tested reshaped
    double acc_retrained = 0.0;   // model fit and tested on reshaped traffic
};

struct DelaySweepCurve {
    std::vector<DelaySweepPoint> points;
    std::string to_csv(const std::string& config_hash) const;
};

// 0 plus 11 log-spaced delays from 10 us to 0.5 ms.
std::vector<double> default_delay_grid();

// Accuracy collapse as a function of max delay. For each D every trace is
// padded to the global max size (unless with_padding is off) and jittered
// with bound D; the curve reports both the clean-trained model scored on
// reshaped windows (paired folds, window-aligned) and a model retrained on
// the reshaped traffic.
DelaySweepCurve sweep_delay(std::span<const Trace> traces, const std::vector<double>& delays,
                            const WindowParams& wparams, const ForestParams& fparams,
                            bool with_padding = true);

} // namespace airtrace

#endif
