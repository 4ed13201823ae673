#include "eclipse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace airtrace {

namespace {
constexpr std::uint64_t kTagJitter = 0xec1;
constexpr std::uint64_t kTagSweep = 0x5de1;
} // namespace

void ReshapePolicy::validate() const {
    if (!(max_delay >= 0.0) || !std::isfinite(max_delay))
        raise(Errc::config, "max_delay must be finite and >= 0");
    if (pad_to && *pad_to == 0) raise(Errc::config, "pad_to must be >= 1");
}

Trace pad_sizes(const Trace& trace, std::uint32_t pad_to) {
    const std::uint32_t biggest = trace.max_packet_size();
    if (pad_to < biggest) {
        raise(Errc::invalid_argument, "pad_to " + std::to_string(pad_to) +
                                          " is below the largest packet (" +
                                          std::to_string(biggest) + "); refusing to truncate");
    }
    std::vector<PacketRecord> records = trace.records();
    for (PacketRecord& r : records) r.size = pad_to;
    return Trace(std::move(records), trace.label());
}

Trace jitter_delays(const Trace& trace, const ReshapePolicy& policy, std::uint64_t trace_id) {
    policy.validate();
    if (policy.max_delay == 0.0 || trace.empty()) return trace;

    RngStream rng = RngStream::derive(policy.seed, {kTagJitter, trace_id});
    std::vector<PacketRecord> records = trace.records();
    double previous = -std::numeric_limits<double>::infinity();
    for (PacketRecord& r : records) {
        const double departure = r.timestamp + rng.uniform(0.0, policy.max_delay);
        previous = std::max(departure, previous);
        r.timestamp = previous;
    }
    return Trace(std::move(records), trace.label());
}

Trace reshape_trace(const Trace& trace, const ReshapePolicy& policy, std::uint64_t trace_id) {
    policy.validate();
    Trace out = policy.pad_to ? pad_sizes(trace, *policy.pad_to) : trace;
    return jitter_delays(out, policy, trace_id);
}

std::uint32_t max_packet_size(std::span<const Trace> traces) {
    std::uint32_t biggest = 0;
    for (const Trace& t : traces) biggest = std::max(biggest, t.max_packet_size());
    if (biggest == 0) raise(Errc::empty_trace, "no packets to take a max size over");
    return biggest;
}

double mean_added_delay(const Trace& before, const Trace& after) {
    if (before.size() != after.size())
        raise(Errc::invalid_argument, "traces differ in packet count");
    if (before.empty()) raise(Errc::empty_trace, "empty trace");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < before.size(); ++i)
        sum += after.records()[i].timestamp - before.records()[i].timestamp;
    return static_cast<double>(sum / static_cast<long double>(before.size()));
}

std::string DelaySweepCurve::to_csv(const std::string& config_hash) const {
    std::string out;
    write_report_header(out, "delay-sweep", config_hash);
    out += "delay_s,acc_clean_model,acc_retrained\n";
    for (const auto& p : points) {
        out += format_double(p.max_delay) + "," + format_double(p.acc_clean_model) + "," +
               format_double(p.acc_retrained) + "\n";
    }
    return out;
}

std::vector<double> default_delay_grid() {
    std::vector<double> grid{0.0};
    const double lo = 1e-5, hi = 5e-4;
    for (int k = 0; k <= 10; ++k) {
        grid.push_back(k == 10 ? hi
                               : lo * std::pow(hi / lo, static_cast<double>(k) / 10.0));
    }
    return grid;
}

DelaySweepCurve sweep_delay(std::span<const Trace> traces, const std::vector<double>& delays,
                            const WindowParams& wparams, const ForestParams& fparams,
                            bool with_padding) {
    if (delays.empty()) raise(Errc::config, "delay sweep needs at least one delay");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (!(delays[i] >= 0.0) || !std::isfinite(delays[i]))
            raise(Errc::config, "delays must be finite and >= 0");
        if (i > 0 && delays[i] < delays[i - 1])
            raise(Errc::config, "delays must be sorted ascending");
    }

    const std::uint32_t pad_to = with_padding ? max_packet_size(traces) : 0;

    // Clean features once; the reshaped extraction below yields the same
    // window count and order (reshaping never drops packets), and
    // balance_classes picks identical positions for identical label
    // layouts, so paired folds stay window-aligned.
    const FeatureDataset clean =
        balance_classes(extract_dataset(traces, wparams), fparams.seed);

    DelaySweepCurve curve;
    for (std::size_t di = 0; di < delays.size(); ++di) {
        ReshapePolicy policy;
        if (with_padding) policy.pad_to = pad_to;
        policy.max_delay = delays[di];
        policy.seed = mix_seed(mix_seed(fparams.seed, kTagSweep), di);

        std::vector<Trace> reshaped;
        reshaped.reserve(traces.size());
        for (std::size_t ti = 0; ti < traces.size(); ++ti)
            reshaped.push_back(reshape_trace(traces[ti], policy, ti));

        const FeatureDataset shifted =
            balance_classes(extract_dataset(reshaped, wparams), fparams.seed);

        DelaySweepPoint point;
        point.max_delay = delays[di];
        point.acc_clean_model = cross_validate_paired(clean, shifted, fparams).accuracy();
        point.acc_retrained = cross_validate(shifted, fparams).accuracy();
        curve.points.push_back(point);
    }
    return curve;
}

} // namespace airtrace
