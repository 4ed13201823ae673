#ifndef AIRTRACE_CORE_SYNTH_HPP
#define AIRTRACE_CORE_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rng.hpp"
#include "trace.hpp"

namespace airtrace {

// Interarrival distribution spec.
struct IntervalDist {
    enum class Family { constant, uniform, lognormal, exponential };
    Family family = Family::constant;
    double a = 0.0; // constant: value; uniform: lo; lognormal: mu; exponential: mean
    double b = 0.0; // uniform: hi; lognormal: sigma

    void validate() const;
    double sample(RngStream& rng) const;
};

// Categorical distribution over byte values.
struct SizeDist {
    std::vector<std::uint32_t> values;
    std::vector<double> weights; // empty = uniform; must sum to 1 within 1e-9

    void validate() const;
    std::uint32_t sample(RngStream& rng) const;
};

struct SynthProfile {
    IntervalDist interarrival;
    SizeDist size;
    std::uint64_t seed = 0;

    void validate() const;
};

// Crowd-noise style generator: the trace is a concatenation of segments,
// each drawn from one weighted component, so different windows see
// different local traffic rather than one homogeneous stream.
struct MixtureProfile {
    struct Component {
        double weight = 1.0;
        IntervalDist interarrival;
        SizeDist size;
    };
    std::vector<Component> components;
    std::uint64_t segment_min = 500; // packets per segment
    std::uint64_t segment_max = 2000;
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic for fixed (profile, seed): interarrivals i.i.d. from the
// interarrival spec, sizes i.i.d. from the size spec, timestamps cumulative
// sums starting at 0.
Trace synthesize_trace(const SynthProfile& profile, std::uint64_t n_packets,
                       std::optional<ClassLabel> label = std::nullopt);

Trace synthesize_mixture_trace(const MixtureProfile& profile, std::uint64_t n_packets,
                               std::optional<ClassLabel> label = std::nullopt);

// Declarative profile consumed by the CLI; wraps either a single profile or
// a mixture. Optional keys: "n_packets" (default packet count), "seed".
class TrafficProfile {
public:
    static TrafficProfile from_json(const nlohmann::json& j);
    static TrafficProfile from_json_text(std::string_view text);

    // n_packets = 0 uses the profile default; errors if neither is set.
    Trace synthesize(std::uint64_t n_packets, std::optional<ClassLabel> label = std::nullopt) const;
    // Overrides the profile seed (substream selection for repeated draws).
    Trace synthesize_seeded(std::uint64_t n_packets, std::uint64_t seed,
                            std::optional<ClassLabel> label = std::nullopt) const;

    bool is_mixture() const noexcept { return mixture_.has_value(); }
    std::uint64_t default_packets() const noexcept { return n_packets_; }
    std::uint64_t seed() const noexcept;

private:
    std::optional<SynthProfile> single_;
    std::optional<MixtureProfile> mixture_;
    std::uint64_t n_packets_ = 0;
};

} // namespace airtrace

#endif
