#include "synth.hpp"

#include <cmath>
#include <numeric>

#include "error.hpp"

namespace airtrace {

namespace {

// Substream tags so interarrival, size, and segment draws stay independent.
constexpr std::uint64_t kTagInterarrival = 0x1a7;
constexpr std::uint64_t kTagSize = 0x512e;
constexpr std::uint64_t kTagSegment = 0x5e6;

void check(bool ok, const std::string& what) {
    if (!ok) raise(Errc::config, what);
}

} // namespace

void IntervalDist::validate() const {
    switch (family) {
        case Family::constant:
            check(a >= 0.0 && std::isfinite(a), "constant interarrival must be >= 0");
            break;
        case Family::uniform:
            check(a >= 0.0 && b >= a && std::isfinite(b), "uniform interarrival needs 0 <= lo <= hi");
            break;
        case Family::lognormal:
            check(std::isfinite(a) && b >= 0.0 && std::isfinite(b),
                  "lognormal interarrival needs finite mu and sigma >= 0");
            break;
        case Family::exponential:
            check(a > 0.0 && std::isfinite(a), "exponential interarrival needs mean > 0");
            break;
    }
}

double IntervalDist::sample(RngStream& rng) const {
    switch (family) {
        case Family::constant: return a;
        case Family::uniform: return rng.uniform(a, b);
        case Family::lognormal: return rng.lognormal(a, b);
        case Family::exponential: return rng.exponential(a);
    }
    return 0.0;
}

void SizeDist::validate() const {
    check(!values.empty(), "size distribution needs at least one value");
    for (auto v : values) check(v >= 1, "size outcomes must be >= 1");
    if (!weights.empty()) {
        check(weights.size() == values.size(), "size values/weights length mismatch");
        double sum = 0.0;
        for (double w : weights) {
            check(w >= 0.0 && std::isfinite(w), "size weights must be non-negative");
            sum += w;
        }
        check(std::abs(sum - 1.0) <= 1e-9, "size weights must sum to 1");
    }
}

std::uint32_t SizeDist::sample(RngStream& rng) const {
    if (values.size() == 1) return values[0];
    if (weights.empty())
        return values[static_cast<std::size_t>(rng.uniform_index(values.size()))];
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += weights[i];
        if (u < acc) return values[i];
    }
    return values.back();
}

void SynthProfile::validate() const {
    interarrival.validate();
    size.validate();
}

void MixtureProfile::validate() const {
    check(!components.empty(), "mixture needs at least one component");
    double sum = 0.0;
    for (const auto& c : components) {
        check(c.weight >= 0.0 && std::isfinite(c.weight), "component weight must be non-negative");
        c.interarrival.validate();
        c.size.validate();
        sum += c.weight;
    }
    check(std::abs(sum - 1.0) <= 1e-9, "component weights must sum to 1");
    check(segment_min >= 1 && segment_min <= segment_max, "need 1 <= segment_min <= segment_max");
}

Trace synthesize_trace(const SynthProfile& profile, std::uint64_t n_packets,
                       std::optional<ClassLabel> label) {
    profile.validate();
    if (n_packets < 1) raise(Errc::invalid_argument, "n_packets must be >= 1");

    RngStream gap_rng = RngStream::derive(profile.seed, {kTagInterarrival});
    RngStream size_rng = RngStream::derive(profile.seed, {kTagSize});

    std::vector<PacketRecord> records;
    records.reserve(n_packets);
    double t = 0.0;
    for (std::uint64_t i = 0; i < n_packets; ++i) {
        if (i > 0) t += profile.interarrival.sample(gap_rng);
        records.push_back({t, profile.size.sample(size_rng)});
    }
    return Trace(std::move(records), std::move(label));
}

Trace synthesize_mixture_trace(const MixtureProfile& profile, std::uint64_t n_packets,
                               std::optional<ClassLabel> label) {
    profile.validate();
    if (n_packets < 1) raise(Errc::invalid_argument, "n_packets must be >= 1");

    RngStream gap_rng = RngStream::derive(profile.seed, {kTagInterarrival});
    RngStream size_rng = RngStream::derive(profile.seed, {kTagSize});
    RngStream seg_rng = RngStream::derive(profile.seed, {kTagSegment});

    std::vector<PacketRecord> records;
    records.reserve(n_packets);
    double t = 0.0;
    while (records.size() < n_packets) {
        // Pick a component by weight, then emit one segment from it.
        const double u = seg_rng.uniform01();
        std::size_t ci = profile.components.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < profile.components.size(); ++i) {
            acc += profile.components[i].weight;
            if (u < acc) { ci = i; break; }
        }
        const auto& comp = profile.components[ci];

        std::uint64_t seg_len =
            profile.segment_min + seg_rng.uniform_index(profile.segment_max - profile.segment_min + 1);
        seg_len = std::min<std::uint64_t>(seg_len, n_packets - records.size());
        for (std::uint64_t i = 0; i < seg_len; ++i) {
            if (!records.empty()) t += comp.interarrival.sample(gap_rng);
            records.push_back({t, comp.size.sample(size_rng)});
        }
    }
    return Trace(std::move(records), std::move(label));
}

namespace {

IntervalDist interval_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family"))
        raise(Errc::config, "interarrival spec needs a \"family\"");
    const std::string family = j.at("family").get<std::string>();
    IntervalDist d;
    if (family == "constant") {
        d.family = IntervalDist::Family::constant;
        d.a = j.at("value").get<double>();
    } else if (family == "uniform") {
        d.family = IntervalDist::Family::uniform;
        d.a = j.at("lo").get<double>();
        d.b = j.at("hi").get<double>();
    } else if (family == "lognormal") {
        d.family = IntervalDist::Family::lognormal;
        d.a = j.at("mu").get<double>();
        d.b = j.at("sigma").get<double>();
    } else if (family == "exponential") {
        d.family = IntervalDist::Family::exponential;
        d.a = j.at("mean").get<double>();
    } else {
        raise(Errc::config, "unknown interarrival family \"" + family + "\"");
    }
    d.validate();
    return d;
}

SizeDist size_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("values"))
        raise(Errc::config, "size spec needs \"values\"");
    SizeDist d;
    d.values = j.at("values").get<std::vector<std::uint32_t>>();
    if (j.contains("weights")) d.weights = j.at("weights").get<std::vector<double>>();
    d.validate();
    return d;
}

} // namespace

TrafficProfile TrafficProfile::from_json(const nlohmann::json& j) {
    TrafficProfile p;
    try {
        if (!j.is_object()) raise(Errc::config, "profile must be a JSON object");
        const std::uint64_t seed = j.value("seed", std::uint64_t{0});
        p.n_packets_ = j.value("n_packets", std::uint64_t{0});
        if (j.contains("mixture")) {
            const auto& m = j.at("mixture");
            MixtureProfile mix;
            mix.seed = seed;
            if (m.contains("segment_packets")) {
                const auto seg = m.at("segment_packets").get<std::vector<std::uint64_t>>();
                if (seg.size() != 2) raise(Errc::config, "segment_packets wants [min, max]");
                mix.segment_min = seg[0];
                mix.segment_max = seg[1];
            }
            for (const auto& cj : m.at("components")) {
                MixtureProfile::Component c;
                c.weight = cj.value("weight", 1.0);
                c.interarrival = interval_from_json(cj.at("interarrival"));
                c.size = size_from_json(cj.at("size"));
                mix.components.push_back(std::move(c));
            }
            // Unweighted components share the mass evenly.
            bool any_weight = false;
            for (const auto& cj : m.at("components"))
                if (cj.contains("weight")) { any_weight = true; break; }
            if (!any_weight)
                for (auto& c : mix.components) c.weight = 1.0 / static_cast<double>(mix.components.size());
            mix.validate();
            p.mixture_ = std::move(mix);
        } else {
            SynthProfile single;
            single.seed = seed;
            if (!j.contains("interarrival") || !j.contains("size"))
                raise(Errc::config, "profile needs \"interarrival\" and \"size\" (or \"mixture\")");
            single.interarrival = interval_from_json(j.at("interarrival"));
            single.size = size_from_json(j.at("size"));
            single.validate();
            p.single_ = std::move(single);
        }
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::config, std::string("bad profile: ") + e.what());
    }
    return p;
}

TrafficProfile TrafficProfile::from_json_text(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(Errc::config, "profile is not valid JSON");
    return from_json(j);
}

std::uint64_t TrafficProfile::seed() const noexcept {
    return single_ ? single_->seed : mixture_->seed;
}

Trace TrafficProfile::synthesize(std::uint64_t n_packets, std::optional<ClassLabel> label) const {
    return synthesize_seeded(n_packets, seed(), std::move(label));
}

Trace TrafficProfile::synthesize_seeded(std::uint64_t n_packets, std::uint64_t seed,
                                        std::optional<ClassLabel> label) const {
    std::uint64_t n = n_packets != 0 ? n_packets : n_packets_;
    if (n == 0) raise(Errc::config, "profile has no n_packets and none was given");
    if (single_) {
        SynthProfile s = *single_;
        s.seed = seed;
        return synthesize_trace(s, n, std::move(label));
    }
    MixtureProfile m = *mixture_;
    m.seed = seed;
    return synthesize_mixture_trace(m, n, std::move(label));
}

} // namespace airtrace
