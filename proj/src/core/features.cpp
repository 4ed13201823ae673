#include "features.hpp"

#include <algorithm>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace airtrace {

namespace {
constexpr std::uint64_t kTagBalance = 0xba1a;
constexpr std::uint64_t kTagRawCap = 0xca9;
} // namespace

void WindowParams::validate() const {
    if (window_size < 1) raise(Errc::config, "window_size must be >= 1");
    if (stride != 0 && stride > window_size)
        raise(Errc::config, "stride must be in [1, window_size]");
    const auto& fs = effective_features();
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j)
            if (fs[i] == fs[j])
                raise(Errc::config, std::string("duplicate statistic \"") + stat_name(fs[i]) +
                                        "\" in feature set");
}

std::vector<double> interarrival_times(const Trace& trace) {
    if (trace.size() < 2)
        raise(Errc::insufficient_data,
              "interarrival times need >= 2 records, got " + std::to_string(trace.size()));
    const auto& rec = trace.records();
    std::vector<double> gaps(rec.size() - 1);
    for (std::size_t i = 0; i + 1 < rec.size(); ++i)
        gaps[i] = rec[i + 1].timestamp - rec[i].timestamp;
    return gaps;
}

std::vector<FeatureVector> window_stats(std::span<const double> series, const WindowParams& params,
                                        ClassLabel label) {
    params.validate();
    const std::size_t n = params.window_size;
    if (series.size() < n)
        raise(Errc::insufficient_data, "series length " + std::to_string(series.size()) +
                                           " is shorter than window size " + std::to_string(n));

    const auto& stats = params.effective_features();
    const std::size_t stride = params.effective_stride();

    std::vector<FeatureVector> out;
    std::uint32_t index = 0;
    for (std::size_t s = 0; s + n <= series.size(); s += stride, ++index) {
        FeatureVector fv;
        fv.values.resize(stats.size());
        fv.label = label;
        fv.window_index = index;
        fv.degenerate = compute_window_stats(series.subspan(s, n), stats, fv.values);
        out.push_back(std::move(fv));
    }
    return out;
}

std::vector<FeatureVector> extract_features(const Trace& trace, const WindowParams& params) {
    params.validate();
    if (!trace.label())
        raise(Errc::invalid_argument, "trace is unlabeled; set a class label before extraction");
    if (trace.size() < 2)
        raise(Errc::insufficient_data, "trace too short for feature extraction");
    const ClassLabel label = *trace.label();

    const std::vector<double> gaps = interarrival_times(trace);

    if (params.source == FeatureSource::InterarrivalOnly)
        return window_stats(gaps, params, label);

    // Size series aligned with the interarrival series: first packet dropped
    // so window w covers the same packet transitions in both.
    std::vector<double> sizes(trace.size() - 1);
    for (std::size_t i = 1; i < trace.size(); ++i)
        sizes[i - 1] = static_cast<double>(trace.records()[i].size);

    if (params.source == FeatureSource::SizeOnly)
        return window_stats(sizes, params, label);

    WindowParams single = params;
    single.source = FeatureSource::SizeOnly; // per-series stats below
    std::vector<FeatureVector> size_part = window_stats(sizes, single, label);
    std::vector<FeatureVector> gap_part = window_stats(gaps, single, label);

    std::vector<FeatureVector> out;
    out.reserve(size_part.size());
    for (std::size_t w = 0; w < size_part.size(); ++w) {
        FeatureVector fv;
        fv.values = std::move(size_part[w].values);
        fv.values.insert(fv.values.end(), gap_part[w].values.begin(), gap_part[w].values.end());
        fv.label = label;
        fv.window_index = static_cast<std::uint32_t>(w);
        fv.degenerate = size_part[w].degenerate || gap_part[w].degenerate;
        out.push_back(std::move(fv));
    }
    return out;
}

std::vector<ClassLabel> FeatureDataset::classes() const {
    return collect_classes(samples.begin(), samples.end(),
                           [](const FeatureVector& f) -> const ClassLabel& { return f.label; });
}

std::map<ClassLabel, std::size_t> FeatureDataset::class_counts() const {
    std::map<ClassLabel, std::size_t> counts;
    for (const auto& s : samples) ++counts[s.label];
    return counts;
}

FeatureDataset extract_dataset(std::span<const Trace> traces, const WindowParams& params) {
    FeatureDataset ds;
    ds.dim = params.dim();
    for (const auto& t : traces) {
        auto part = extract_features(t, params);
        ds.samples.insert(ds.samples.end(), std::make_move_iterator(part.begin()),
                          std::make_move_iterator(part.end()));
    }
    return ds;
}

namespace {

// Seeded choice of `keep` positions out of `count`, order preserved.
std::vector<std::size_t> sample_positions(std::size_t count, std::size_t keep, RngStream rng) {
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    rng.shuffle(idx);
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    return idx;
}

FeatureDataset downsample_per_class(const FeatureDataset& dataset, std::size_t target,
                                    std::uint64_t seed, std::uint64_t tag) {
    const auto classes = dataset.classes();

    // Per-class sample positions in dataset order.
    std::vector<std::vector<std::size_t>> members(classes.size());
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), dataset.samples[i].label);
        members[static_cast<std::size_t>(it - classes.begin())].push_back(i);
    }

    std::vector<bool> keep(dataset.samples.size(), false);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& m = members[c];
        if (m.size() <= target) {
            for (auto i : m) keep[i] = true;
            continue;
        }
        RngStream rng = RngStream::derive(seed, {tag, static_cast<std::uint64_t>(c)});
        for (auto pos : sample_positions(m.size(), target, std::move(rng))) keep[m[pos]] = true;
    }

    FeatureDataset out;
    out.dim = dataset.dim;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        if (keep[i]) out.samples.push_back(dataset.samples[i]);
    return out;
}

} // namespace

FeatureDataset balance_classes(const FeatureDataset& dataset, std::uint64_t seed) {
    const auto counts = dataset.class_counts();
    if (counts.size() < 2)
        raise(Errc::invalid_argument, "class balancing needs >= 2 classes, got " +
                                          std::to_string(counts.size()));
    std::size_t min_count = SIZE_MAX;
    for (const auto& [label, n] : counts) min_count = std::min(min_count, n);
    return downsample_per_class(dataset, min_count, seed, kTagBalance);
}

FeatureDataset raw_dataset(std::span<const Trace> traces, RawSource source,
                           std::size_t per_class_cap, std::uint64_t seed) {
    FeatureDataset ds;
    ds.dim = 1;
    for (const auto& t : traces) {
        if (!t.label())
            raise(Errc::invalid_argument, "trace is unlabeled; set a class label before extraction");
        if (t.empty()) raise(Errc::insufficient_data, "empty trace");
        std::vector<double> values;
        if (source == RawSource::Interarrival) {
            values = interarrival_times(t);
        } else {
            values.resize(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                values[i] = static_cast<double>(t.records()[i].size);
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            FeatureVector fv;
            fv.values = {values[i]};
            fv.label = *t.label();
            fv.window_index = static_cast<std::uint32_t>(i);
            ds.samples.push_back(std::move(fv));
        }
    }
    if (per_class_cap > 0) return downsample_per_class(ds, per_class_cap, seed, kTagRawCap);
    return ds;
}

std::string export_features_csv(const FeatureDataset& dataset, const WindowParams& params,
                                std::string_view config_hash) {
    std::ostringstream os;
    write_report_header(os, "features", config_hash);

    os << "device,service,window_index,degenerate";
    const auto& fs = params.effective_features();
    if (params.source == FeatureSource::Combined) {
        for (const auto& s : fs) os << ",size_" << stat_name(s);
        for (const auto& s : fs) os << ",iat_" << stat_name(s);
    } else {
        for (const auto& s : fs) os << ',' << stat_name(s);
    }
    os << '\n';

    for (const auto& s : dataset.samples) {
        os << s.label.device_name() << ',' << s.label.service_name() << ',' << s.window_index << ','
           << (s.degenerate ? 1 : 0);
        for (double v : s.values) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

std::string source_name(FeatureSource source) {
    switch (source) {
        case FeatureSource::InterarrivalOnly: return "interarrival";
        case FeatureSource::SizeOnly: return "size";
        case FeatureSource::Combined: return "combined";
    }
    return "?";
}

FeatureSource parse_source(const std::string& name) {
    if (name == "interarrival" || name == "iat") return FeatureSource::InterarrivalOnly;
    if (name == "size") return FeatureSource::SizeOnly;
    if (name == "combined") return FeatureSource::Combined;
    raise(Errc::config, "unknown feature source \"" + name +
                            "\" (expected interarrival, size, or combined)");
}

nlohmann::json window_params_to_json(const WindowParams& params) {
    nlohmann::json j;
    j["window_size"] = params.window_size;
    j["stride"] = params.stride;
    nlohmann::json fs = nlohmann::json::array();
    for (Stat s : params.feature_set) fs.push_back(stat_name(s));
    j["feature_set"] = std::move(fs);
    j["source"] = source_name(params.source);
    return j;
}

WindowParams window_params_from_json(const nlohmann::json& j) {
    try {
        WindowParams p;
        if (j.contains("window_size")) p.window_size = j.at("window_size").get<std::uint32_t>();
        if (j.contains("stride")) p.stride = j.at("stride").get<std::uint32_t>();
        if (j.contains("feature_set")) {
            for (const auto& s : j.at("feature_set"))
                p.feature_set.push_back(parse_stat(s.get<std::string>()));
        }
        if (j.contains("source")) p.source = parse_source(j.at("source").get<std::string>());
        p.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::config, std::string("bad window params: ") + e.what());
    }
}

} // namespace airtrace
