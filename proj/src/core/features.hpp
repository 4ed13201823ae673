#ifndef AIRTRACE_CORE_FEATURES_HPP
#define AIRTRACE_CORE_FEATURES_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "stats.hpp"
#include "trace.hpp"

namespace airtrace {

enum class FeatureSource : std::uint8_t {
    InterarrivalOnly = 0,
    SizeOnly = 1,
    Combined = 2,
};

struct WindowParams {
    std::uint32_t window_size = 180;
    std::uint32_t stride = 0;       // 0 = window_size (tumbling windows)
    std::vector<Stat> feature_set;  // empty = default 8
    FeatureSource source = FeatureSource::Combined;

    std::uint32_t effective_stride() const { return stride == 0 ? window_size : stride; }
    const std::vector<Stat>& effective_features() const {
        return feature_set.empty() ? default_feature_set() : feature_set;
    }
    std::size_t dim() const {
        const std::size_t k = effective_features().size();
        return source == FeatureSource::Combined ? 2 * k : k;
    }
    void validate() const;
};

struct FeatureVector {
    std::vector<double> values;
    ClassLabel label;
    std::uint32_t window_index = 0;
    bool degenerate = false; // zero-variance source window
};

// Element i = timestamp(i+1) - timestamp(i); length n-1, entries >= 0.
std::vector<double> interarrival_times(const Trace& trace);

// Sliding-window statistics over one series. Windows start at multiples of
// the stride and never span past the end.
std::vector<FeatureVector> window_stats(std::span<const double> series, const WindowParams& params,
                                        ClassLabel label);

// Per-trace feature extraction. The size series drops the first packet so
// size and interarrival windows cover the same packet transitions; Combined
// concatenates [size stats || interarrival stats] per aligned window.
std::vector<FeatureVector> extract_features(const Trace& trace, const WindowParams& params);

struct FeatureDataset {
    std::vector<FeatureVector> samples;
    std::size_t dim = 0;

    std::vector<ClassLabel> classes() const;
    std::map<ClassLabel, std::size_t> class_counts() const;
};

FeatureDataset extract_dataset(std::span<const Trace> traces, const WindowParams& params);

// Seeded downsampling of every class to the minimum class count; relative
// order within each class is preserved.
FeatureDataset balance_classes(const FeatureDataset& dataset, std::uint64_t seed);

// Per-packet single-value baseline: every raw interarrival (or size) becomes
// a 1-dimensional sample. per_class_cap > 0 limits each class by seeded
// downsampling, since raw datasets are orders of magnitude larger than
// windowed ones.
enum class RawSource : std::uint8_t { Interarrival = 0, Size = 1 };
FeatureDataset raw_dataset(std::span<const Trace> traces, RawSource source,
                           std::size_t per_class_cap, std::uint64_t seed);

// CSV export: one row per window (device, service, window_index, degenerate,
// values...), with the usual metadata header.
std::string export_features_csv(const FeatureDataset& dataset, const WindowParams& params,
                                std::string_view config_hash);

// "interarrival" / "size" / "combined"
std::string source_name(FeatureSource source);
FeatureSource parse_source(const std::string& name);

nlohmann::json window_params_to_json(const WindowParams& params);
WindowParams window_params_from_json(const nlohmann::json& j);

} // namespace airtrace

#endif
