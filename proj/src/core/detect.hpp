#ifndef AIRTRACE_CORE_DETECT_HPP
#define AIRTRACE_CORE_DETECT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eval.hpp"

namespace airtrace {

struct ChunkVerdict {
    std::size_t chunk_index = 0;
    ClassLabel verdict;
    double target_share = 0.0; // fraction of windows voting for the target
    std::size_t windows = 0;
};

struct DetectionReport {
    ClassLabel target;
    std::vector<ChunkVerdict> verdicts;

    std::size_t positives() const; // chunks whose verdict is the target
    std::string to_csv(const std::string& config_hash) const;
};

// Binary presence detector for one (device, service) class against ambient
// noise. Training chunks the noise trace to the target trace's packet count
// so both classes contribute comparably shaped material.
class Detector {
public:
    static Detector build(const Trace& target_trace, const Trace& noise_trace,
                          const WindowParams& wparams, const ForestParams& fparams);

    // Chunk the unknown trace to the training chunk length (shorter but
    // windowable input is scored whole) and give a per-chunk verdict by
    // majority over window predictions; ties go to Noise.
    DetectionReport detect(const Trace& unknown) const;

    const ClassLabel& target() const noexcept { return target_; }
    const RandomForest& forest() const noexcept { return forest_; }
    const WindowParams& wparams() const noexcept { return wparams_; }
    std::size_t chunk_len() const noexcept { return chunk_len_; }
    double cv_accuracy() const noexcept { return cv_accuracy_; }

    nlohmann::json to_json() const;
    static Detector from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static Detector load(const std::string& path);

private:
    Detector() = default;
    ClassLabel target_;
    RandomForest forest_;
    WindowParams wparams_;
    std::size_t chunk_len_ = 0;
    double cv_accuracy_ = 0.0;
};

struct DetectionRow {
    ClassLabel target;
    std::optional<double> tpr;
    std::optional<double> fpr;
    double accuracy = 0.0;
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct DetectionTable {
    std::vector<DetectionRow> rows;
    std::string to_csv(const std::string& config_hash) const;
};

// Run every detector over every labeled test trace and aggregate chunk
// verdicts into per-detector TPR/FPR/accuracy. Rows keep the conventional
// device/service presentation order.
DetectionTable evaluate_detection(std::span<const Detector> detectors,
                                  std::span<const Trace> test_traces);

} // namespace airtrace

#endif
