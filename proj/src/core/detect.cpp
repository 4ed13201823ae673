#include "detect.hpp"

#include <algorithm>

#include "error.hpp"
#include "util.hpp"

namespace airtrace {

namespace {

// Presentation order for the device/service table; classes outside the
// fixed set fall back to their natural label order after it.
int table_rank(const ClassLabel& l) {
    if (l.device() == Device::EchoDot && l.service() == Service::Music) return 0;
    if (l.device() == Device::EchoDot && l.service() == Service::News) return 1;
    if (l.device() == Device::Echo && l.service() == Service::News) return 2;
    if (l.device() == Device::Echo && l.service() == Service::Music) return 3;
    if (l.device() == Device::GoogleNestMini && l.service() == Service::Music) return 4;
    return 5;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

} // namespace

std::size_t DetectionReport::positives() const {
    std::size_t n = 0;
    for (const auto& v : verdicts)
        if (v.verdict == target) ++n;
    return n;
}

std::string DetectionReport::to_csv(const std::string& config_hash) const {
    std::string out;
    write_report_header(out, "detection", config_hash);
    out += "# target: " + target.display() + "\n";
    out += "chunk_index,verdict,target_share,windows\n";
    for (const auto& v : verdicts) {
        out += std::to_string(v.chunk_index) + "," + v.verdict.display() + "," +
               format_double(v.target_share) + "," + std::to_string(v.windows) + "\n";
    }
    return out;
}

Detector Detector::build(const Trace& target_trace, const Trace& noise_trace,
                         const WindowParams& wparams, const ForestParams& fparams) {
    wparams.validate();
    if (!target_trace.label())
        raise(Errc::invalid_argument, "target trace is unlabeled");
    const ClassLabel target = *target_trace.label();
    if (target.device() == Device::Noise)
        raise(Errc::invalid_argument, "target class cannot be Noise");
    if (noise_trace.size() < target_trace.size()) {
        raise(Errc::insufficient_data,
              "noise trace has " + std::to_string(noise_trace.size()) + " packets, need >= " +
                  std::to_string(target_trace.size()) + " to cover one chunk");
    }

    std::vector<Trace> traces;
    traces.push_back(target_trace);
    for (Trace& chunk : chunk_trace(noise_trace.with_label(ClassLabel::noise()),
                                    target_trace.size()))
        traces.push_back(std::move(chunk));

    const FeatureDataset balanced =
        balance_classes(extract_dataset(traces, wparams), fparams.seed);

    Detector d;
    d.target_ = target;
    d.wparams_ = wparams;
    d.chunk_len_ = target_trace.size();
    d.cv_accuracy_ = cross_validate(balanced, fparams).accuracy();
    // A detector that cannot beat chance on its own training material has
    // nothing to separate; refuse it rather than hand back a coin-flipper.
    if (d.cv_accuracy_ <= 0.55) {
        raise(Errc::degenerate_separation,
              "target and noise are statistically indistinguishable (cv accuracy " +
                  format_double(d.cv_accuracy_) + " <= 0.55)");
    }
    d.forest_ = RandomForest::train(balanced, fparams);
    return d;
}

DetectionReport Detector::detect(const Trace& unknown) const {
    std::vector<Trace> chunks;
    if (unknown.size() >= chunk_len_) {
        chunks = chunk_trace(unknown, chunk_len_);
    } else {
        chunks.push_back(unknown);
    }

    DetectionReport report;
    report.target = target_;
    for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        const Trace scored = chunks[ci].with_label(ClassLabel::noise()); // placeholder label
        const std::vector<FeatureVector> windows = extract_features(scored, wparams_);
        std::size_t target_votes = 0;
        for (const FeatureVector& w : windows) {
            if (forest_.predict(w.values).label == target_) ++target_votes;
        }
        ChunkVerdict v;
        v.chunk_index = ci;
        v.windows = windows.size();
        v.target_share = static_cast<double>(target_votes) / static_cast<double>(windows.size());
        v.verdict = 2 * target_votes > windows.size() ? target_ : ClassLabel::noise();
        report.verdicts.push_back(std::move(v));
    }
    return report;
}

nlohmann::json Detector::to_json() const {
    nlohmann::json j;
    j["format"] = "airtrace-detector";
    j["version"] = 1;
    j["target"] = target_.display();
    j["chunk_len"] = chunk_len_;
    j["cv_accuracy"] = cv_accuracy_;
    j["window_params"] = window_params_to_json(wparams_);
    j["forest"] = forest_.to_json();
    return j;
}

Detector Detector::from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "airtrace-detector")
            raise(Errc::parse, "not a detector bundle");
        if (j.at("version").get<int>() != 1)
            raise(Errc::unsupported_format, "unknown detector bundle version");
        Detector d;
        d.target_ = ClassLabel::parse_display(j.at("target").get<std::string>());
        d.chunk_len_ = j.at("chunk_len").get<std::size_t>();
        d.cv_accuracy_ = j.at("cv_accuracy").get<double>();
        d.wparams_ = window_params_from_json(j.at("window_params"));
        d.forest_ = RandomForest::from_json(j.at("forest"));
        if (d.forest_.classes().size() != 2)
            raise(Errc::parse, "detector forest must have exactly two classes");
        return d;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::parse, std::string("malformed detector bundle: ") + e.what());
    }
}

void Detector::save(const std::string& path) const {
    write_file(path, to_json().dump(2) + "\n");
}

Detector Detector::load(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(Errc::parse, "invalid JSON in detector bundle: " + path);
    return from_json(j);
}

std::string DetectionTable::to_csv(const std::string& config_hash) const {
    std::string out;
    write_report_header(out, "detection-table", config_hash);
    out += "device,service,tpr,fpr,accuracy\n";
    for (const auto& r : rows) {
        out += r.target.device_name() + "," + r.target.service_name() + "," + opt_str(r.tpr) +
               "," + opt_str(r.fpr) + "," + format_double(r.accuracy) + "\n";
    }
    return out;
}

DetectionTable evaluate_detection(std::span<const Detector> detectors,
                                  std::span<const Trace> test_traces) {
    for (const Trace& t : test_traces)
        if (!t.label()) raise(Errc::invalid_argument, "test trace is unlabeled");

    DetectionTable table;
    for (const Detector& d : detectors) {
        DetectionRow row;
        row.target = d.target();
        for (const Trace& t : test_traces) {
            const bool truth_positive = *t.label() == d.target();
            const DetectionReport rep = d.detect(t);
            for (const ChunkVerdict& v : rep.verdicts) {
                const bool predicted_positive = v.verdict == d.target();
                if (truth_positive && predicted_positive) ++row.tp;
                else if (truth_positive) ++row.fn;
                else if (predicted_positive) ++row.fp;
                else ++row.tn;
            }
        }
        if (row.tp + row.fn > 0)
            row.tpr = static_cast<double>(row.tp) / static_cast<double>(row.tp + row.fn);
        if (row.fp + row.tn > 0)
            row.fpr = static_cast<double>(row.fp) / static_cast<double>(row.fp + row.tn);
        const std::uint64_t total = row.tp + row.fp + row.tn + row.fn;
        if (total > 0)
            row.accuracy =
                static_cast<double>(row.tp + row.tn) / static_cast<double>(total);
        table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const DetectionRow& a, const DetectionRow& b) {
        const int ra = table_rank(a.target), rb = table_rank(b.target);
        if (ra != rb) return ra < rb;
        return a.target < b.target;
    });
    return table;
}

} // namespace airtrace
