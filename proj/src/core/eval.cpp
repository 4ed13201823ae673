#include "eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "error.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace airtrace {

namespace {

constexpr std::uint64_t kTagFoldShuffle = 0x5f1e;
constexpr std::uint64_t kTagFoldForest = 0xf01d;

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
    return buf;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

} // namespace

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<ClassLabel>& labels,
                                                       std::size_t k, std::uint64_t seed) {
    if (k < 2) raise(Errc::config, "need at least 2 folds");
    std::map<ClassLabel, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    for (const auto& [label, idx] : by_class) {
        if (idx.size() < k) {
            raise(Errc::class_too_small, "class " + label.display() + " has " +
                                             std::to_string(idx.size()) + " samples, fewer than " +
                                             std::to_string(k) + " folds");
        }
    }

    std::vector<std::vector<std::size_t>> folds(k);
    std::uint64_t ordinal = 0;
    for (auto& [label, idx] : by_class) {
        RngStream rng = RngStream::derive(seed, {kTagFoldShuffle, ordinal++});
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i) folds[i % k].push_back(idx[i]);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

std::uint64_t EvaluationReport::total() const {
    std::uint64_t t = 0;
    for (const auto& row : confusion)
        for (std::uint64_t v : row) t += v;
    return t;
}

std::uint64_t EvaluationReport::correct() const {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < confusion.size(); ++i) c += confusion[i][i];
    return c;
}

double EvaluationReport::accuracy() const {
    const std::uint64_t t = total();
    return t == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(t);
}

std::optional<double> EvaluationReport::precision(std::size_t c) const {
    std::uint64_t col = 0;
    for (const auto& row : confusion) col += row[c];
    if (col == 0) return std::nullopt;
    return static_cast<double>(confusion[c][c]) / static_cast<double>(col);
}

std::optional<double> EvaluationReport::recall(std::size_t c) const {
    std::uint64_t row = 0;
    for (std::uint64_t v : confusion[c]) row += v;
    if (row == 0) return std::nullopt;
    return static_cast<double>(confusion[c][c]) / static_cast<double>(row);
}

std::string EvaluationReport::to_csv(const std::string& config_hash) const {
    std::string out;
    write_report_header(out, "evaluation", config_hash);
    out += "true_class";
    for (const ClassLabel& c : classes) out += "," + c.display();
    out += ",recall\n";
    for (std::size_t i = 0; i < classes.size(); ++i) {
        out += classes[i].display();
        for (std::size_t j = 0; j < classes.size(); ++j)
            out += "," + std::to_string(confusion[i][j]);
        out += "," + opt_str(recall(i)) + "\n";
    }
    out += "precision";
    for (std::size_t j = 0; j < classes.size(); ++j) out += "," + opt_str(precision(j));
    out += ",\n";
    out += "# overall_accuracy," + format_double(accuracy()) + "\n";
    for (std::size_t f = 0; f < fold_accuracies.size(); ++f)
        out += "# fold_" + std::to_string(f) + "_accuracy," + format_double(fold_accuracies[f]) +
               "\n";
    return out;
}

std::string EvaluationReport::to_summary(const std::string& config_hash,
                                         const std::vector<std::string>& notes) const {
    std::string out;
    write_report_header(out, "summary", config_hash);
    out += "samples: " + std::to_string(total()) + "\n";
    out += "classes: " + std::to_string(classes.size()) + "\n";
    out += "overall accuracy: " + percent(accuracy()) + "\n";
    if (!fold_accuracies.empty()) {
        double lo = fold_accuracies[0], hi = fold_accuracies[0];
        for (double a : fold_accuracies) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        out += "fold accuracy range: " + percent(lo) + " .. " + percent(hi) + " over " +
               std::to_string(fold_accuracies.size()) + " folds\n";
    }
    out += "per-class precision / recall:\n";
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto p = precision(c);
        const auto r = recall(c);
        out += "  " + classes[c].display() + ": " + (p ? percent(*p) : std::string("NA")) + " / " +
               (r ? percent(*r) : std::string("NA")) + "\n";
    }
    for (const std::string& n : notes) out += n + "\n";
    return out;
}

EvaluationReport cross_validate(const FeatureDataset& dataset, const ForestParams& params) {
    return cross_validate_paired(dataset, dataset, params);
}

EvaluationReport cross_validate_paired(const FeatureDataset& train_ds,
                                       const FeatureDataset& test_ds,
                                       const ForestParams& params) {
    if (train_ds.samples.size() != test_ds.samples.size())
        raise(Errc::invalid_argument, "paired datasets differ in sample count");
    if (train_ds.dim != test_ds.dim)
        raise(Errc::dimension_mismatch, "paired datasets differ in dimension");
    const std::size_t n = train_ds.samples.size();
    std::vector<ClassLabel> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = train_ds.samples[i].label;
        if (!(test_ds.samples[i].label == labels[i]))
            raise(Errc::invalid_argument, "paired datasets are not label-aligned");
    }
    params.validate(train_ds.dim);

    const std::vector<std::vector<std::size_t>> folds =
        stratified_folds(labels, params.k_folds, params.seed);

    EvaluationReport report;
    report.classes = train_ds.classes();
    report.confusion.assign(report.classes.size(),
                            std::vector<std::uint64_t>(report.classes.size(), 0));

    std::vector<char> in_fold(n);
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::fill(in_fold.begin(), in_fold.end(), 0);
        for (std::size_t i : folds[f]) in_fold[i] = 1;

        FeatureDataset train;
        train.dim = train_ds.dim;
        train.samples.reserve(n - folds[f].size());
        for (std::size_t i = 0; i < n; ++i)
            if (!in_fold[i]) train.samples.push_back(train_ds.samples[i]);

        const RandomForest forest = RandomForest::train_seeded(
            train, params, mix_seed(mix_seed(params.seed, kTagFoldForest), f));

        std::uint64_t fold_correct = 0;
        for (std::size_t i : folds[f]) {
            const FeatureVector& s = test_ds.samples[i];
            const ClassLabel pred = forest.predict(s.values).label;
            const auto ti = std::lower_bound(report.classes.begin(), report.classes.end(), s.label);
            const auto pi = std::lower_bound(report.classes.begin(), report.classes.end(), pred);
            ++report.confusion[static_cast<std::size_t>(ti - report.classes.begin())]
                              [static_cast<std::size_t>(pi - report.classes.begin())];
            if (pred == s.label) ++fold_correct;
        }
        report.fold_accuracies.push_back(static_cast<double>(fold_correct) /
                                         static_cast<double>(folds[f].size()));
    }
    return report;
}

BinaryMetrics binary_metrics(const EvaluationReport& report, const ClassLabel& positive) {
    const auto it = std::lower_bound(report.classes.begin(), report.classes.end(), positive);
    if (it == report.classes.end() || !(*it == positive))
        raise(Errc::invalid_argument, "positive class " + positive.display() + " not in report");
    const std::size_t p = static_cast<std::size_t>(it - report.classes.begin());

    BinaryMetrics m;
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        for (std::size_t j = 0; j < report.classes.size(); ++j) {
            const std::uint64_t v = report.confusion[i][j];
            if (i == p && j == p) m.tp += v;
            else if (i == p) m.fn += v;
            else if (j == p) m.fp += v;
            else m.tn += v;
        }
    }
    if (m.tp + m.fn > 0)
        m.tpr = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    if (m.fp + m.tn > 0)
        m.fpr = static_cast<double>(m.fp) / static_cast<double>(m.fp + m.tn);
    const std::uint64_t total = m.tp + m.fp + m.tn + m.fn;
    m.accuracy = total == 0 ? 0.0
                            : static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
    return m;
}

} // namespace airtrace
