#ifndef AIRTRACE_CORE_EVAL_HPP
#define AIRTRACE_CORE_EVAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forest.hpp"

namespace airtrace {

// Stratified fold assignment: each class is shuffled with its own derived
// stream and dealt round-robin, so per-class fold sizes differ by at most
// one. Fails when any class has fewer samples than k.
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<ClassLabel>& labels,
                                                       std::size_t k, std::uint64_t seed);

struct EvaluationReport {
    std::vector<ClassLabel> classes;
    std::vector<std::vector<std::uint64_t>> confusion; // [true][predicted]
    std::vector<double> fold_accuracies;

    std::uint64_t total() const;
    std::uint64_t correct() const;
    double accuracy() const;
    // Empty when the denominator is zero (class never predicted / absent).
    std::optional<double> precision(std::size_t c) const;
    std::optional<double> recall(std::size_t c) const;

    std::string to_csv(const std::string& config_hash) const;
    std::string to_summary(const std::string& config_hash,
                           const std::vector<std::string>& notes = {}) const;
};

// k-fold cross-validation of a forest over one dataset.
EvaluationReport cross_validate(const FeatureDataset& dataset, const ForestParams& params);

// Same folds, but train on train_ds and score the aligned sample in test_ds.
// Requires sample-wise label alignment; used to score a model fit on clean
// traffic against a reshaped view of the same windows.
EvaluationReport cross_validate_paired(const FeatureDataset& train_ds,
                                       const FeatureDataset& test_ds, const ForestParams& params);

struct BinaryMetrics {
    std::optional<double> tpr; // empty when no positive samples
    std::optional<double> fpr; // empty when no negative samples
    double accuracy = 0.0;
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Collapse a multi-class report to one-vs-rest for the given positive class.
BinaryMetrics binary_metrics(const EvaluationReport& report, const ClassLabel& positive);

} // namespace airtrace

#endif
