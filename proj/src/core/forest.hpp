#ifndef AIRTRACE_CORE_FOREST_HPP
#define AIRTRACE_CORE_FOREST_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "features.hpp"

namespace airtrace {

struct ForestParams {
    std::uint32_t n_trees = 30;
    std::uint32_t k_folds = 15;
    std::uint32_t max_depth = 0;         // 0 = unlimited
    std::uint32_t min_samples_leaf = 1;
    std::uint32_t features_per_split = 0; // 0 = ceil(sqrt(d))
    std::uint64_t seed = 0;
    bool bootstrap = true;                // test hook; leave on for bagging

    std::uint32_t effective_features_per_split(std::size_t dim) const;
    void validate(std::size_t dim) const;
};

// Flat node array; feature == -1 marks a leaf carrying its class histogram.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint32_t> counts;
};

class DecisionTree {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

    // Leaf majority class; ties break to the lowest class index.
    std::size_t predict(std::span<const double> x) const;
    const TreeNode& leaf_for(std::span<const double> x) const;

private:
    std::vector<TreeNode> nodes_;
};

// Best axis-aligned split over the given rows and candidate features.
// Thresholds are midpoints between consecutive distinct sorted values;
// quality is sample-weighted Gini impurity of the children. Ties break to
// the lowest feature index, then the lowest threshold.
struct SplitResult {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = 0.0; // weighted child Gini
};

SplitResult find_best_split(const std::vector<std::vector<double>>& columns,
                            const std::vector<int>& labels, std::span<const std::size_t> rows,
                            std::span<const std::size_t> features, std::size_t n_classes,
                            std::size_t min_samples_leaf);

class RandomForest {
public:
    struct Prediction {
        ClassLabel label;
        std::vector<std::uint32_t> votes; // per class, sums to n_trees
    };

    static RandomForest train(const FeatureDataset& dataset, const ForestParams& params);
    // Same training with an explicit stream seed (used by cross-validation
    // so per-fold forests get independent streams).
    static RandomForest train_seeded(const FeatureDataset& dataset, const ForestParams& params,
                                     std::uint64_t stream_seed);

    Prediction predict(std::span<const double> x) const;

    const std::vector<ClassLabel>& classes() const noexcept { return classes_; }
    std::size_t dim() const noexcept { return dim_; }
    const ForestParams& params() const noexcept { return params_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    nlohmann::json to_json() const;
    static RandomForest from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static RandomForest load(const std::string& path);

private:
    std::vector<DecisionTree> trees_;
    std::vector<ClassLabel> classes_;
    std::size_t dim_ = 0;
    ForestParams params_;
};

// Single CART tree trained with the given stream seed; exposed mainly for
// tests and the degenerate single-tree ensemble.
DecisionTree train_single_tree(const FeatureDataset& dataset, const ForestParams& params,
                               std::uint64_t stream_seed);

} // namespace airtrace

#endif
