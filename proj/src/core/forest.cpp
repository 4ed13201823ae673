#include "forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace airtrace {

namespace {

constexpr std::uint64_t kTagTree = 0x7133;

} // namespace

std::uint32_t ForestParams::effective_features_per_split(std::size_t dim) const {
    if (features_per_split != 0) return features_per_split;
    return static_cast<std::uint32_t>(
        std::ceil(std::sqrt(static_cast<double>(dim))));
}

void ForestParams::validate(std::size_t dim) const {
    if (n_trees == 0) raise(Errc::config, "n_trees must be >= 1");
    if (k_folds < 2) raise(Errc::config, "k_folds must be >= 2");
    if (min_samples_leaf == 0) raise(Errc::config, "min_samples_leaf must be >= 1");
    if (features_per_split > dim) {
        raise(Errc::config, "features_per_split " + std::to_string(features_per_split) +
                                " exceeds feature dimension " + std::to_string(dim));
    }
}

std::size_t DecisionTree::predict(std::span<const double> x) const {
    const TreeNode& leaf = leaf_for(x);
    std::size_t best = 0;
    std::uint32_t best_count = 0;
    for (std::size_t c = 0; c < leaf.counts.size(); ++c) {
        if (leaf.counts[c] > best_count) {
            best_count = leaf.counts[c];
            best = c;
        }
    }
    return best;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
    if (nodes_.empty()) raise(Errc::internal, "empty decision tree");
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        const TreeNode& n = nodes_[i];
        if (static_cast<std::size_t>(n.feature) >= x.size())
            raise(Errc::dimension_mismatch, "sample narrower than tree expects");
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold
                                         ? n.left
                                         : n.right);
    }
    return nodes_[i];
}

SplitResult find_best_split(const std::vector<std::vector<double>>& columns,
                            const std::vector<int>& labels, std::span<const std::size_t> rows,
                            std::span<const std::size_t> features, std::size_t n_classes,
                            std::size_t min_samples_leaf) {
    SplitResult best;
    const std::size_t n = rows.size();
    if (n < 2 * min_samples_leaf) return best;

    std::vector<std::pair<double, int>> sorted; // (value, class) per row
    sorted.reserve(n);
    std::vector<std::uint64_t> left_counts(n_classes), total_counts(n_classes);

    for (std::size_t f : features) {
        const std::vector<double>& col = columns[f];
        sorted.clear();
        std::fill(total_counts.begin(), total_counts.end(), 0);
        for (std::size_t r : rows) {
            sorted.emplace_back(col[r], labels[r]);
            ++total_counts[static_cast<std::size_t>(labels[r])];
        }
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (sorted.front().first == sorted.back().first) continue; // constant column

        std::fill(left_counts.begin(), left_counts.end(), 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ++left_counts[static_cast<std::size_t>(sorted[i].second)];
            if (sorted[i].first == sorted[i + 1].first) continue;
            const std::uint64_t nl = i + 1;
            const std::uint64_t nr = n - nl;
            if (nl < min_samples_leaf || nr < min_samples_leaf) continue;

            double sl = 0.0, sr = 0.0;
            for (std::size_t c = 0; c < n_classes; ++c) {
                const double pl = static_cast<double>(left_counts[c]) / static_cast<double>(nl);
                const double pr = static_cast<double>(total_counts[c] - left_counts[c]) /
                                  static_cast<double>(nr);
                sl += pl * pl;
                sr += pr * pr;
            }
            const double impurity = (static_cast<double>(nl) * (1.0 - sl) +
                                     static_cast<double>(nr) * (1.0 - sr)) /
                                    static_cast<double>(n);
            // Strict < keeps the first candidate on ties; features arrive in
            // ascending index order and thresholds in ascending value order,
            // so ties resolve to the lowest (feature, threshold).
            if (!best.found || impurity < best.impurity) {
                best.found = true;
                best.feature = f;
                best.threshold = std::midpoint(sorted[i].first, sorted[i + 1].first);
                best.impurity = impurity;
            }
        }
    }
    return best;
}

namespace {

struct TreeBuilder {
    const std::vector<std::vector<double>>& columns;
    const std::vector<int>& labels;
    std::size_t n_classes;
    const ForestParams& params;
    RngStream& rng;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> feature_perm;

    TreeBuilder(const std::vector<std::vector<double>>& cols, const std::vector<int>& y,
                std::size_t nc, const ForestParams& p, RngStream& r)
        : columns(cols), labels(y), n_classes(nc), params(p), rng(r) {
        feature_perm.resize(columns.size());
    }

    std::int32_t build(std::vector<std::size_t>& rows, std::uint32_t depth) {
        std::vector<std::uint64_t> counts(n_classes, 0);
        for (std::size_t r : rows) ++counts[static_cast<std::size_t>(labels[r])];
        const bool pure = std::count_if(counts.begin(), counts.end(),
                                        [](std::uint64_t c) { return c > 0; }) <= 1;
        const bool depth_capped = params.max_depth != 0 && depth >= params.max_depth;

        SplitResult split;
        if (!pure && !depth_capped && rows.size() >= 2 * params.min_samples_leaf) {
            // Fresh feature permutation per node; evaluate the first m in
            // ascending index order. If none of those admits a split (all
            // constant over this node), keep walking the permutation so an
            // impure node only becomes a leaf when no feature can split it.
            const std::size_t d = columns.size();
            const std::size_t m = params.effective_features_per_split(d);
            for (std::size_t i = 0; i < d; ++i) feature_perm[i] = i;
            rng.shuffle(feature_perm);
            std::sort(feature_perm.begin(), feature_perm.begin() + static_cast<std::ptrdiff_t>(m));
            split = find_best_split(columns, labels, rows,
                                    std::span<const std::size_t>(feature_perm.data(), m),
                                    n_classes, params.min_samples_leaf);
            for (std::size_t i = m; i < d && !split.found; ++i) {
                split = find_best_split(columns, labels, rows,
                                        std::span<const std::size_t>(&feature_perm[i], 1),
                                        n_classes, params.min_samples_leaf);
            }
        }

        if (!split.found) {
            TreeNode leaf;
            leaf.counts.assign(counts.begin(), counts.end());
            nodes.push_back(std::move(leaf));
            return static_cast<std::int32_t>(nodes.size() - 1);
        }

        std::vector<std::size_t> left_rows, right_rows;
        const std::vector<double>& col = columns[split.feature];
        for (std::size_t r : rows) {
            (col[r] < split.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::size_t self = nodes.size();
        nodes.emplace_back();
        nodes[self].feature = static_cast<std::int32_t>(split.feature);
        nodes[self].threshold = split.threshold;
        const std::int32_t l = build(left_rows, depth + 1);
        const std::int32_t r = build(right_rows, depth + 1);
        nodes[self].left = l;
        nodes[self].right = r;
        return static_cast<std::int32_t>(self);
    }
};

struct TrainingView {
    std::vector<std::vector<double>> columns; // columns[f][sample]
    std::vector<int> labels;                  // class ordinal per sample
    std::vector<ClassLabel> classes;
};

TrainingView make_view(const FeatureDataset& dataset) {
    if (dataset.samples.empty()) raise(Errc::insufficient_data, "no training samples");
    TrainingView v;
    v.classes = dataset.classes();
    const std::size_t n = dataset.samples.size();
    v.columns.assign(dataset.dim, std::vector<double>(n));
    v.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FeatureVector& s = dataset.samples[i];
        for (std::size_t f = 0; f < dataset.dim; ++f) v.columns[f][i] = s.values[f];
        const auto it = std::lower_bound(v.classes.begin(), v.classes.end(), s.label);
        v.labels[i] = static_cast<int>(it - v.classes.begin());
    }
    return v;
}

DecisionTree train_tree_on_view(const TrainingView& view, const ForestParams& params,
                                RngStream& rng) {
    const std::size_t n = view.labels.size();
    std::vector<std::size_t> rows;
    if (params.bootstrap) {
        rows.resize(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = rng.uniform_index(n);
    } else {
        rows.resize(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    }
    TreeBuilder builder(view.columns, view.labels, view.classes.size(), params, rng);
    builder.build(rows, 0);
    return DecisionTree(std::move(builder.nodes));
}

} // namespace

DecisionTree train_single_tree(const FeatureDataset& dataset, const ForestParams& params,
                               std::uint64_t stream_seed) {
    params.validate(dataset.dim);
    const TrainingView view = make_view(dataset);
    RngStream rng = RngStream::derive(stream_seed, {kTagTree, 0});
    return train_tree_on_view(view, params, rng);
}

RandomForest RandomForest::train(const FeatureDataset& dataset, const ForestParams& params) {
    return train_seeded(dataset, params, params.seed);
}

RandomForest RandomForest::train_seeded(const FeatureDataset& dataset, const ForestParams& params,
                                        std::uint64_t stream_seed) {
    params.validate(dataset.dim);
    const TrainingView view = make_view(dataset);

    RandomForest forest;
    forest.classes_ = view.classes;
    forest.dim_ = dataset.dim;
    forest.params_ = params;
    forest.trees_.reserve(params.n_trees);
    for (std::uint32_t t = 0; t < params.n_trees; ++t) {
        RngStream rng = RngStream::derive(stream_seed, {kTagTree, t});
        forest.trees_.push_back(train_tree_on_view(view, params, rng));
    }
    return forest;
}

RandomForest::Prediction RandomForest::predict(std::span<const double> x) const {
    if (x.size() != dim_) {
        raise(Errc::dimension_mismatch,
              "sample has " + std::to_string(x.size()) + " features, forest expects " +
                  std::to_string(dim_));
    }
    Prediction p;
    p.votes.assign(classes_.size(), 0);
    for (const DecisionTree& t : trees_) ++p.votes[t.predict(x)];
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.votes.size(); ++c) {
        if (p.votes[c] > p.votes[best]) best = c;
    }
    p.label = classes_[best];
    return p;
}

nlohmann::json RandomForest::to_json() const {
    nlohmann::json j;
    j["format"] = "airtrace-forest";
    j["version"] = 1;
    j["params"] = {{"n_trees", params_.n_trees},
                   {"k_folds", params_.k_folds},
                   {"max_depth", params_.max_depth},
                   {"min_samples_leaf", params_.min_samples_leaf},
                   {"features_per_split", params_.features_per_split},
                   {"seed", params_.seed},
                   {"bootstrap", params_.bootstrap}};
    nlohmann::json classes = nlohmann::json::array();
    for (const ClassLabel& c : classes_) classes.push_back(c.display());
    j["classes"] = classes;
    j["dim"] = dim_;
    nlohmann::json trees = nlohmann::json::array();
    for (const DecisionTree& t : trees_) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const TreeNode& n : t.nodes()) {
            if (n.feature < 0) {
                nodes.push_back({{"counts", n.counts}});
            } else {
                nodes.push_back(
                    {{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}});
            }
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    j["trees"] = std::move(trees);
    return j;
}

RandomForest RandomForest::from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "airtrace-forest")
            raise(Errc::parse, "not a forest model file");
        if (j.at("version").get<int>() != 1)
            raise(Errc::unsupported_format, "unknown forest model version");
        RandomForest forest;
        const nlohmann::json& p = j.at("params");
        forest.params_.n_trees = p.at("n_trees").get<std::uint32_t>();
        forest.params_.k_folds = p.at("k_folds").get<std::uint32_t>();
        forest.params_.max_depth = p.at("max_depth").get<std::uint32_t>();
        forest.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::uint32_t>();
        forest.params_.features_per_split = p.at("features_per_split").get<std::uint32_t>();
        forest.params_.seed = p.at("seed").get<std::uint64_t>();
        forest.params_.bootstrap = p.at("bootstrap").get<bool>();
        for (const auto& c : j.at("classes"))
            forest.classes_.push_back(ClassLabel::parse_display(c.get<std::string>()));
        forest.dim_ = j.at("dim").get<std::size_t>();
        for (const auto& jt : j.at("trees")) {
            std::vector<TreeNode> nodes;
            for (const auto& jn : jt.at("nodes")) {
                TreeNode n;
                if (jn.contains("counts")) {
                    n.counts = jn.at("counts").get<std::vector<std::uint32_t>>();
                    if (n.counts.size() != forest.classes_.size())
                        raise(Errc::parse, "leaf histogram width mismatch");
                } else {
                    n.feature = jn.at("f").get<std::int32_t>();
                    n.threshold = jn.at("t").get<double>();
                    n.left = jn.at("l").get<std::int32_t>();
                    n.right = jn.at("r").get<std::int32_t>();
                }
                nodes.push_back(std::move(n));
            }
            if (nodes.empty()) raise(Errc::parse, "tree with no nodes");
            forest.trees_.emplace_back(std::move(nodes));
        }
        if (forest.trees_.empty()) raise(Errc::parse, "model has no trees");
        return forest;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::parse, std::string("malformed forest model: ") + e.what());
    }
}

void RandomForest::save(const std::string& path) const {
    write_file(path, to_json().dump(2) + "\n");
}

RandomForest RandomForest::load(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(Errc::parse, "invalid JSON in model file: " + path);
    return from_json(j);
}

} // namespace airtrace
