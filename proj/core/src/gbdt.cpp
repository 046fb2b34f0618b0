#include "fedboost/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedboost {

GbdtConfig GbdtConfig::defaults(TaskKind task) {
    GbdtConfig cfg;
    cfg.base_score = (task == TaskKind::regression) ? 0.5 : 0.0;
    return cfg;
}

void GbdtConfig::validate() const {
    if (num_trees < 1) throw std::invalid_argument("num_trees must be >= 1");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0,1]");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (min_child_weight < 0.0) throw std::invalid_argument("min_child_weight must be >= 0");
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

GradHessPair grad_hess(TaskKind task, double label, double margin) {
    if (task == TaskKind::regression) return {margin - label, 1.0};
    double p = sigmoid(margin);
    return {p - label, p * (1.0 - p)};
}

double leaf_weight(const SplitStats& stats, double lambda) {
    double denom = stats.h_sum + lambda;
    if (denom <= 0.0) throw std::invalid_argument("leaf_weight: H + lambda must be > 0");
    return -stats.g_sum / denom;
}

double split_gain(const SplitStats& left, const SplitStats& right, double lambda, double gamma) {
    double hl = left.h_sum + lambda;
    double hr = right.h_sum + lambda;
    double hp = left.h_sum + right.h_sum + lambda;
    if (hl <= 0.0 || hr <= 0.0 || hp <= 0.0)
        throw std::invalid_argument("split_gain: degenerate hessian sum");
    double gp = left.g_sum + right.g_sum;
    return 0.5 * (left.g_sum * left.g_sum / hl + right.g_sum * right.g_sum / hr - gp * gp / hp) -
           gamma;
}

double predict_tree(const Tree& tree, const SparseExample& x) {
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf()) {
        node = (x.value(node->feature) < node->threshold) ? &tree.nodes[node->left]
                                                          : &tree.nodes[node->right];
    }
    return node->weight;
}

double predict_margin(const TreeEnsemble& ensemble, const SparseExample& x) {
    double sum = 0.0;
    for (const Tree& tree : ensemble.trees) sum += predict_tree(tree, x);
    return ensemble.config.base_score + ensemble.config.eta * sum;
}

FeatureColumns::FeatureColumns(const Dataset& ds)
    : num_rows_(ds.size()), num_features_(ds.dimension) {
    columns_.assign(static_cast<std::size_t>(num_features_) * num_rows_, 0.0);
    for (std::size_t i = 0; i < num_rows_; ++i) {
        for (const auto& [index, value] : ds.examples[i].features) {
            columns_[static_cast<std::size_t>(index - 1) * num_rows_ + i] = value;
        }
    }
}

std::optional<SplitCandidate> find_best_split(const std::vector<std::int32_t>& rows,
                                              const FeatureColumns& columns,
                                              const std::vector<GradHessPair>& grad,
                                              double lambda, double gamma,
                                              double min_child_weight) {
    if (rows.size() < 2) return std::nullopt;

    SplitStats total;
    for (std::int32_t r : rows) total.add(grad[static_cast<std::size_t>(r)]);

    struct Entry {
        double value;
        std::int32_t row;
    };
    std::vector<Entry> sorted(rows.size());

    bool found = false;
    std::int32_t best_feature = 0;
    double best_threshold = 0.0;
    double best_gain = 0.0;

    // Tie-break: lowest feature index, then lowest threshold.
    auto improves = [&](double gain, std::int32_t feature, double threshold) {
        if (!found) return true;
        if (gain != best_gain) return gain > best_gain;
        if (feature != best_feature) return feature < best_feature;
        return threshold < best_threshold;
    };

    for (std::int32_t feature = 1; feature <= columns.num_features(); ++feature) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            sorted[i] = {columns.at(static_cast<std::size_t>(rows[i]), feature), rows[i]};
        }
        std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
            return a.value < b.value;
        });

        SplitStats left;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            left.add(grad[static_cast<std::size_t>(sorted[i].row)]);
            if (sorted[i].value == sorted[i + 1].value) continue;  // not a boundary

            SplitStats right{total.g_sum - left.g_sum, total.h_sum - left.h_sum,
                             total.count - left.count};
            if (left.h_sum < min_child_weight || right.h_sum < min_child_weight) continue;
            if (left.h_sum + lambda <= 0.0 || right.h_sum + lambda <= 0.0) continue;

            double threshold = 0.5 * (sorted[i].value + sorted[i + 1].value);
            // Adjacent representable values can round the midpoint onto an
            // endpoint; such a boundary cannot partition consistently.
            if (!(sorted[i].value < threshold && threshold <= sorted[i + 1].value)) continue;
            double gain = split_gain(left, right, lambda, gamma);
            if (improves(gain, feature, threshold)) {
                best_feature = feature;
                best_threshold = threshold;
                best_gain = gain;
                found = true;
            }
        }
    }

    if (!found || best_gain <= 0.0) return std::nullopt;

    SplitCandidate cand;
    cand.feature = best_feature;
    cand.threshold = best_threshold;
    cand.gain = best_gain;
    for (std::int32_t r : rows) {
        if (columns.at(static_cast<std::size_t>(r), best_feature) < best_threshold)
            cand.left_rows.push_back(r);
        else
            cand.right_rows.push_back(r);
    }
    return cand;
}

namespace {

struct TreeBuilder {
    const FeatureColumns& columns;
    const std::vector<GradHessPair>& grad;
    const GbdtConfig& config;
    Tree tree;

    std::int32_t grow(const std::vector<std::int32_t>& rows, std::int32_t depth) {
        std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::optional<SplitCandidate> split;
        if (depth < config.max_depth && rows.size() >= 2) {
            split = find_best_split(rows, columns, grad, config.lambda, config.gamma,
                                    config.min_child_weight);
        }

        if (!split) {
            SplitStats stats;
            for (std::int32_t r : rows) stats.add(grad[static_cast<std::size_t>(r)]);
            tree.nodes[id].weight = leaf_weight(stats, config.lambda);
            ++tree.leaf_count;
            return id;
        }

        std::int32_t left = grow(split->left_rows, depth + 1);
        std::int32_t right = grow(split->right_rows, depth + 1);
        tree.nodes[id].feature = split->feature;
        tree.nodes[id].threshold = split->threshold;
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }
};

}  // namespace

TreeEnsemble train_ensemble(const Dataset& train, const GbdtConfig& config) {
    config.validate();
    if (train.examples.empty()) throw std::invalid_argument("train_ensemble: empty dataset");

    FeatureColumns columns(train);
    std::vector<double> margins(train.size(), config.base_score);
    std::vector<GradHessPair> grad(train.size());
    std::vector<std::int32_t> all_rows(train.size());
    std::iota(all_rows.begin(), all_rows.end(), 0);

    TreeEnsemble ensemble;
    ensemble.config = config;
    ensemble.task = train.task;
    ensemble.trees.reserve(static_cast<std::size_t>(config.num_trees));

    for (std::int32_t t = 0; t < config.num_trees; ++t) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            grad[i] = grad_hess(train.task, train.examples[i].label, margins[i]);
        }
        TreeBuilder builder{columns, grad, config, {}};
        builder.grow(all_rows, 0);
        Tree tree = std::move(builder.tree);
        for (std::size_t i = 0; i < train.size(); ++i) {
            margins[i] += config.eta * predict_tree(tree, train.examples[i]);
        }
        ensemble.trees.push_back(std::move(tree));
    }
    return ensemble;
}

double evaluate_ensemble(const TreeEnsemble& ensemble, const Dataset& data) {
    if (data.examples.empty()) throw std::invalid_argument("evaluate_ensemble: empty dataset");
    if (data.task != ensemble.task)
        throw std::invalid_argument("evaluate_ensemble: task mismatch");

    if (ensemble.task == TaskKind::classification) {
        std::size_t correct = 0;
        for (const auto& ex : data.examples) {
            double predicted = predict_margin(ensemble, ex) > 0.0 ? 1.0 : 0.0;
            if (predicted == ex.label) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(data.size());
    }
    double sum_sq = 0.0;
    for (const auto& ex : data.examples) {
        double diff = predict_margin(ensemble, ex) - ex.label;
        sum_sq += diff * diff;
    }
    return sum_sq / static_cast<double>(data.size());
}

}  // namespace fedboost
