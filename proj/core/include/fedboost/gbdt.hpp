#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedboost/dataset.hpp"

namespace fedboost {

struct GbdtConfig {
    std::int32_t num_trees = 1;       // M
    std::int32_t max_depth = 8;       // L, a leaf's depth never exceeds this
    double eta = 0.1;                 // shrinkage applied when summing tree outputs
    double lambda = 1.0;              // leaf-weight regularizer
    double gamma = 0.0;               // per-leaf gain penalty
    double min_child_weight = 1.0;    // minimum hessian sum of each child
    double base_score = 0.5;          // initial margin

    /// max_depth 8 and eta 0.1, remaining knobs at the usual boosted-tree
    /// defaults. base_score is 0.5 for regression and a zero margin
    /// (probability 0.5) for classification.
    static GbdtConfig defaults(TaskKind task);

    void validate() const;  // throws std::invalid_argument

    bool operator==(const GbdtConfig&) const = default;
};

struct GradHessPair {
    double g = 0.0;
    double h = 0.0;
};

/// First- and second-order derivatives of the loss at the given margin.
/// Regression uses squared error (g = margin - y, h = 1), classification
/// logistic loss on the raw margin (g = sigmoid(margin) - y).
GradHessPair grad_hess(TaskKind task, double label, double margin);

struct SplitStats {
    double g_sum = 0.0;
    double h_sum = 0.0;
    std::int64_t count = 0;

    void add(const GradHessPair& gh) {
        g_sum += gh.g;
        h_sum += gh.h;
        ++count;
    }
};

/// Optimal leaf weight -G / (H + lambda). Throws std::invalid_argument when
/// H + lambda <= 0.
double leaf_weight(const SplitStats& stats, double lambda);

/// Gain of splitting a node into (left, right):
///   1/2 [ GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l) ] - gamma.
/// Throws std::invalid_argument when any denominator is <= 0.
double split_gain(const SplitStats& left, const SplitStats& right, double lambda, double gamma);

/// Nodes are stored flat; nodes[0] is the root. feature == 0 marks a leaf.
/// Feature indices are 1-based. Routing is value < threshold -> left.
struct TreeNode {
    std::int32_t feature = 0;
    double threshold = 0.0;
    double weight = 0.0;   // leaf payload, unscaled by eta
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool is_leaf() const { return feature == 0; }

    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::int32_t leaf_count = 0;

    bool operator==(const Tree&) const = default;
};

/// Raw per-tree output for one example (leaf weight, no eta).
double predict_tree(const Tree& tree, const SparseExample& x);

struct TreeEnsemble {
    std::vector<Tree> trees;  // trees[t] is the (t+1)-th boosting stage
    GbdtConfig config;
    TaskKind task = TaskKind::regression;

    bool operator==(const TreeEnsemble&) const = default;
};

/// base_score + eta * sum of per-tree outputs.
double predict_margin(const TreeEnsemble& ensemble, const SparseExample& x);

/// Dense column-major view of a sparse dataset, used by the exact greedy
/// search. Absent entries are materialized as 0.0.
class FeatureColumns {
public:
    explicit FeatureColumns(const Dataset& ds);

    std::int32_t num_features() const { return num_features_; }
    std::size_t num_rows() const { return num_rows_; }

    /// Value of 1-based feature j for a row.
    double at(std::size_t row, std::int32_t feature) const {
        return columns_[static_cast<std::size_t>(feature - 1) * num_rows_ + row];
    }

private:
    std::size_t num_rows_ = 0;
    std::int32_t num_features_ = 0;
    std::vector<double> columns_;
};

struct SplitCandidate {
    std::int32_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
    std::vector<std::int32_t> left_rows;
    std::vector<std::int32_t> right_rows;
};

/// Exact greedy search: every feature, every boundary between distinct
/// consecutive sorted values, threshold at the midpoint. Returns the
/// highest-gain candidate, ties broken by lowest feature then lowest
/// threshold. Candidates whose children violate min_child_weight (or whose
/// denominators degenerate) are skipped; returns nullopt when no candidate
/// has positive gain.
std::optional<SplitCandidate> find_best_split(const std::vector<std::int32_t>& rows,
                                              const FeatureColumns& columns,
                                              const std::vector<GradHessPair>& grad,
                                              double lambda, double gamma,
                                              double min_child_weight);

/// Forward stagewise training: per tree, gradients at the current margins,
/// greedy growth to max_depth while a positive-gain split exists, leaf
/// weights -G/(H+lambda), then margin += eta * tree output. Deterministic,
/// no subsampling.
TreeEnsemble train_ensemble(const Dataset& train, const GbdtConfig& config);

/// Accuracy (margin > 0 vs. label) for classification, mean squared error
/// of the margin for regression.
double evaluate_ensemble(const TreeEnsemble& ensemble, const Dataset& data);

/// Canonical text serialization: nested node records plus a header with the
/// config, task, and format version. Byte-exact round-trips: deserializing
/// and re-serializing reproduces the input bytes.
std::string serialize_ensemble(const TreeEnsemble& ensemble);

/// Throws decode_error on malformed or truncated input.
TreeEnsemble deserialize_ensemble(std::string_view bytes);

}  // namespace fedboost
