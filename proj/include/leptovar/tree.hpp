#pragma once

#include "leptovar/dataset.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leptovar {

// Population (divide-by-n) mean and MSE.
struct NodeStats {
    double mean = 0.0;
    double mse = 0.0;
};

// Sums in ascending value order, so the result does not depend on the order
// the values arrive in. Throws std::invalid_argument on empty input.
NodeStats node_stats(std::span<const double> values);

struct SplitCandidate {
    std::size_t feature_index = 0;
    double threshold = 0.0;     // rows with x < threshold go left
    std::size_t left_count = 0;
    double weighted_children_mse = 0.0;
    double mse_drop = 0.0;
};

// Optimal least-squares split of y on a single feature x. Boundaries lie
// between adjacent distinct sorted x values; the threshold is their midpoint.
// Returns nullopt when x is constant or no boundary leaves min_leaf samples
// on both sides. Equal weighted MSE resolves to the lower threshold.
std::optional<SplitCandidate> best_split_for_feature(std::span<const double> x,
                                                     std::span<const double> y,
                                                     std::size_t min_leaf = 1);

struct SplitOptions {
    std::size_t min_leaf = 1;
    // Worker threads for the per-feature scan. 0 or 1 means sequential.
    unsigned threads = 1;
};

// Best split over all features restricted to `samples`. Ties resolve by
// lower weighted MSE, then lower feature index, then lower threshold.
std::optional<SplitCandidate> best_split(std::span<const std::size_t> samples,
                                         const FeatureView& features,
                                         std::span<const double> y,
                                         const SplitOptions& options = {});

struct Node {
    std::size_t id = 0;
    std::size_t depth = 0;
    std::vector<std::size_t> samples; // row indices, ascending
    double mean = 0.0;
    double mse = 0.0;
    std::optional<SplitCandidate> split;
    std::optional<std::size_t> left;  // child ids
    std::optional<std::size_t> right;

    bool is_leaf() const noexcept { return !split.has_value(); }
};

// Fitted regression tree. Nodes are stored in breadth-first order, so a
// node's id is its index in nodes().
class Tree {
public:
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& root() const { return nodes_.front(); }
    const Node& node(std::size_t id) const { return nodes_.at(id); }

    std::size_t max_depth() const noexcept { return max_depth_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    std::size_t n_samples() const noexcept { return root().samples.size(); }

    double total_mse() const noexcept { return nodes_.front().mse; }
    double residual_mse() const noexcept { return residual_mse_; }
    double average_leaf_depth() const noexcept { return average_leaf_depth_; }

    std::vector<const Node*> leaves() const;

    // Rebuilds a tree from nodes already in breadth-first order; recomputes
    // the residual and average depth. Used by fitting and deserialization.
    static Tree from_nodes(std::vector<Node> nodes, std::size_t max_depth,
                           std::vector<std::string> feature_names);

private:
    std::vector<Node> nodes_;
    std::size_t max_depth_ = 0;
    std::vector<std::string> feature_names_;
    double residual_mse_ = 0.0;
    double average_leaf_depth_ = 0.0;
};

struct FitOptions {
    std::size_t max_depth = 1;
    std::size_t min_leaf = 1;
    unsigned threads = 1;
};

// Greedy recursive least-squares growth. A node stays a leaf at max_depth,
// when its MSE is zero, or when no admissible split exists.
Tree fit(std::span<const double> y, const FeatureView& features, const FitOptions& options);

// Looks the columns up by name. Throws DataError for unknown names.
Tree fit(const Dataset& ds, std::string_view target, const std::vector<std::string>& features,
         std::size_t max_depth, std::size_t min_leaf = 1);

// Regresses y on itself; the single feature is named `name`.
Tree fit_self(std::span<const double> y, std::size_t max_depth, std::string name = "y");

// Leaf mean reached by routing `row` (one value per tree feature, in
// feature_names() order). Throws std::invalid_argument if the row is too
// short for a feature the tree splits on.
double predict(const Tree& tree, std::span<const double> row);

// Sample-weighted mean depth of the leaves.
double average_leaf_depth(const Tree& tree);

} // namespace leptovar
