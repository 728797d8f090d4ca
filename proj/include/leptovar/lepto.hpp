#pragma once

#include "leptovar/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leptovar {

// k-bit lepto-variance: the residual MSE of the depth-k greedy regression
// tree of y on itself. k = 0 gives the population variance.
double lepto_variance(std::span<const double> y, std::size_t k);

// sigma^2 - lepto_variance(y, k): the most any depth-k tree can explain.
double macro_variance(std::span<const double> y, std::size_t k);

struct DepthRecord {
    std::size_t k = 0;
    double lepto = 0.0;
    double macro = 0.0;
    double macro_fraction = 0.0;     // macro / sigma^2, 0 for a constant target
    double average_leaf_depth = 0.0; // of the self tree; below k when greedy stopped early
};

struct DecompositionProfile {
    double total_variance = 0.0;
    std::vector<DepthRecord> rows; // k = 0 .. k_max
};

DecompositionProfile decompose(std::span<const double> y, std::size_t k_max);

struct FeatureSetResult {
    std::vector<std::string> feature_names;
    std::size_t depth = 0;
    double residual_mse = 0.0;
    double explained = 0.0;                // sigma^2 - residual
    double macro_fraction_explained = 0.0; // explained / mu_k^2
    double average_leaf_depth = 0.0;
    // Set when the fraction exceeded 1 by more than 1e-9: the feature tree
    // beat the greedy self tree.
    bool exceeds_macro = false;
};

// Fits one depth-k tree per feature set and expresses its explained variance
// as a fraction of the target's k-bit macro-variance. Throws DataError for
// unknown names or a constant target.
std::vector<FeatureSetResult> feature_set_analysis(
    const Dataset& ds, std::string_view target,
    const std::vector<std::vector<std::string>>& feature_sets, std::size_t k,
    std::size_t min_leaf = 1);

} // namespace leptovar
