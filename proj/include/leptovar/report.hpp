#pragma once

#include "leptovar/dataset.hpp"
#include "leptovar/lepto.hpp"
#include "leptovar/tree.hpp"
#include "leptovar/verify.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace leptovar {

struct ExportNode {
    std::size_t id = 0;
    std::size_t depth = 0;
    std::size_t n_samples = 0;
    double sample_fraction = 0.0;
    double mean = 0.0;
    double mse = 0.0;
    std::optional<std::string> split_feature;
    std::optional<double> threshold;
    std::optional<std::size_t> left_id;
    std::optional<std::size_t> right_id;

    bool operator==(const ExportNode&) const = default;
};

struct TreeExport {
    std::size_t max_depth = 0;
    std::size_t n_samples = 0;
    std::vector<std::string> features;
    double residual_mse = 0.0;
    double average_leaf_depth = 0.0;
    std::vector<ExportNode> nodes;

    bool operator==(const TreeExport&) const = default;
};

TreeExport export_tree(const Tree& tree);

// Fixed key order, numbers at 17 significant digits: identical trees give
// byte-identical text.
std::string tree_to_json(const Tree& tree);
std::string tree_export_to_json(const TreeExport& ex);

// Throws std::invalid_argument on malformed input.
TreeExport tree_export_from_json(std::string_view json);

// Graphviz description, one box per node. Left edges are labelled "true".
std::string tree_to_dot(const Tree& tree);

// Indented outline of the tree plus residual and average depth.
std::string tree_to_text(const Tree& tree);

std::string analysis_to_text(const DecompositionProfile& profile,
                             const std::vector<FeatureSetResult>& results);
std::string analysis_to_json(const DecompositionProfile& profile,
                             const std::vector<FeatureSetResult>& results);

std::string describe_to_text(const std::vector<ColumnSummary>& stats,
                             const std::optional<CorrelationMatrix>& corr);
std::string describe_to_json(const std::vector<ColumnSummary>& stats,
                             const std::optional<CorrelationMatrix>& corr);

std::string verify_to_text(const oracle::VerifyReport& report);
std::string verify_to_json(const oracle::VerifyReport& report);

// "70.94%"
std::string format_percent(double fraction);

} // namespace leptovar
