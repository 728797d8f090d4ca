#pragma once

#include "leptovar/tree.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

// Brute-force reference implementations. Each recomputes sums of squares
// directly, without the running statistics the greedy scan uses, so the two
// routes can check each other.
namespace leptovar::oracle {

// Sum of squared deviations by two-pass summation.
double direct_sse(std::span<const double> values);

// Every admissible boundary between adjacent distinct sorted x values, in
// ascending threshold order.
std::vector<SplitCandidate> enumerate_splits(std::span<const double> x,
                                             std::span<const double> y);

struct PartitionResult {
    std::vector<std::size_t> left; // ascending indices; left has the lower mean
    std::vector<std::size_t> right;
    double weighted_mse = 0.0;
    bool is_sorted = false;        // max(left values) < min(right values)
};

// Evaluates a given bipartition directly. The side with the lower mean is
// reported as left.
PartitionResult evaluate_partition(std::span<const double> y, std::vector<std::size_t> side);

inline constexpr std::size_t kMaxBrutePartition = 20;

// Exhaustive search over all 2^(n-1) - 1 bipartitions. Ties go to the
// lexicographically smaller left index set. Throws BoundsError unless
// 2 <= n <= 20.
PartitionResult best_partition_brute(std::span<const double> y);

struct OptimalTree {
    double residual_mse = 0.0;
    std::vector<double> sorted_values;
    // Half-open ranges into sorted_values, left to right.
    std::vector<std::pair<std::size_t, std::size_t>> leaves;
};

inline constexpr std::size_t kMaxOptimalN = 500;
inline constexpr std::size_t kMaxOptimalDepth = 4;

// Minimum residual MSE over all hierarchical trees of depth <= k whose
// leaves are contiguous runs of the sorted target. Dynamic programming over
// (segment, remaining depth). Throws BoundsError when n > 500, k > 4 or y
// is empty.
OptimalTree optimal_tree_brute(std::span<const double> y, std::size_t k);

struct ConjectureReport {
    std::size_t n = 0;
    std::size_t depth = 0;
    double greedy_rss = 0.0;
    double greedy_avg_depth = 0.0;
    // Lowest RSS among contiguous trees of max depth <= k whose average
    // leaf depth does not exceed the greedy tree's.
    double min_rss_at_same_avg_depth = 0.0;
    bool holds = true;
};

inline constexpr std::size_t kMaxConjectureN = 16;
inline constexpr std::size_t kMaxConjectureDepth = 3;

// Compares the greedy self tree with every contiguous hierarchical tree of
// max depth k. A counterexample needs an RSS lower by more than
// 1e-9 * (1 + total SSE). Throws BoundsError unless 1 <= n <= 16 and
// 1 <= k <= 3.
ConjectureReport check_conjecture(std::span<const double> y, std::size_t k);

} // namespace leptovar::oracle
