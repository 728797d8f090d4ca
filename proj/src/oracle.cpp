#include "leptovar/oracle.hpp"

#include "leptovar/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace leptovar::oracle {

double direct_sse(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sse = 0.0;
    for (double v : values) sse += (v - mean) * (v - mean);
    return sse;
}

std::vector<SplitCandidate> enumerate_splits(std::span<const double> x,
                                             std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument(
            fmt::format("feature has {} values but target has {}", x.size(), y.size()));
    }
    const std::size_t n = x.size();
    const std::set<double> distinct(x.begin(), x.end());
    const double node_mse = direct_sse(y) / static_cast<double>(n);

    std::vector<SplitCandidate> out;
    std::vector<double> left, right;
    for (auto it = distinct.begin(); it != distinct.end() && std::next(it) != distinct.end(); ++it) {
        const double a = *it;
        const double b = *std::next(it);
        double threshold = (a + b) / 2.0;
        if (!std::isfinite(threshold)) threshold = a / 2.0 + b / 2.0;
        if (!(threshold > a) || !(threshold < b)) threshold = b;

        left.clear();
        right.clear();
        for (std::size_t i = 0; i < n; ++i) (x[i] < threshold ? left : right).push_back(y[i]);
        const double wmse = (direct_sse(left) + direct_sse(right)) / static_cast<double>(n);
        out.push_back(SplitCandidate{0, threshold, left.size(), wmse,
                                     std::max(0.0, node_mse - wmse)});
    }
    return out;
}

PartitionResult evaluate_partition(std::span<const double> y, std::vector<std::size_t> side) {
    const std::size_t n = y.size();
    std::vector<bool> in_side(n, false);
    for (std::size_t i : side) {
        if (i >= n) throw std::out_of_range("partition index out of range");
        in_side[i] = true;
    }
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n; ++i) (in_side[i] ? a : b).push_back(i);
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("partition sides must be non-empty");
    }

    auto values = [&](const std::vector<std::size_t>& idx) {
        std::vector<double> v;
        v.reserve(idx.size());
        for (std::size_t i : idx) v.push_back(y[i]);
        return v;
    };
    const auto va = values(a);
    const auto vb = values(b);
    const double mean_a = std::accumulate(va.begin(), va.end(), 0.0) / static_cast<double>(va.size());
    const double mean_b = std::accumulate(vb.begin(), vb.end(), 0.0) / static_cast<double>(vb.size());

    PartitionResult r;
    const bool a_left = mean_a < mean_b || (mean_a == mean_b && a < b);
    r.left = a_left ? a : b;
    r.right = a_left ? b : a;
    r.weighted_mse = (direct_sse(va) + direct_sse(vb)) / static_cast<double>(n);

    double max_left = -std::numeric_limits<double>::infinity();
    double min_right = std::numeric_limits<double>::infinity();
    for (std::size_t i : r.left) max_left = std::max(max_left, y[i]);
    for (std::size_t i : r.right) min_right = std::min(min_right, y[i]);
    r.is_sorted = max_left < min_right;
    return r;
}

PartitionResult best_partition_brute(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2 || n > kMaxBrutePartition) {
        throw BoundsError(fmt::format("best_partition_brute needs 2 <= n <= {}, got {}",
                                      kMaxBrutePartition, n));
    }
    // Element n-1 always sits in the complement, so each unordered
    // bipartition is visited once.
    const std::uint32_t limit = 1u << (n - 1);
    std::optional<PartitionResult> best;
    std::vector<std::size_t> side;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        double sum_a = 0.0, sum_b = 0.0;
        std::size_t count_a = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) {
                sum_a += y[i];
                ++count_a;
            } else {
                sum_b += y[i];
            }
        }
        const double mean_a = sum_a / static_cast<double>(count_a);
        const double mean_b = sum_b / static_cast<double>(n - count_a);
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - ((mask >> i & 1u) ? mean_a : mean_b);
            sse += d * d;
        }
        const double wmse = sse / static_cast<double>(n);
        if (best && wmse > best->weighted_mse) continue;

        side.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) side.push_back(i);
        }
        PartitionResult cand = evaluate_partition(y, side);
        cand.weighted_mse = wmse;
        if (!best || wmse < best->weighted_mse || cand.left < best->left) {
            best = std::move(cand);
        }
    }
    return *best;
}

namespace {

// sse[i * (n + 1) + j] holds the SSE of sorted[i, j).
std::vector<double> segment_sse_table(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    std::vector<double> table((n + 1) * (n + 1), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            table[i * (n + 1) + j] =
                direct_sse(std::span<const double>(sorted.data() + i, j - i));
        }
    }
    return table;
}

} // namespace

OptimalTree optimal_tree_brute(std::span<const double> y, std::size_t k) {
    const std::size_t n = y.size();
    if (n == 0 || n > kMaxOptimalN || k > kMaxOptimalDepth) {
        throw BoundsError(fmt::format(
            "optimal_tree_brute needs 1 <= n <= {} and k <= {}, got n = {}, k = {}",
            kMaxOptimalN, kMaxOptimalDepth, n, k));
    }
    OptimalTree result;
    result.sorted_values.assign(y.begin(), y.end());
    std::sort(result.sorted_values.begin(), result.sorted_values.end());
    const auto& sorted = result.sorted_values;

    const std::size_t w = n + 1;
    const auto sse = segment_sse_table(sorted);
    // best[d] is the optimum with d levels of splitting left; cut[d] records
    // the split point, or 0 for a leaf.
    std::vector<std::vector<double>> best(k + 1);
    std::vector<std::vector<std::size_t>> cut(k + 1, std::vector<std::size_t>(w * w, 0));
    best[0] = sse;
    for (std::size_t d = 1; d <= k; ++d) {
        best[d] = best[d - 1];
        for (std::size_t len = 2; len <= n; ++len) {
            for (std::size_t i = 0; i + len <= n; ++i) {
                const std::size_t j = i + len;
                double value = sse[i * w + j];
                std::size_t choice = 0;
                for (std::size_t m = i + 1; m < j; ++m) {
                    const double v = best[d - 1][i * w + m] + best[d - 1][m * w + j];
                    if (v < value) {
                        value = v;
                        choice = m;
                    }
                }
                best[d][i * w + j] = value;
                cut[d][i * w + j] = choice;
            }
        }
    }
    result.residual_mse = best[k][n] / static_cast<double>(n);

    auto collect = [&](auto&& self, std::size_t i, std::size_t j, std::size_t d) -> void {
        const std::size_t m = d > 0 ? cut[d][i * w + j] : 0;
        if (m == 0) {
            result.leaves.emplace_back(i, j);
            return;
        }
        self(self, i, m, d - 1);
        self(self, m, j, d - 1);
    };
    collect(collect, 0, n, k);
    return result;
}

ConjectureReport check_conjecture(std::span<const double> y, std::size_t k) {
    const std::size_t n = y.size();
    if (n == 0 || n > kMaxConjectureN || k < 1 || k > kMaxConjectureDepth) {
        throw BoundsError(fmt::format(
            "check_conjecture needs 1 <= n <= {} and 1 <= k <= {}, got n = {}, k = {}",
            kMaxConjectureN, kMaxConjectureDepth, n, k));
    }
    ConjectureReport report;
    report.n = n;
    report.depth = k;

    const Tree greedy = fit_self(y, k);
    report.greedy_rss = greedy.residual_mse() * static_cast<double>(n);
    report.greedy_avg_depth = greedy.average_leaf_depth();
    std::size_t greedy_depth_sum = 0;
    for (const Node* leaf : greedy.leaves()) greedy_depth_sum += leaf->samples.size() * leaf->depth;

    std::vector<double> sorted(y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t w = n + 1;
    const auto sse = segment_sse_table(sorted);
    constexpr double inf = std::numeric_limits<double>::infinity();

    // frontier[d][i*w+j][s]: lowest SSE of a tree over sorted[i, j) with at
    // most d further levels whose leaf depths, weighted by leaf size and
    // measured from the segment root, sum to s.
    using Frontier = std::vector<double>;
    std::vector<std::vector<Frontier>> frontier(k + 1, std::vector<Frontier>(w * w));
    for (std::size_t d = 0; d <= k; ++d) {
        for (std::size_t len = 1; len <= n; ++len) {
            for (std::size_t i = 0; i + len <= n; ++i) {
                const std::size_t j = i + len;
                Frontier f(len * d + 1, inf);
                f[0] = sse[i * w + j];
                if (d > 0) {
                    for (std::size_t m = i + 1; m < j; ++m) {
                        const Frontier& lf = frontier[d - 1][i * w + m];
                        const Frontier& rf = frontier[d - 1][m * w + j];
                        for (std::size_t a = 0; a < lf.size(); ++a) {
                            if (lf[a] == inf) continue;
                            for (std::size_t b = 0; b < rf.size(); ++b) {
                                if (rf[b] == inf) continue;
                                const std::size_t s = a + b + len;
                                f[s] = std::min(f[s], lf[a] + rf[b]);
                            }
                        }
                    }
                }
                frontier[d][i * w + j] = std::move(f);
            }
        }
    }

    const Frontier& all = frontier[k][n];
    double best = inf;
    for (std::size_t s = 0; s < all.size() && s <= greedy_depth_sum; ++s) best = std::min(best, all[s]);
    report.min_rss_at_same_avg_depth = best;
    const double tol = 1e-9 * (1.0 + sse[n]);
    report.holds = !(best < report.greedy_rss - tol);
    return report;
}

} // namespace leptovar::oracle
