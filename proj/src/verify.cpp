#include "leptovar/verify.hpp"

#include "leptovar/oracle.hpp"
#include "leptovar/random.hpp"
#include "leptovar/tree.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace leptovar::oracle {

namespace {

constexpr double kRelTol = 1e-12;
constexpr std::size_t kMaxConjectureExamples = 5;

enum class Shape { Uniform, HeavyTailed, SmallIntegers };

std::vector<double> draw(Rng& rng, std::size_t n, Shape shape) {
    std::vector<double> v(n);
    for (auto& x : v) {
        switch (shape) {
        case Shape::Uniform: x = rng.uniform(-5.0, 5.0); break;
        case Shape::HeavyTailed: x = rng.heavy_tailed(); break;
        case Shape::SmallIntegers: x = static_cast<double>(rng.integer(0, 5)); break;
        }
    }
    return v;
}

Shape continuous_shape(Rng& rng) {
    return rng.integer(0, 1) == 0 ? Shape::Uniform : Shape::HeavyTailed;
}

std::string show(const std::vector<double>& v) {
    std::vector<std::string> parts;
    parts.reserve(v.size());
    for (double x : v) parts.push_back(fmt::format("{:.17g}", x));
    return fmt::format("[{}]", fmt::join(parts, ", "));
}

double scale_of(const std::vector<double>& y) {
    return std::max(direct_sse(y) / static_cast<double>(y.size()), 1e-300);
}

// Runs `trial` `trials` times; a non-empty return is a counterexample.
CheckSummary run_check(std::string name, std::size_t trials, std::uint64_t seed,
                       const std::function<std::string(Rng&)>& trial) {
    CheckSummary summary;
    summary.name = std::move(name);
    summary.trials = trials;
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        std::string failure = trial(rng);
        if (!failure.empty()) {
            if (summary.failures == 0) summary.first_counterexample = std::move(failure);
            ++summary.failures;
        }
    }
    return summary;
}

std::string split_equivalence_trial(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 50));
    const Shape x_shape = rng.integer(0, 2) == 0 ? Shape::SmallIntegers : continuous_shape(rng);
    const auto x = draw(rng, n, x_shape);
    const auto y = draw(rng, n, continuous_shape(rng));

    const auto fast = best_split_for_feature(x, y);
    const auto all = enumerate_splits(x, y);
    if (all.empty() || !fast) {
        if (all.empty() == !fast) return {};
        return fmt::format("presence differs: x={} y={}", show(x), show(y));
    }
    const auto slow = std::min_element(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.weighted_children_mse < b.weighted_children_mse;
    });
    const double tol = kRelTol * scale_of(y);
    if (fast->threshold != slow->threshold || fast->left_count != slow->left_count ||
        std::abs(fast->weighted_children_mse - slow->weighted_children_mse) > tol) {
        return fmt::format("x={} y={} greedy=({:.17g}, {:.17g}) enumerated=({:.17g}, {:.17g})",
                           show(x), show(y), fast->threshold, fast->weighted_children_mse,
                           slow->threshold, slow->weighted_children_mse);
    }
    return {};
}

std::string dominance_trial(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 50));
    const auto y = draw(rng, n, continuous_shape(rng));
    const Shape x_shape = rng.integer(0, 2) == 0 ? Shape::SmallIntegers : continuous_shape(rng);
    const auto x = draw(rng, n, x_shape);

    const auto by_x = best_split_for_feature(x, y);
    const auto by_self = best_split_for_feature(y, y);
    const double drop_x = by_x ? by_x->mse_drop : 0.0;
    const double drop_self = by_self ? by_self->mse_drop : 0.0;
    if (drop_x > drop_self + kRelTol * scale_of(y)) {
        return fmt::format("x={} y={} drop(x)={:.17g} drop(y)={:.17g}", show(x), show(y), drop_x,
                           drop_self);
    }
    return {};
}

std::string sorted_partition_trial(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 12));
    const auto y = draw(rng, n, continuous_shape(rng));
    const auto brute = best_partition_brute(y);
    const auto self = best_split_for_feature(y, y);
    const double self_mse = self ? self->weighted_children_mse : direct_sse(y) / static_cast<double>(n);
    const double tol = kRelTol * scale_of(y);
    if (!brute.is_sorted) {
        return fmt::format("y={} best bipartition is unsorted", show(y));
    }
    if (self_mse > brute.weighted_mse + tol || brute.weighted_mse > self_mse + tol) {
        return fmt::format("y={} brute={:.17g} self={:.17g}", show(y), brute.weighted_mse,
                           self_mse);
    }
    return {};
}

std::string greedy_vs_optimal_trial(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 40));
    const auto k = static_cast<std::size_t>(rng.integer(1, 4));
    const auto y = draw(rng, n, continuous_shape(rng));
    const double greedy = fit_self(y, k).residual_mse();
    const double optimal = optimal_tree_brute(y, k).residual_mse;
    const double tol = kRelTol * scale_of(y);
    if (optimal > greedy + tol || (k == 1 && std::abs(optimal - greedy) > tol)) {
        return fmt::format("y={} k={} optimal={:.17g} greedy={:.17g}", show(y), k, optimal,
                           greedy);
    }
    return {};
}

} // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckSummary& c) { return c.failures == 0; });
}

VerifyReport run_verification(const VerifyConfig& config) {
    VerifyReport report;
    report.seed = config.seed;
    // Each check draws from its own stream so adding trials to one does not
    // shift another.
    report.checks.push_back(
        run_check("split_equivalence", config.trials, config.seed, split_equivalence_trial));
    report.checks.push_back(
        run_check("self_split_dominance", config.trials, config.seed + 1, dominance_trial));
    report.checks.push_back(
        run_check("sorted_partition", config.trials, config.seed + 2, sorted_partition_trial));
    report.checks.push_back(
        run_check("greedy_vs_optimal", config.trials, config.seed + 3, greedy_vs_optimal_trial));

    if (config.conjecture) {
        report.conjecture_run = true;
        auto& c = report.conjecture;
        c.trials = config.conjecture_trials;
        c.max_n = config.conjecture_max_n;
        c.depth = config.conjecture_depth;
        c.seed = config.seed;
        Rng rng(config.seed + 4);
        for (std::size_t t = 0; t < c.trials; ++t) {
            const auto n = static_cast<std::size_t>(
                rng.integer(1, static_cast<std::int64_t>(std::max<std::size_t>(c.max_n, 1))));
            std::vector<double> y(n);
            for (auto& v : y) v = static_cast<double>(rng.integer(-2, 4));
            const auto r = check_conjecture(y, c.depth);
            if (!r.holds) {
                ++c.counterexamples;
                if (c.examples.size() < kMaxConjectureExamples) {
                    c.examples.push_back(fmt::format(
                        "y={} greedy_rss={:.17g} greedy_avg_depth={:.17g} best_rss={:.17g}",
                        show(y), r.greedy_rss, r.greedy_avg_depth, r.min_rss_at_same_avg_depth));
                }
            }
        }
    }
    return report;
}

} // namespace leptovar::oracle
