#include "leptovar/reproduce.hpp"

#include "leptovar/builtin.hpp"
#include "leptovar/lepto.hpp"
#include "leptovar/oracle.hpp"
#include "leptovar/report.hpp"
#include "leptovar/tree.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace leptovar {

namespace {

// Reference values show three decimals; exact binary fractions are held to
// 1e-9.
constexpr double kDisplayed = 5e-4;
constexpr double kExact = 1e-9;
constexpr double kPercentPoint = 1e-4; // 0.01 percentage points

struct SplitExpectation {
    const char* feature;
    double threshold;
    double weighted_mse;
    double weighted_tol;
    double info_gain;
};

constexpr SplitExpectation kDepthOne[] = {
    {"t", 5.5, 1.896, kDisplayed, 0.4023},
    {"f1", 4.9, 1.421, kDisplayed, 0.5521},
    {"f2", 4.5, 1.609, kDisplayed, 0.4926},
    {"y", 0.5, 0.921875, kExact, 0.7094},
};

struct DepthTwoExpectation {
    std::vector<std::string> features;
    double residual;
    double tol;
};

} // namespace

bool ReferenceCheck::passed() const { return std::abs(value - expected) <= tolerance; }

bool ReferenceReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ReferenceCheck& c) { return c.passed(); });
}

ReferenceReport reproduce_reference_results() {
    const Dataset panel = builtin::eight_day_panel();
    const auto y = panel.column("y");
    ReferenceReport r;
    r.total_variance = node_stats(y).mse;
    r.checks.push_back({"total variance", r.total_variance, 3.171875, kExact});

    for (const auto& e : kDepthOne) {
        const auto split = best_split_for_feature(panel.column(e.feature), y);
        SplitSummary s{e.feature, split->threshold, split->weighted_children_mse,
                       split->mse_drop / r.total_variance};
        r.checks.push_back({fmt::format("depth-1 {} threshold", e.feature), s.threshold,
                            e.threshold, 0.0});
        r.checks.push_back({fmt::format("depth-1 {} weighted mse", e.feature), s.weighted_mse,
                            e.weighted_mse, e.weighted_tol});
        r.checks.push_back({fmt::format("depth-1 {} info gain", e.feature), s.info_gain,
                            e.info_gain, kPercentPoint});
        r.depth_one.push_back(std::move(s));
    }

    // The f1+f2 residual is quoted as 0.348875, which is arithmetic on
    // rounded leaf MSEs; the exact value is 67/192. Held to display tolerance.
    const std::vector<DepthTwoExpectation> depth_two = {
        {{"f2"}, 0.70833, 5e-5},
        {{"f1"}, 0.60, 5e-3},
        {{"f1", "f2"}, 0.348875, kDisplayed},
    };
    for (const auto& e : depth_two) {
        const Tree t = fit(panel, "y", e.features, 2);
        const std::string label = fmt::format("{}", fmt::join(e.features, "+"));
        r.depth_two.push_back({label, t.residual_mse()});
        r.checks.push_back({fmt::format("depth-2 {} residual", label), t.residual_mse(),
                            e.residual, e.tol});
    }
    const double self2 = lepto_variance(y, 2);
    r.depth_two.push_back({"y (self)", self2});
    r.checks.push_back({"depth-2 self residual", self2, 0.125, kExact});
    r.macro_depth_two = macro_variance(y, 2);
    r.checks.push_back({"depth-2 macro-variance", r.macro_depth_two, 3.046875, kExact});

    const auto four = builtin::four_point_sample();
    const Tree greedy = fit_self(four, 2);
    r.four_point_greedy = greedy.residual_mse();
    r.four_point_avg_depth = greedy.average_leaf_depth();
    r.four_point_optimal = oracle::optimal_tree_brute(four, 2).residual_mse;
    r.checks.push_back({"four-point greedy residual", r.four_point_greedy, 0.125, kExact});
    r.checks.push_back({"four-point average leaf depth", r.four_point_avg_depth, 1.75, kExact});
    r.checks.push_back({"four-point optimal residual", r.four_point_optimal, 0.0, kExact});
    return r;
}

std::string reference_to_text(const ReferenceReport& r) {
    std::string out = fmt::format("eight-day panel, target y: total variance {:.6f}\n\n",
                                  r.total_variance);
    out += "depth-1 trees\n";
    for (const auto& s : r.depth_one) {
        out += fmt::format("  {:<3} < {:<5} weighted mse {:.6f}  info gain {}\n", s.feature,
                           fmt::format("{:g}", s.threshold), s.weighted_mse,
                           format_percent(s.info_gain));
    }
    out += "\ndepth-2 trees\n";
    for (const auto& s : r.depth_two) {
        out += fmt::format("  {:<9} residual mse {:.6f}\n", s.features, s.residual_mse);
    }
    out += fmt::format("  2-bit macro-variance {:.6f}\n", r.macro_depth_two);
    out += fmt::format("\nfour-point sample {{0, -2, 4, 1}}, depth 2: greedy {:.3f} / optimal "
                       "{:.3f} (greedy average leaf depth {:.2f})\n",
                       r.four_point_greedy, r.four_point_optimal, r.four_point_avg_depth);

    out += "\nchecks\n";
    for (const auto& c : r.checks) {
        out += fmt::format("  {:<4} {:<32} {:.9g} (expected {:.9g} +/- {:g})\n",
                           c.passed() ? "ok" : "FAIL", c.name, c.value, c.expected, c.tolerance);
    }
    out += r.passed() ? "all reference values reproduced\n" : "reference reproduction FAILED\n";
    return out;
}

std::string reference_to_json(const ReferenceReport& r) {
    nlohmann::ordered_json doc;
    doc["total_variance"] = r.total_variance;
    for (const auto& s : r.depth_one) {
        doc["depth_one"].push_back({{"feature", s.feature},
                                    {"threshold", s.threshold},
                                    {"weighted_mse", s.weighted_mse},
                                    {"info_gain", s.info_gain}});
    }
    for (const auto& s : r.depth_two) {
        doc["depth_two"].push_back({{"features", s.features}, {"residual_mse", s.residual_mse}});
    }
    doc["macro_depth_two"] = r.macro_depth_two;
    doc["four_point"] = {{"greedy_residual", r.four_point_greedy},
                         {"greedy_average_leaf_depth", r.four_point_avg_depth},
                         {"optimal_residual", r.four_point_optimal}};
    for (const auto& c : r.checks) {
        doc["checks"].push_back({{"name", c.name},
                                 {"value", c.value},
                                 {"expected", c.expected},
                                 {"tolerance", c.tolerance},
                                 {"passed", c.passed()}});
    }
    doc["passed"] = r.passed();
    return doc.dump(2) + "\n";
}

} // namespace leptovar
