#pragma once

#include <string>
#include <vector>

namespace leptovar {

// One recomputed quantity compared with its reference value.
struct ReferenceCheck {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;

    bool passed() const;
};

struct SplitSummary {
    std::string feature;
    double threshold = 0.0;
    double weighted_mse = 0.0;
    double info_gain = 0.0; // fraction of total variance removed
};

struct DepthTwoSummary {
    std::string features;
    double residual_mse = 0.0;
};

struct ReferenceReport {
    double total_variance = 0.0;
    std::vector<SplitSummary> depth_one;
    std::vector<DepthTwoSummary> depth_two;
    double macro_depth_two = 0.0;
    double four_point_greedy = 0.0;
    double four_point_avg_depth = 0.0;
    double four_point_optimal = 0.0;
    std::vector<ReferenceCheck> checks;

    bool passed() const;
};

// Recomputes the worked eight-day example and the four-point greedy example
// from the embedded data.
ReferenceReport reproduce_reference_results();

std::string reference_to_text(const ReferenceReport& report);
std::string reference_to_json(const ReferenceReport& report);

} // namespace leptovar
