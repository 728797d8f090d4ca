#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace leptovar::oracle {

struct VerifyConfig {
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    bool conjecture = false;
    std::size_t conjecture_trials = 500;
    std::size_t conjecture_max_n = 8;
    std::size_t conjecture_depth = 2;
};

struct CheckSummary {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::string first_counterexample; // empty when failures == 0
};

struct ConjectureSummary {
    std::size_t trials = 0;
    std::size_t max_n = 0;
    std::size_t depth = 0;
    std::uint64_t seed = 0;
    std::size_t counterexamples = 0;
    std::vector<std::string> examples; // first few, as "y=[...] greedy=... best=..."
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<CheckSummary> checks;
    ConjectureSummary conjecture;
    bool conjecture_run = false;

    bool passed() const;
};

// Randomized property checks of the greedy engine against the brute-force
// oracles:
//   split_equivalence     greedy scan picks the enumerated minimum
//   self_split_dominance  no feature's depth-1 MSE drop beats the target's own
//   sorted_partition      the exhaustive best bipartition is sorted and
//                         matches the depth-1 self split
//   greedy_vs_optimal     the DP optimum never loses to greedy; equal at depth 1
// Conjecture counterexamples are reported but never count as failures.
VerifyReport run_verification(const VerifyConfig& config);

} // namespace leptovar::oracle
