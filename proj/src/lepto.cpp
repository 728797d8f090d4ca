#include "leptovar/lepto.hpp"

#include "leptovar/error.hpp"
#include "leptovar/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace leptovar {

namespace {

constexpr double kMacroSlack = 1e-9;

void require_nonempty(std::span<const double> y) {
    if (y.empty()) throw DataError("empty target");
}

} // namespace

double lepto_variance(std::span<const double> y, std::size_t k) {
    require_nonempty(y);
    if (k == 0) return node_stats(y).mse;
    return fit_self(y, k).residual_mse();
}

double macro_variance(std::span<const double> y, std::size_t k) {
    require_nonempty(y);
    return node_stats(y).mse - lepto_variance(y, k);
}

DecompositionProfile decompose(std::span<const double> y, std::size_t k_max) {
    require_nonempty(y);
    DecompositionProfile profile;
    profile.total_variance = node_stats(y).mse;
    const double sigma2 = profile.total_variance;

    profile.rows.push_back({0, sigma2, 0.0, 0.0, 0.0});
    for (std::size_t k = 1; k <= k_max; ++k) {
        const Tree self = fit_self(y, k);
        DepthRecord r;
        r.k = k;
        r.lepto = self.residual_mse();
        r.macro = sigma2 - r.lepto;
        r.macro_fraction = sigma2 > 0.0 ? r.macro / sigma2 : 0.0;
        r.average_leaf_depth = self.average_leaf_depth();
        profile.rows.push_back(r);
    }
    return profile;
}

std::vector<FeatureSetResult> feature_set_analysis(
    const Dataset& ds, std::string_view target,
    const std::vector<std::vector<std::string>>& feature_sets, std::size_t k,
    std::size_t min_leaf) {
    if (k < 1) throw std::invalid_argument("depth must be >= 1");
    const auto y = ds.column(target);
    // Validate every name up front so no work is done on a bad request.
    for (const auto& set : feature_sets) select(ds, target, set);

    const double sigma2 = node_stats(y).mse;
    if (!(sigma2 > 0.0)) {
        throw DataError("degenerate target: zero variance");
    }
    const double macro = sigma2 - lepto_variance(y, k);

    std::vector<FeatureSetResult> results;
    results.reserve(feature_sets.size());
    for (const auto& set : feature_sets) {
        const Tree t = fit(ds, target, set, k, min_leaf);
        FeatureSetResult r;
        r.feature_names = set;
        r.depth = k;
        r.residual_mse = t.residual_mse();
        r.explained = sigma2 - r.residual_mse;
        r.average_leaf_depth = t.average_leaf_depth();
        double frac = macro > 0.0 ? r.explained / macro : 0.0;
        if (frac > 1.0 + kMacroSlack) {
            r.exceeds_macro = true;
        } else if (frac > 1.0) {
            frac = 1.0;
        }
        r.macro_fraction_explained = frac;
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace leptovar
