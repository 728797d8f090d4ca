#include "leptovar/tree.hpp"

#include "leptovar/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

namespace leptovar {

NodeStats node_stats(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("node_stats of empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    // A constant sample is exactly pure; summation could leave a rounding residue.
    if (sorted.front() == sorted.back()) return {sorted.front(), 0.0};
    const double n = static_cast<double>(sorted.size());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double sse = 0.0;
    for (double v : sorted) sse += (v - mean) * (v - mean);
    return {mean, sse / n};
}

namespace {

double midpoint(double a, double b) {
    double mid = (a + b) / 2.0;
    if (!std::isfinite(mid)) mid = a / 2.0 + b / 2.0;
    // Adjacent doubles: the midpoint rounds onto an endpoint. b still routes
    // right and a still routes left.
    if (!(mid > a) || !(mid < b)) mid = b;
    return mid;
}

// Running mean and sum of squared deviations (Welford). Stays accurate when
// a segment sits next to values many orders of magnitude larger.
struct RunningSse {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double v) {
        count += 1.0;
        const double delta = v - mean;
        mean += delta / count;
        m2 += delta * (v - mean);
    }
};

} // namespace

std::optional<SplitCandidate> best_split_for_feature(std::span<const double> x,
                                                     std::span<const double> y,
                                                     std::size_t min_leaf) {
    if (x.size() != y.size()) {
        throw std::invalid_argument(
            fmt::format("feature has {} values but target has {}", x.size(), y.size()));
    }
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    min_leaf = std::max<std::size_t>(min_leaf, 1);

    std::vector<std::pair<double, double>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i]};
    std::sort(pts.begin(), pts.end());
    if (pts.front().first == pts.back().first) return std::nullopt;

    // Right-to-left pass leaves suffix[i] describing pts[i..n).
    std::vector<RunningSse> suffix(n + 1);
    for (std::size_t i = n; i-- > 0;) {
        suffix[i] = suffix[i + 1];
        suffix[i].push(pts[i].second);
    }
    const double node_mse = suffix[0].m2 / static_cast<double>(n);

    std::optional<SplitCandidate> best;
    RunningSse left;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        left.push(pts[i].second);
        if (pts[i].first == pts[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;

        const double sse = std::max(0.0, left.m2) + std::max(0.0, suffix[nl].m2);
        const double wmse = sse / static_cast<double>(n);
        if (!best || wmse < best->weighted_children_mse) {
            best = SplitCandidate{0, midpoint(pts[i].first, pts[i + 1].first), nl, wmse, 0.0};
        }
    }
    if (best) best->mse_drop = std::max(0.0, node_mse - best->weighted_children_mse);
    return best;
}

std::optional<SplitCandidate> best_split(std::span<const std::size_t> samples,
                                         const FeatureView& features,
                                         std::span<const double> y,
                                         const SplitOptions& options) {
    const std::size_t p = features.n_features();
    std::vector<double> ys(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) ys[i] = y[samples[i]];

    std::vector<std::optional<SplitCandidate>> per_feature(p);
    auto scan = [&](std::size_t f) {
        const auto col = features.feature(f);
        std::vector<double> xs(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) xs[i] = col[samples[i]];
        per_feature[f] = best_split_for_feature(xs, ys, options.min_leaf);
        if (per_feature[f]) per_feature[f]->feature_index = f;
    };

    const unsigned workers = std::min<unsigned>(std::max(options.threads, 1u),
                                                static_cast<unsigned>(p));
    if (workers <= 1) {
        for (std::size_t f = 0; f < p; ++f) scan(f);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t f = w; f < p; f += workers) scan(f);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Features are visited in index order and only a strictly lower MSE
    // replaces the incumbent.
    std::optional<SplitCandidate> best;
    for (const auto& cand : per_feature) {
        if (cand && (!best || cand->weighted_children_mse < best->weighted_children_mse)) {
            best = cand;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

std::vector<const Node*> Tree::leaves() const {
    std::vector<const Node*> out;
    for (const auto& n : nodes_) {
        if (n.is_leaf()) out.push_back(&n);
    }
    return out;
}

Tree Tree::from_nodes(std::vector<Node> nodes, std::size_t max_depth,
                      std::vector<std::string> feature_names) {
    if (nodes.empty()) {
        throw std::invalid_argument("tree needs at least a root node");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.id != i) {
            throw std::invalid_argument(fmt::format("node {} stored at position {}", n.id, i));
        }
        const bool has_children = n.left.has_value() && n.right.has_value();
        if (n.split.has_value() != has_children || n.left.has_value() != n.right.has_value()) {
            throw std::invalid_argument(fmt::format("node {} has a partial split", n.id));
        }
        if (has_children && (*n.left <= i || *n.right <= i || *n.left >= nodes.size() ||
                             *n.right >= nodes.size())) {
            throw std::invalid_argument(fmt::format("node {} has invalid children", n.id));
        }
    }

    Tree t;
    t.nodes_ = std::move(nodes);
    t.max_depth_ = max_depth;
    t.feature_names_ = std::move(feature_names);

    double sse = 0.0, depth_sum = 0.0;
    for (const auto& n : t.nodes_) {
        if (!n.is_leaf()) continue;
        const double count = static_cast<double>(n.samples.size());
        sse += count * n.mse;
        depth_sum += count * static_cast<double>(n.depth);
    }
    const double total = static_cast<double>(t.nodes_.front().samples.size());
    t.residual_mse_ = total > 0 ? sse / total : 0.0;
    t.average_leaf_depth_ = total > 0 ? depth_sum / total : 0.0;
    return t;
}

Tree fit(std::span<const double> y, const FeatureView& features, const FitOptions& options) {
    if (y.empty()) {
        throw DataError("empty target");
    }
    if (options.max_depth < 1) {
        throw std::invalid_argument("depth must be >= 1");
    }
    if (options.min_leaf < 1) {
        throw std::invalid_argument("min_leaf must be >= 1");
    }
    for (std::size_t f = 0; f < features.n_features(); ++f) {
        if (features.feature(f).size() != y.size()) {
            throw DataError(fmt::format("feature '{}' has {} values, target has {}",
                                        features.names()[f], features.feature(f).size(),
                                        y.size()));
        }
    }

    const SplitOptions split_opts{options.min_leaf, options.threads};
    std::vector<Node> nodes;
    Node root;
    root.samples.resize(y.size());
    std::iota(root.samples.begin(), root.samples.end(), std::size_t{0});
    nodes.push_back(std::move(root));

    std::vector<double> ys;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        ys.resize(nodes[i].samples.size());
        for (std::size_t k = 0; k < ys.size(); ++k) ys[k] = y[nodes[i].samples[k]];
        const NodeStats st = node_stats(ys);
        nodes[i].id = i;
        nodes[i].mean = st.mean;
        nodes[i].mse = st.mse;

        if (nodes[i].depth >= options.max_depth || st.mse == 0.0 || ys.size() < 2) continue;
        auto split = best_split(nodes[i].samples, features, y, split_opts);
        if (!split) continue;

        Node left, right;
        left.depth = right.depth = nodes[i].depth + 1;
        const auto col = features.feature(split->feature_index);
        for (std::size_t s : nodes[i].samples) {
            (col[s] < split->threshold ? left : right).samples.push_back(s);
        }
        nodes[i].split = split;
        nodes[i].left = nodes.size();
        nodes[i].right = nodes.size() + 1;
        nodes.push_back(std::move(left));
        nodes.push_back(std::move(right));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].id = i;
    return Tree::from_nodes(std::move(nodes), options.max_depth, features.names());
}

Tree fit(const Dataset& ds, std::string_view target, const std::vector<std::string>& features,
         std::size_t max_depth, std::size_t min_leaf) {
    const Selection sel = select(ds, target, features);
    return fit(sel.target, sel.features, FitOptions{max_depth, min_leaf, 1});
}

Tree fit_self(std::span<const double> y, std::size_t max_depth, std::string name) {
    FeatureView self({std::move(name)}, {y});
    return fit(y, self, FitOptions{max_depth, 1, 1});
}

double predict(const Tree& tree, std::span<const double> row) {
    const Node* n = &tree.root();
    while (!n->is_leaf()) {
        const std::size_t f = n->split->feature_index;
        if (f >= row.size()) {
            throw std::invalid_argument(fmt::format("row is missing feature {}", f));
        }
        n = &tree.node(row[f] < n->split->threshold ? *n->left : *n->right);
    }
    return n->mean;
}

double average_leaf_depth(const Tree& tree) { return tree.average_leaf_depth(); }

} // namespace leptovar
