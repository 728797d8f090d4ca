#include "leptovar/report.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace leptovar {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string short_num(double v) { return fmt::format("{:.6g}", v); }

std::string join_names(const std::vector<std::string>& names) {
    return names.empty() ? std::string("(none)") : fmt::format("{}", fmt::join(names, ","));
}

} // namespace

std::string format_percent(double fraction) { return fmt::format("{:.2f}%", 100.0 * fraction); }

// ---------------------------------------------------------------------------
// Tree export

TreeExport export_tree(const Tree& tree) {
    TreeExport ex;
    ex.max_depth = tree.max_depth();
    ex.n_samples = tree.n_samples();
    ex.features = tree.feature_names();
    ex.residual_mse = tree.residual_mse();
    ex.average_leaf_depth = tree.average_leaf_depth();
    const double total = static_cast<double>(tree.n_samples());
    for (const Node& n : tree.nodes()) {
        ExportNode e;
        e.id = n.id;
        e.depth = n.depth;
        e.n_samples = n.samples.size();
        e.sample_fraction = static_cast<double>(n.samples.size()) / total;
        e.mean = n.mean;
        e.mse = n.mse;
        if (n.split) {
            e.split_feature = tree.feature_names().at(n.split->feature_index);
            e.threshold = n.split->threshold;
            e.left_id = n.left;
            e.right_id = n.right;
        }
        ex.nodes.push_back(std::move(e));
    }
    return ex;
}

std::string tree_export_to_json(const TreeExport& ex) {
    std::string out = "{\n";
    out += fmt::format("  \"max_depth\": {},\n", ex.max_depth);
    out += fmt::format("  \"n_samples\": {},\n", ex.n_samples);
    std::vector<std::string> names;
    for (const auto& f : ex.features) names.push_back(json_string(f));
    out += fmt::format("  \"features\": [{}],\n", fmt::join(names, ", "));
    out += fmt::format("  \"residual_mse\": {},\n", num(ex.residual_mse));
    out += fmt::format("  \"average_leaf_depth\": {},\n", num(ex.average_leaf_depth));
    out += "  \"nodes\": [";
    for (std::size_t i = 0; i < ex.nodes.size(); ++i) {
        const auto& n = ex.nodes[i];
        out += i ? ",\n    {" : "\n    {";
        out += fmt::format("\"id\": {}, \"depth\": {}, \"n_samples\": {}, \"sample_fraction\": {}, "
                           "\"mean\": {}, \"mse\": {}",
                           n.id, n.depth, n.n_samples, num(n.sample_fraction), num(n.mean),
                           num(n.mse));
        if (n.split_feature) {
            out += fmt::format(", \"split_feature\": {}, \"threshold\": {}, \"left_id\": {}, "
                               "\"right_id\": {}",
                               json_string(*n.split_feature), num(*n.threshold), *n.left_id,
                               *n.right_id);
        }
        out += "}";
    }
    out += ex.nodes.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string tree_to_json(const Tree& tree) { return tree_export_to_json(export_tree(tree)); }

TreeExport tree_export_from_json(std::string_view json) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(fmt::format("malformed tree JSON: {}", e.what()));
    }
    try {
        TreeExport ex;
        ex.max_depth = doc.at("max_depth").get<std::size_t>();
        ex.n_samples = doc.at("n_samples").get<std::size_t>();
        ex.features = doc.at("features").get<std::vector<std::string>>();
        ex.residual_mse = doc.at("residual_mse").get<double>();
        ex.average_leaf_depth = doc.at("average_leaf_depth").get<double>();
        for (const auto& jn : doc.at("nodes")) {
            ExportNode n;
            n.id = jn.at("id").get<std::size_t>();
            n.depth = jn.at("depth").get<std::size_t>();
            n.n_samples = jn.at("n_samples").get<std::size_t>();
            n.sample_fraction = jn.at("sample_fraction").get<double>();
            n.mean = jn.at("mean").get<double>();
            n.mse = jn.at("mse").get<double>();
            if (jn.contains("split_feature")) {
                n.split_feature = jn.at("split_feature").get<std::string>();
                n.threshold = jn.at("threshold").get<double>();
                n.left_id = jn.at("left_id").get<std::size_t>();
                n.right_id = jn.at("right_id").get<std::size_t>();
            }
            ex.nodes.push_back(std::move(n));
        }
        return ex;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(fmt::format("malformed tree JSON: {}", e.what()));
    }
}

// ---------------------------------------------------------------------------
// DOT and text

std::string tree_to_dot(const Tree& tree) {
    std::string out = "digraph tree {\n  node [shape=box];\n";
    for (const Node& n : tree.nodes()) {
        std::string label;
        if (n.split) {
            label = fmt::format("{} < {}\\n", tree.feature_names().at(n.split->feature_index),
                                short_num(n.split->threshold));
        }
        label += fmt::format("#{}\\nn = {}\\nmse = {}\\nmean = {}", n.id, n.samples.size(),
                             short_num(n.mse), short_num(n.mean));
        out += fmt::format("  n{} [label=\"{}\"];\n", n.id, label);
    }
    for (const Node& n : tree.nodes()) {
        if (!n.split) continue;
        out += fmt::format("  n{} -> n{} [label=\"true\"];\n", n.id, *n.left);
        out += fmt::format("  n{} -> n{} [label=\"false\"];\n", n.id, *n.right);
    }
    out += "}\n";
    return out;
}

std::string tree_to_text(const Tree& tree) {
    std::string out;
    auto walk = [&](auto&& self, std::size_t id) -> void {
        const Node& n = tree.node(id);
        out += fmt::format("{:{}}#{} n={} mean={} mse={}", "", 2 * n.depth, n.id,
                           n.samples.size(), short_num(n.mean), short_num(n.mse));
        if (n.split) {
            out += fmt::format("  split {} < {}\n",
                               tree.feature_names().at(n.split->feature_index),
                               short_num(n.split->threshold));
            self(self, *n.left);
            self(self, *n.right);
        } else {
            out += "  leaf\n";
        }
    };
    walk(walk, 0);
    out += fmt::format("residual mse: {:.6f}\n", tree.residual_mse());
    out += fmt::format("total mse: {:.6f}\n", tree.total_mse());
    out += fmt::format("average leaf depth: {:.4f}\n", tree.average_leaf_depth());
    return out;
}

// ---------------------------------------------------------------------------
// Analysis

std::string analysis_to_text(const DecompositionProfile& profile,
                             const std::vector<FeatureSetResult>& results) {
    std::string out = fmt::format("total variance: {:.6f}\n\n", profile.total_variance);
    out += fmt::format("{:>3}  {:>12}  {:>12}  {:>9}  {:>9}\n", "k", "lepto", "macro", "macro %",
                       "avg depth");
    for (const auto& r : profile.rows) {
        out += fmt::format("{:>3}  {:>12.6f}  {:>12.6f}  {:>9}  {:>9.4f}\n", r.k, r.lepto, r.macro,
                           format_percent(r.macro_fraction), r.average_leaf_depth);
    }
    if (results.empty()) return out;

    out += fmt::format("\n{:<24}  {:>3}  {:>10}  {:>10}  {:>10}\n", "features", "k", "residual",
                       "explained", "of macro");
    for (const auto& r : results) {
        out += fmt::format("{:<24}  {:>3}  {:>10.4f}  {:>10.4f}  {:>10}{}\n",
                           join_names(r.feature_names), r.depth, r.residual_mse, r.explained,
                           format_percent(r.macro_fraction_explained),
                           r.exceeds_macro ? "  (exceeds self tree)" : "");
    }
    return out;
}

std::string analysis_to_json(const DecompositionProfile& profile,
                             const std::vector<FeatureSetResult>& results) {
    nlohmann::ordered_json doc;
    doc["total_variance"] = profile.total_variance;
    doc["profile"] = nlohmann::ordered_json::array();
    for (const auto& r : profile.rows) {
        doc["profile"].push_back({{"k", r.k},
                                  {"lepto", r.lepto},
                                  {"macro", r.macro},
                                  {"macro_fraction", r.macro_fraction},
                                  {"average_leaf_depth", r.average_leaf_depth}});
    }
    doc["feature_sets"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        doc["feature_sets"].push_back({{"features", r.feature_names},
                                       {"depth", r.depth},
                                       {"residual_mse", r.residual_mse},
                                       {"explained", r.explained},
                                       {"macro_fraction_explained", r.macro_fraction_explained},
                                       {"average_leaf_depth", r.average_leaf_depth},
                                       {"exceeds_macro", r.exceeds_macro}});
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Describe

std::string describe_to_text(const std::vector<ColumnSummary>& stats,
                             const std::optional<CorrelationMatrix>& corr) {
    std::string out = fmt::format("{:<8}", "");
    for (const auto& s : stats) out += fmt::format("{:>14}", s.name);
    out += "\n";
    auto row = [&](std::string_view label, auto field) {
        out += fmt::format("{:<8}", label);
        for (const auto& s : stats) out += fmt::format("{:>14.6f}", field(s.stats));
        out += "\n";
    };
    row("count", [](const ColumnStats& s) { return static_cast<double>(s.count); });
    row("mean", [](const ColumnStats& s) { return s.mean; });
    row("std", [](const ColumnStats& s) { return s.std; });
    row("min", [](const ColumnStats& s) { return s.min; });
    row("25%", [](const ColumnStats& s) { return s.q25; });
    row("50%", [](const ColumnStats& s) { return s.median; });
    row("75%", [](const ColumnStats& s) { return s.q75; });
    row("max", [](const ColumnStats& s) { return s.max; });

    if (corr) {
        out += "\ncorrelation\n" + fmt::format("{:<8}", "");
        for (const auto& name : corr->names) out += fmt::format("{:>14}", name);
        out += "\n";
        for (std::size_t i = 0; i < corr->size(); ++i) {
            out += fmt::format("{:<8}", corr->names[i]);
            for (std::size_t j = 0; j < corr->size(); ++j) {
                out += fmt::format("{:>14.6f}", (*corr)(i, j));
            }
            out += "\n";
        }
    }
    return out;
}

std::string describe_to_json(const std::vector<ColumnSummary>& stats,
                             const std::optional<CorrelationMatrix>& corr) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& s : stats) {
        doc["columns"].push_back({{"name", s.name},
                                  {"count", s.stats.count},
                                  {"mean", s.stats.mean},
                                  {"std", s.stats.std},
                                  {"min", s.stats.min},
                                  {"q25", s.stats.q25},
                                  {"median", s.stats.median},
                                  {"q75", s.stats.q75},
                                  {"max", s.stats.max}});
    }
    if (corr) {
        doc["correlation"] = {{"names", corr->names}, {"values", corr->values}};
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Verification

std::string verify_to_text(const oracle::VerifyReport& report) {
    std::string out = fmt::format("seed {}\n", report.seed);
    for (const auto& c : report.checks) {
        out += fmt::format("{:<20} {:>6} trials  {:>4} failures  {}\n", c.name, c.trials,
                           c.failures, c.failures == 0 ? "PASS" : "FAIL");
        if (c.failures) out += fmt::format("  counterexample: {}\n", c.first_counterexample);
    }
    if (report.conjecture_run) {
        const auto& c = report.conjecture;
        out += fmt::format("conjecture: depth {}, n <= {}, {} trials, {} counterexamples\n",
                           c.depth, c.max_n, c.trials, c.counterexamples);
        for (const auto& e : c.examples) out += fmt::format("  {}\n", e);
    }
    out += report.passed() ? "all checks passed\n" : "verification FAILED\n";
    return out;
}

std::string verify_to_json(const oracle::VerifyReport& report) {
    nlohmann::ordered_json doc;
    doc["seed"] = report.seed;
    doc["passed"] = report.passed();
    doc["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json jc = {
            {"name", c.name}, {"trials", c.trials}, {"failures", c.failures}};
        if (c.failures) jc["first_counterexample"] = c.first_counterexample;
        doc["checks"].push_back(std::move(jc));
    }
    if (report.conjecture_run) {
        const auto& c = report.conjecture;
        doc["conjecture"] = {{"depth", c.depth},
                             {"max_n", c.max_n},
                             {"trials", c.trials},
                             {"seed", c.seed},
                             {"counterexamples", c.counterexamples},
                             {"examples", c.examples}};
    }
    return doc.dump(2) + "\n";
}

} // namespace leptovar
