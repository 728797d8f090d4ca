#include "leptovar/builtin.hpp"
#include "leptovar/lepto.hpp"
#include "leptovar/report.hpp"
#include "leptovar/tree.hpp"
#include "leptovar/verify.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace leptovar;

namespace {

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("tree JSON is deterministic and round-trips") {
    const Dataset ds = builtin::eight_day_panel();
    const Tree t = fit(ds, "y", {"f1", "f2"}, 2);
    const std::string a = tree_to_json(t);
    CHECK(a == tree_to_json(fit(ds, "y", {"f1", "f2"}, 2)));
    const TreeExport back = tree_export_from_json(a);
    CHECK(back == export_tree(t));
    CHECK(tree_export_to_json(back) == a);

    CHECK_THROWS_AS(tree_export_from_json("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(tree_export_from_json("{\"max_depth\": 1}"), std::invalid_argument);
}

TEST_CASE("self tree JSON node values") {
    const Dataset ds = builtin::eight_day_panel();
    const auto y = ds.column("y");
    const auto doc = nlohmann::json::parse(tree_to_json(fit_self(y, 1)));
    CHECK(doc["residual_mse"].get<double>() == 0.921875);
    const auto& nodes = doc["nodes"];
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0]["split_feature"] == "y");
    CHECK(nodes[0]["threshold"].get<double>() == 0.5);
    CHECK(nodes[0]["mse"].get<double>() == 3.171875);
    CHECK(nodes[1]["mse"].get<double>() == 0.546875);
    CHECK(nodes[2]["mse"].get<double>() == 1.296875);
    CHECK(nodes[1]["mean"].get<double>() == -0.875);
    CHECK(nodes[2]["mean"].get<double>() == 2.125);
    CHECK_FALSE(nodes[1].contains("split_feature"));
}

TEST_CASE("sample fractions reproduce child counts") {
    const Dataset ds = builtin::eight_day_panel();
    const auto y = ds.column("y");
    const TreeExport ex = export_tree(fit_self(y, 3));
    for (const auto& n : ex.nodes) {
        CHECK(std::llround(n.sample_fraction * static_cast<double>(ex.n_samples)) ==
              static_cast<long long>(n.n_samples));
    }
}

TEST_CASE("DOT export") {
    const Dataset ds = builtin::eight_day_panel();
    const std::string dot = tree_to_dot(fit(ds, "y", {"f1"}, 1));
    CHECK(contains(dot, "digraph"));
    CHECK(contains(dot, "f1 < 4.9"));
    CHECK(contains(dot, "label=\"true\""));
    CHECK(contains(dot, "label=\"false\""));

    const Dataset flat({{"x", {1, 2}}, {"y", {3, 3}}});
    CHECK_FALSE(contains(tree_to_dot(fit(flat, "y", {"x"}, 2)), "->"));
}

TEST_CASE("analysis text and JSON") {
    const Dataset ds = builtin::eight_day_panel();
    const auto profile = decompose(ds.column("y"), 2);
    const auto results = feature_set_analysis(ds, "y", {{"f1"}, {"f2"}}, 1);
    const std::string text = analysis_to_text(profile, results);
    CHECK(contains(text, "70.94%"));
    CHECK(contains(text, "96.06%"));
    CHECK(contains(text, "1.4208"));
    CHECK(contains(text, "77.82%"));

    const auto doc = nlohmann::json::parse(analysis_to_json(profile, results));
    CHECK(doc["total_variance"].get<double>() == 3.171875);
    CHECK(analysis_to_json(profile, results) == analysis_to_json(profile, results));

    CHECK(format_percent(0.7094) == "70.94%");
    CHECK(format_percent(1.0) == "100.00%");
}

TEST_CASE("describe and verify reports") {
    const Dataset ds = builtin::eight_day_panel();
    const auto stats = describe(ds);
    const auto corr = correlations(ds);
    CHECK(contains(describe_to_text(stats, corr), "0.625"));
    const auto doc = nlohmann::json::parse(describe_to_json(stats, corr));
    CHECK(doc.is_object());
    CHECK(nlohmann::json::parse(describe_to_json(stats, std::nullopt)).is_object());

    oracle::VerifyConfig cfg;
    cfg.trials = 20;
    const auto rep = oracle::run_verification(cfg);
    CHECK(contains(verify_to_text(rep), "split_equivalence"));
    const auto vj = nlohmann::json::parse(verify_to_json(rep));
    CHECK(vj["passed"].get<bool>());
}
