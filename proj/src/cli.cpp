#include "leptovar/cli.hpp"

#include "leptovar/builtin.hpp"
#include "leptovar/dataset.hpp"
#include "leptovar/error.hpp"
#include "leptovar/lepto.hpp"
#include "leptovar/reproduce.hpp"
#include "leptovar/report.hpp"
#include "leptovar/tree.hpp"
#include "leptovar/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace leptovar::cli {

namespace {

struct RunConfig {
    std::string input;
    std::string target;
    std::string features;
    std::string sets;
    std::string index_column;
    std::string delimiter = ",";
    bool no_header = false;
    std::size_t depth = 1;
    std::size_t min_leaf = 1;
    std::string format = "text";
    std::string out_path;
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    bool conjecture = false;
    std::size_t conjecture_n = 8;
    std::string emit_csv;
};

// Signals a usage problem detected after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) continue;
        out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* f) { return cfg.format == f; })) {
        throw UsageError(fmt::format("unsupported --format '{}' for this command", cfg.format));
    }
}

void require_depth(const RunConfig& cfg) {
    if (cfg.depth < 1) throw UsageError("depth must be ≥ 1");
}

void require_target(const RunConfig& cfg) {
    if (cfg.target.empty()) throw UsageError("--target is required");
}

Dataset load(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("--input is required");
    if (cfg.delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
    CsvOptions opts;
    opts.delimiter = cfg.delimiter.front();
    opts.has_header = !cfg.no_header;
    if (!cfg.index_column.empty()) opts.index_column = cfg.index_column;
    return load_csv(cfg.input, opts);
}

unsigned thread_cap() {
    if (const char* env = std::getenv("LEPTOVAR_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

int cmd_describe(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_format(cfg, {"text", "json"});
    const Dataset ds = load(cfg);
    const auto stats = describe(ds);
    std::optional<CorrelationMatrix> corr;
    try {
        corr = correlations(ds);
    } catch (const DataError& e) {
        err << "correlations skipped: " << e.what() << "\n";
    }
    out << (cfg.format == "json" ? describe_to_json(stats, corr) : describe_to_text(stats, corr));
    return kSuccess;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"text", "json", "dot"});
    require_depth(cfg);
    require_target(cfg);
    if (cfg.min_leaf < 1) throw UsageError("min-leaf must be ≥ 1");
    const Dataset ds = load(cfg);
    const auto features = split_list(cfg.features, ',');
    const Selection sel = select(ds, cfg.target, features);
    const Tree tree = fit(sel.target, sel.features, FitOptions{cfg.depth, cfg.min_leaf, thread_cap()});
    if (cfg.format == "json") {
        out << tree_to_json(tree);
    } else if (cfg.format == "dot") {
        out << tree_to_dot(tree);
    } else {
        out << tree_to_text(tree);
    }
    return kSuccess;
}

int cmd_lepto(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"text", "json"});
    require_depth(cfg);
    require_target(cfg);
    const Dataset ds = load(cfg);
    const auto profile = decompose(ds.column(cfg.target), cfg.depth);
    out << (cfg.format == "json" ? analysis_to_json(profile, {}) : analysis_to_text(profile, {}));
    return kSuccess;
}

int cmd_rank(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"text", "json"});
    require_depth(cfg);
    require_target(cfg);
    std::vector<std::vector<std::string>> sets;
    for (const auto& s : split_list(cfg.sets, ';')) sets.push_back(split_list(s, ','));
    if (sets.empty()) throw UsageError("--sets needs at least one feature set");
    const Dataset ds = load(cfg);
    auto results = feature_set_analysis(ds, cfg.target, sets, cfg.depth, cfg.min_leaf);
    std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
        return a.macro_fraction_explained > b.macro_fraction_explained;
    });
    const auto profile = decompose(ds.column(cfg.target), cfg.depth);
    out << (cfg.format == "json" ? analysis_to_json(profile, results)
                                 : analysis_to_text(profile, results));
    return kSuccess;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"text", "json"});
    oracle::VerifyConfig vc;
    vc.trials = cfg.trials;
    vc.seed = cfg.seed;
    vc.conjecture = cfg.conjecture;
    if (cfg.conjecture) {
        // With --conjecture, --trials counts conjecture trials and the
        // property suites run at their default size.
        vc.trials = 1000;
        vc.conjecture_trials = cfg.trials;
        vc.conjecture_max_n = cfg.conjecture_n;
        vc.conjecture_depth = cfg.depth;
    }
    const auto report = oracle::run_verification(vc);
    out << (cfg.format == "json" ? verify_to_json(report) : verify_to_text(report));
    return report.passed() ? kSuccess : kVerificationFailure;
}

int cmd_paper_demo(const RunConfig& cfg, std::ostream& out) {
    require_format(cfg, {"text", "json"});
    if (!cfg.emit_csv.empty()) {
        std::ofstream f(cfg.emit_csv);
        if (!f) throw DataError(fmt::format("cannot write {}", cfg.emit_csv));
        write_csv(f, builtin::eight_day_panel());
    }
    const auto report = reproduce_reference_results();
    out << (cfg.format == "json" ? reference_to_json(report) : reference_to_text(report));
    return report.passed() ? kSuccess : kVerificationFailure;
}

void add_input_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--input,-i", cfg.input, "CSV file");
    cmd->add_option("--delimiter", cfg.delimiter, "Field delimiter");
    cmd->add_flag("--no-header", cfg.no_header, "First row is data, columns named col1..colN");
    cmd->add_option("--index-column", cfg.index_column, "Non-numeric column to skip (e.g. Date)");
}

void add_output_options(CLI::App* cmd, RunConfig& cfg, const char* formats) {
    cmd->add_option("--format", cfg.format, formats);
    cmd->add_option("--out,-o", cfg.out_path, "Write output to this file");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Lepto-variance and macro-variance analysis with regression trees", "leptovar"};
    app.require_subcommand(1);

    auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics and correlations");
    add_input_options(describe_cmd, cfg);
    add_output_options(describe_cmd, cfg, "text|json");

    auto* fit_cmd = app.add_subcommand("fit", "Fit a greedy regression tree");
    add_input_options(fit_cmd, cfg);
    add_output_options(fit_cmd, cfg, "text|json|dot");
    fit_cmd->add_option("--target", cfg.target, "Target column");
    fit_cmd->add_option("--features", cfg.features, "Comma-separated feature columns");
    fit_cmd->add_option("--depth", cfg.depth, "Maximum depth (>= 1)");
    fit_cmd->add_option("--min-leaf", cfg.min_leaf, "Minimum samples per leaf");

    auto* lepto_cmd = app.add_subcommand("lepto", "Lepto/macro-variance profile of a target");
    add_input_options(lepto_cmd, cfg);
    add_output_options(lepto_cmd, cfg, "text|json");
    lepto_cmd->add_option("--target", cfg.target, "Target column");
    lepto_cmd->add_option("--depth", cfg.depth, "Deepest level to report (>= 1)");

    auto* rank_cmd = app.add_subcommand("rank", "Rank feature sets by macro-variance explained");
    add_input_options(rank_cmd, cfg);
    add_output_options(rank_cmd, cfg, "text|json");
    rank_cmd->add_option("--target", cfg.target, "Target column");
    rank_cmd->add_option("--sets", cfg.sets, "Feature sets, e.g. \"MEx,SMB,HML;SMB,HML;SMB\"");
    rank_cmd->add_option("--depth", cfg.depth, "Tree depth (>= 1)");
    rank_cmd->add_option("--min-leaf", cfg.min_leaf, "Minimum samples per leaf");

    auto* verify_cmd = app.add_subcommand("verify", "Randomized checks against brute-force oracles");
    add_output_options(verify_cmd, cfg, "text|json");
    verify_cmd->add_option("--trials", cfg.trials, "Trials per check");
    verify_cmd->add_option("--seed", cfg.seed, "Random seed");
    verify_cmd->add_flag("--conjecture", cfg.conjecture,
                         "Also test whether greedy self trees minimise RSS at their average depth");
    verify_cmd->add_option("--n", cfg.conjecture_n, "Largest sample size for conjecture trials");
    verify_cmd->add_option("--depth", cfg.depth, "Tree depth for conjecture trials");

    auto* demo_cmd = app.add_subcommand("paper-demo", "Recompute the built-in worked examples");
    add_output_options(demo_cmd, cfg, "text|json");
    demo_cmd->add_option("--emit-csv", cfg.emit_csv, "Also write the eight-day panel as CSV");

    bool depth_given = false;
    try {
        app.parse(argc, argv);
        depth_given = verify_cmd->count("--depth") > 0;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    if (*verify_cmd && cfg.conjecture && !depth_given) cfg.depth = 2;

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty()) {
        file.open(cfg.out_path);
        if (!file) {
            err << "error: cannot open " << cfg.out_path << " for writing\n";
            return kDataError;
        }
        sink = &file;
    }

    try {
        if (*describe_cmd) return cmd_describe(cfg, *sink, err);
        if (*fit_cmd) return cmd_fit(cfg, *sink);
        if (*lepto_cmd) return cmd_lepto(cfg, *sink);
        if (*rank_cmd) return cmd_rank(cfg, *sink);
        if (*verify_cmd) return cmd_verify(cfg, *sink);
        if (*demo_cmd) return cmd_paper_demo(cfg, *sink);
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

} // namespace leptovar::cli
