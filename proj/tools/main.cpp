// Command-line front end: rule-set validation, probability tables, graph
// utilities, labeling simulations, exact small-graph solving, and
// reproduction of the bundled reference values.
//
// Exit codes: 0 success, 1 semantic failure (violations, mismatches,
// non-dominating runs), 2 usage or I/O errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "domset/analysis.hpp"
#include "domset/graph.hpp"
#include "domset/labeling.hpp"
#include "domset/oracle.hpp"
#include "domset/rules.hpp"

using namespace domset;

namespace {

constexpr double kCellTolerance = 5e-5;
constexpr double kBoundTolerance = 5e-7;

#ifndef DOMSET_DATA_DIR
#define DOMSET_DATA_DIR "data"
#endif

// Semantic failures (exit 1) as opposed to usage/I/O problems (exit 2).
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_rules_check(const std::string& file) {
    RuleSet rs = load_rule_set(file);
    auto correctness = check_correct(rs);
    auto completeness = check_complete(rs);
    for (const auto& v : correctness) std::cout << "correctness: " << v.message << "\n";
    for (const auto& v : completeness) std::cout << "completeness: " << v.message << "\n";
    if (correctness.empty() && completeness.empty()) {
        std::cout << rs.name << ": " << rs.rules.size()
                  << " rules, correct and complete\n";
        return 0;
    }
    return 1;
}

int cmd_rules_expand(const std::string& file) {
    RuleSet rs = load_rule_set(file);
    auto ers = expand(rs);
    for (const auto& er : ers.rules) {
        std::string line = lhs_string(er.lhs);
        line += " -> ";
        for (OutputSymbol y : er.rhs) line += to_char(y);
        std::cout << line << "\n";
    }
    std::cerr << ers.rules.size() << " expanded rules from " << rs.rules.size()
              << " source rules\n";
    return 0;
}

int cmd_analyze(const std::string& file, int levels, bool as_json) {
    RuleSet rs = load_rule_set(file);
    auto correctness = check_correct(rs);
    auto completeness = check_complete(rs);
    if (!correctness.empty() || !completeness.empty()) {
        for (const auto& v : correctness)
            std::cerr << "correctness: " << v.message << "\n";
        for (const auto& v : completeness)
            std::cerr << "completeness: " << v.message << "\n";
        return 1;
    }
    AnalysisTable table = analyze(rs, levels);
    if (as_json)
        std::cout << table_to_json(table) << "\n";
    else
        std::cout << table_to_tsv(table);
    char buf[64];
    std::snprintf(buf, sizeof buf, "bound = %.6f\n", bound(table).value);
    std::cout << buf;
    return 0;
}

int cmd_graph_gen(int n, uint64_t seed, int girth_target, long max_proposals,
                  const std::string& out_path) {
    Graph g = generate_random_cubic(n, seed);
    if (girth_target > 0) {
        BoostResult boosted = boost_girth(g, girth_target, seed, max_proposals);
        std::cerr << "girth " << boosted.achieved_girth << " after "
                  << boosted.proposals << " proposals\n";
        g = std::move(boosted.graph);
        if (!boosted.reached) {
            std::cerr << "girth target " << girth_target << " not reached\n";
            return 1;
        }
    }
    if (out_path.empty()) {
        std::cout << save_graph(g);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << save_graph(g);
    }
    return 0;
}

int cmd_graph_girth(const std::string& file) {
    Graph g = load_graph_file(file);
    GirthReport report = girth(g);
    if (!report.girth) {
        std::cout << "girth = infinite (no cycle)\n";
        return 0;
    }
    std::cout << "girth = " << *report.girth << "\nwitness:";
    for (int v : report.cycle) std::cout << " " << v;
    std::cout << "\n";
    return 0;
}

int cmd_oracle(const std::string& file) {
    Graph g = load_graph_file(file);
    OracleResult r = exact_domination_number(g);
    std::cout << "domination_number = " << r.domination_number << "\nwitness:";
    for (int v : r.witness) std::cout << " " << v;
    std::cout << "\nnodes_explored = " << r.nodes_explored << "\n";
    std::cout << "greedy_size = " << greedy_domination(g).size() << "\n";
    return 0;
}

int cmd_simulate(const std::string& graph_file, int gen_n, int girth_target,
                 const std::string& rules_file, int levels, uint64_t seed,
                 int trials, int jobs, long max_proposals, bool as_json) {
    RuleSet rs = load_rule_set(rules_file);

    if (!graph_file.empty()) {
        Graph g = load_graph_file(graph_file);
        RunResult r = run(g, rs, levels, seed);
        std::cout << stats_to_json(r.stats) << "\n";
        return r.stats.dominating ? 0 : 1;
    }

    TrialConfig config;
    config.rules = rs;
    config.levels = levels;
    config.n = gen_n;
    config.girth_target = girth_target;
    config.max_boost_proposals = max_proposals;
    config.jobs = jobs;
    for (int t = 0; t < trials; ++t)
        config.seeds.push_back(seed + static_cast<uint64_t>(t));

    TrialReport report;
    try {
        report = run_trials(config);
    } catch (const std::runtime_error& e) {
        throw SemanticError(e.what());
    }
    std::cout << (as_json ? report_to_json(report) + "\n" : report_to_text(report));
    return 0;
}

struct TableFixture {
    struct Row {
        int level = 0;
        std::array<std::optional<double>, 10> cells;
    };
    std::vector<Row> rows;
};

TableFixture load_table_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture: " + path);
    TableFixture fixture;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        TableFixture::Row row{};
        std::getline(ss, cell, '\t');
        row.level = std::stoi(cell);
        for (int c = 0; c < 10 && std::getline(ss, cell, '\t'); ++c)
            if (cell != "-") row.cells[c] = std::stod(cell);
        fixture.rows.push_back(row);
    }
    return fixture;
}

int diff_table(const AnalysisTable& table, const TableFixture& fixture,
               const std::string& label) {
    static const char* kColumns[] = {"p+", "px", "p.", "po", "qP",
                                     "qT", "qD", "qoP", "qoT", "qoD"};
    int mismatches = 0;
    for (const auto& row : fixture.rows) {
        const LevelProbabilities& got = table.rows.at(row.level - 1);
        std::array<std::optional<double>, 10> computed;
        for (int x = 0; x < 4; ++x) computed[x] = got.p[x];
        for (int y = 0; y < 3; ++y) computed[4 + y] = got.q[y];
        if (got.q_circ)
            for (int y = 0; y < 3; ++y) computed[7 + y] = (*got.q_circ)[y];

        bool row_ok = true;
        for (int c = 0; c < 10; ++c) {
            bool ok;
            if (!row.cells[c].has_value()) {
                ok = !computed[c].has_value();
            } else {
                ok = computed[c].has_value() &&
                     std::abs(*computed[c] - *row.cells[c]) <= kCellTolerance + 1e-12;
            }
            if (!ok) {
                row_ok = false;
                ++mismatches;
                std::printf("%s i=%d %s: expected %s, computed %s\n", label.c_str(),
                            row.level, kColumns[c],
                            row.cells[c] ? std::to_string(*row.cells[c]).c_str() : "-",
                            computed[c] ? std::to_string(*computed[c]).c_str() : "-");
            }
        }
        if (row_ok) std::printf("%s i=%d OK\n", label.c_str(), row.level);
    }
    return mismatches;
}

int cmd_reproduce(const std::string& target, const std::string& data_dir) {
    auto data = [&](const std::string& name) { return data_dir + "/" + name; };
    int mismatches = 0;

    if (target == "fig2") {
        RuleSet rs = load_rule_set(data("example10.rules"));
        mismatches += diff_table(analyze(rs, 5),
                                 load_table_fixture(data("fig2_expected.tsv")), "fig2");
    } else if (target == "fig4") {
        RuleSet rs = load_rule_set(data("main79.rules"));
        mismatches += diff_table(analyze(rs, 10000),
                                 load_table_fixture(data("fig4_expected.tsv")), "fig4");
    } else if (target == "bounds") {
        std::ifstream in(data("bounds_expected.tsv"));
        if (!in) throw std::runtime_error("cannot open bounds fixture");
        std::string rules_name;
        int levels = 0;
        double expected = 0;
        while (in >> rules_name >> levels >> expected) {
            RuleSet rs = load_rule_set(data(rules_name + ".rules"));
            double got = bound(analyze(rs, levels)).value;
            bool ok = std::abs(got - expected) <= kBoundTolerance + 1e-15;
            std::printf("%.6f %s (computed %.9f, rules %s, levels %d)\n", expected,
                        ok ? "OK" : "MISMATCH", got, rules_name.c_str(), levels);
            if (!ok) ++mismatches;
        }
    } else {
        std::cerr << "unknown reproduce target: " << target << "\n";
        return 2;
    }
    return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule-based dominating sets in cubic graphs of large girth"};
    app.require_subcommand(1);

    auto* rules_cmd = app.add_subcommand("rules", "validate or expand a rule file");
    rules_cmd->require_subcommand(1);
    std::string rules_file;
    auto* rules_check =
        rules_cmd->add_subcommand("check", "correctness and completeness checks");
    rules_check->add_option("file", rules_file, "rule file")->required();
    auto* rules_expand =
        rules_cmd->add_subcommand("expand", "print the wildcard expansion");
    rules_expand->add_option("file", rules_file, "rule file")->required();

    auto* analyze_cmd =
        app.add_subcommand("analyze", "per-level probability table and bound");
    std::string analyze_rules;
    int analyze_levels = 0;
    bool analyze_tsv = false, analyze_json = false;
    analyze_cmd->add_option("--rules", analyze_rules, "rule file")->required();
    analyze_cmd->add_option("--levels", analyze_levels, "number of levels (>= 2)")
        ->required()
        ->check(CLI::Range(2, 10'000'000));
    analyze_cmd->add_flag("--tsv", analyze_tsv, "TSV output (default)");
    analyze_cmd->add_flag("--json", analyze_json, "JSON output");

    auto* graph_cmd = app.add_subcommand("graph", "generate or inspect graphs");
    graph_cmd->require_subcommand(1);
    auto* gen_cmd = graph_cmd->add_subcommand(
        "gen", "random cubic graph, optionally girth-boosted");
    int gen_n = 0, gen_girth = 0;
    uint64_t gen_seed = 1;
    long gen_iters = 2'000'000;
    std::string gen_out;
    gen_cmd->add_option("--n", gen_n, "vertex count (even)")->required();
    gen_cmd->add_option("--seed", gen_seed, "seed")->required();
    gen_cmd->add_option("--girth", gen_girth, "target girth");
    gen_cmd->add_option("--max-iters", gen_iters, "swap proposal budget");
    gen_cmd->add_option("--out", gen_out, "output file (stdout when absent)");
    auto* girth_cmd =
        graph_cmd->add_subcommand("girth", "shortest cycle of a graph file");
    std::string girth_file;
    girth_cmd->add_option("file", girth_file, "graph file")->required();

    auto* sim_cmd = app.add_subcommand("simulate", "run the labeling pipeline");
    std::string sim_graph, sim_rules;
    int sim_n = 0, sim_girth = 0, sim_levels = 0, sim_trials = 1, sim_jobs = 1;
    uint64_t sim_seed = 1;
    long sim_iters = 2'000'000;
    bool sim_json = false;
    auto* sim_graph_opt =
        sim_cmd->add_option("--graph", sim_graph, "graph file (single run)");
    auto* sim_gen_opt =
        sim_cmd->add_option("--gen", sim_n, "generate graphs with this many vertices");
    sim_cmd->add_option("--girth", sim_girth, "girth target for generated graphs");
    sim_cmd->add_option("--rules", sim_rules, "rule file")->required();
    sim_cmd->add_option("--levels", sim_levels, "number of levels")
        ->required()
        ->check(CLI::Range(2, 1'000'000));
    sim_cmd->add_option("--seed", sim_seed, "base seed")->required();
    sim_cmd->add_option("--trials", sim_trials, "number of seeded trials");
    sim_cmd->add_option("--jobs", sim_jobs, "concurrent trials");
    sim_cmd->add_option("--max-iters", sim_iters, "swap proposal budget");
    sim_cmd->add_flag("--json", sim_json, "JSON report");
    sim_graph_opt->excludes(sim_gen_opt);

    auto* oracle_cmd =
        app.add_subcommand("oracle", "exact domination number (n <= 32)");
    std::string oracle_file;
    oracle_cmd->add_option("file", oracle_file, "graph file")->required();

    auto* repro_cmd =
        app.add_subcommand("reproduce", "recompute the bundled reference values");
    std::string repro_target, repro_data = DOMSET_DATA_DIR;
    repro_cmd->add_option("target", repro_target, "fig2 | fig4 | bounds")->required();
    repro_cmd->add_option("--data", repro_data, "data directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (rules_check->parsed()) return cmd_rules_check(rules_file);
        if (rules_expand->parsed()) return cmd_rules_expand(rules_file);
        if (analyze_cmd->parsed())
            return cmd_analyze(analyze_rules, analyze_levels, analyze_json);
        if (gen_cmd->parsed())
            return cmd_graph_gen(gen_n, gen_seed, gen_girth, gen_iters, gen_out);
        if (girth_cmd->parsed()) return cmd_graph_girth(girth_file);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_file);
        if (sim_cmd->parsed()) {
            if (sim_graph.empty() && sim_n <= 0) {
                std::cerr << "simulate needs --graph FILE or --gen N\n";
                return 2;
            }
            return cmd_simulate(sim_graph, sim_n, sim_girth, sim_rules, sim_levels,
                                sim_seed, sim_trials, sim_jobs, sim_iters, sim_json);
        }
        if (repro_cmd->parsed()) return cmd_reproduce(repro_target, repro_data);
    } catch (const SemanticError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "rule parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
