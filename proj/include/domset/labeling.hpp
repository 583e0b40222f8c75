#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domset/analysis.hpp"
#include "domset/graph.hpp"
#include "domset/rng.hpp"
#include "domset/rules.hpp"

namespace domset {

// Rule set compiled for a fixed level count: expansion, probability table and
// per-level padding-offset distributions.
struct RuleEngine {
    RuleSet rules;
    ExpandedRuleSet expanded;
    AnalysisTable table;
    std::vector<StartOffsetDistribution> offsets;  // offsets[i-1] for level i
    int levels = 0;
};

// Validates correctness and completeness before compiling.
RuleEngine make_engine(const RuleSet& rs, int levels);

// Matching, measured girth and the path decomposition for a graph; the seeded
// part of a run starts after this, so one prepared graph serves many seeds.
struct PreparedGraph {
    const Graph* graph = nullptr;
    int girth_value = 0;
    Matching matching;
    PathSystem paths;
};

PreparedGraph prepare_graph(const Graph& g,
                            std::optional<int> girth_override = std::nullopt);

struct Labeling {
    std::vector<int> level;            // per vertex, 0 when uncovered
    std::vector<InputSymbol> input;    // meaningful for covered vertices
    std::vector<OutputSymbol> output;  // meaningful for covered vertices
};

// Why each vertex entered the dominating set (a vertex can qualify several
// ways).
enum ProvenanceBit : uint8_t {
    kFromUncovered = 1,
    kFromInputPlus = 2,
    kFromOutputTimes = 4,
    kFromEndpoint = 8,
};

struct DominatingSet {
    std::vector<int> members;           // ascending
    std::vector<uint8_t> provenance;    // aligned with members
};

struct LevelCounts {
    std::array<long, 4> input{};
    std::array<long, 3> output{};
};

struct RunStats {
    std::string rule_set_name;
    uint64_t seed = 0;
    int n = 0;
    int girth_value = 0;
    int levels = 0;
    int path_count = 0;
    int uncovered_count = 0;
    int short_path_count = 0;  // paths with fewer vertices than the longest rule
    int min_len = 0, max_len = 0;
    int dset_size = 0;
    double ratio = 0;
    bool dominating = false;
    // Members per provenance category; a vertex can appear in several, so
    // the sum is at least dset_size.
    std::array<int, 4> provenance_counts{};  // uncovered, input +, output T, endpoint
    std::vector<LevelCounts> level_counts;   // per level 1..levels
};

struct RunResult {
    Labeling labeling;
    DominatingSet dset;
    RunStats stats;
};

// Uniform level in 1..levels per path.
std::vector<int> assign_levels(size_t path_count, int levels, Rng& rng);

// Input label of a vertex from its own level and its mate's level/output.
InputSymbol compute_input_label(int vertex_level, int mate_level,
                                std::optional<OutputSymbol> mate_output);

// Output labels for one path: draw the padding offset, pad both ends with
// auxiliary vertices labeled i.i.d. from input_prob, run the matcher from the
// first padded position, keep the labels of the real vertices.
std::vector<OutputSymbol> label_path(std::span<const InputSymbol> inputs,
                                     const ExpandedRuleSet& ers,
                                     const std::array<double, 4>& input_prob,
                                     std::span<const double> offset_pmf,
                                     Rng& rng);

DominatingSet build_dominating_set(const PathSystem& ps, const Labeling& lab);

struct VerifyResult {
    bool dominating = false;
    std::vector<int> undominated;
};

VerifyResult verify_dominating(const Graph& g, std::span<const int> dset);

// Full pipeline for one seed on a prepared graph.
RunResult run_prepared(const PreparedGraph& pg, const RuleEngine& engine,
                       uint64_t seed);

// Convenience wrapper: matching + decomposition + labeling + assembly.
RunResult run(const Graph& g, const RuleSet& rs, int levels, uint64_t seed,
              std::optional<int> girth_override = std::nullopt);

std::string stats_to_json(const RunStats& stats);
std::string stats_csv_header();
std::string stats_csv_row(const RunStats& stats);

}  // namespace domset
