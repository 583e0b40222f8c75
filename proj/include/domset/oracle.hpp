#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "domset/graph.hpp"
#include "domset/labeling.hpp"
#include "domset/rules.hpp"

namespace domset {

struct OracleResult {
    int domination_number = 0;
    std::vector<int> witness;
    uint64_t nodes_explored = 0;
};

// Exact minimum dominating set by branch and bound over closed neighborhoods
// (bitset state, so the vertex count is capped at 32).
OracleResult exact_domination_number(const Graph& g);

// Max-coverage greedy baseline; ties broken by lowest vertex id.
std::vector<int> greedy_domination(const Graph& g);

struct TrialConfig {
    RuleSet rules;
    int levels = 5;
    int n = 1000;
    int girth_target = 0;  // 0 = no boosting
    long max_boost_proposals = 2'000'000;
    std::vector<uint64_t> seeds;
    int jobs = 1;
};

struct TrialReport {
    std::string rule_set_name;
    int levels = 0;
    int n = 0;
    int girth_target = 0;
    std::vector<RunStats> trials;
    double mean_ratio = 0;
    double stddev = 0;
    double standard_error = 0;
};

// One labeling run per seed, each on a freshly generated girth-boosted graph.
// Throws if any trial fails to dominate.
TrialReport run_trials(const TrialConfig& config);

std::string report_to_json(const TrialReport& report);
std::string report_to_text(const TrialReport& report);

}  // namespace domset
