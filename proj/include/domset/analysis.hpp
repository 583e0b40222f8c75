#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domset/rules.hpp"

namespace domset {

// Probability row for one level: input-label distribution p, output-label
// distribution q, and q conditioned on the input being o (absent exactly when
// p(o) = 0, i.e. at the top level).
struct LevelProbabilities {
    int level = 0;
    std::array<double, 4> p{};  // indexed by InputSymbol
    std::array<double, 3> q{};  // indexed by OutputSymbol
    std::optional<std::array<double, 3>> q_circ;
    double mean_rule_len = 0;   // expected symbols consumed per rule match
    double mean_circ_count = 0; // expected o symbols consumed per rule match
};

struct AnalysisTable {
    std::string rule_set_name;
    int levels = 0;
    std::vector<LevelProbabilities> rows;  // rows[i-1] holds level i
};

// Restart probabilities r_j and the distribution of the padding offset:
// r_j is the chance a vertex starts a rule given the previous j-1 vertices
// did not, and offset_pmf[l-1] the chance the offset draw equals l.
struct StartOffsetDistribution {
    int level = 0;
    std::vector<double> restart_prob;  // r_1..r_maxlen
    std::vector<double> offset_pmf;    // P(offset = 1..maxlen)
};

struct BoundResult {
    std::string rule_set_name;
    int levels = 0;
    double value = 0;  // leading coefficient of the expected set size
};

// Level-i input distribution from the q_circ rows of all lower levels.
std::array<double, 4> input_probs(int level, int levels,
                                  std::span<const LevelProbabilities> prior);

// Probability that sigma appears on |sigma| consecutive vertices.
double pattern_prob(const std::array<double, 4>& p,
                    std::span<const InputSymbol> sigma);

struct OutputProbs {
    std::array<double, 3> q{};
    double mean_rule_len = 0;
};
OutputProbs output_probs(const ExpandedRuleSet& ers, const std::array<double, 4>& p);

struct CircOutputProbs {
    std::array<double, 3> q{};
    double mean_circ_count = 0;
};
std::optional<CircOutputProbs> output_probs_conditional(const ExpandedRuleSet& ers,
                                                        const std::array<double, 4>& p);

// All rows 1..levels in order; O(levels * |expanded rules|) via running sums.
// Requires a complete rule set.
AnalysisTable analyze(const RuleSet& rs, int levels);

// Mean of q_i(P) + q_i(T) over the levels.
BoundResult bound(const AnalysisTable& table);

StartOffsetDistribution start_offset_distribution(const ExpandedRuleSet& ers,
                                                  const std::array<double, 4>& p,
                                                  double mean_rule_len,
                                                  int level = 0);

// Fixed 4-decimal TSV, one row per level, `-` for the absent conditional
// columns. Matches the bundled reference tables.
std::string table_to_tsv(const AnalysisTable& table);
std::string table_to_json(const AnalysisTable& table);

}  // namespace domset
