#include "domset/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace domset {

namespace {

constexpr int kCirc = static_cast<int>(InputSymbol::Circ);
constexpr int kPlus = static_cast<int>(InputSymbol::Plus);
constexpr int kTimes = static_cast<int>(InputSymbol::Times);
constexpr int kDot = static_cast<int>(InputSymbol::Dot);

std::array<double, 4> input_probs_from_sums(int level, int levels,
                                            const std::array<double, 3>& circ_sums) {
    std::array<double, 4> p{};
    p[kCirc] = static_cast<double>(levels - level) / levels;
    p[kPlus] = circ_sums[static_cast<int>(OutputSymbol::Plus)] / levels;
    p[kTimes] = circ_sums[static_cast<int>(OutputSymbol::Times)] / levels;
    p[kDot] = 1.0 / levels + circ_sums[static_cast<int>(OutputSymbol::Dot)] / levels;
    return p;
}

}  // namespace

std::array<double, 4> input_probs(int level, int levels,
                                  std::span<const LevelProbabilities> prior) {
    if (static_cast<int>(prior.size()) < level - 1)
        throw std::invalid_argument("input_probs: missing prior rows");
    std::array<double, 3> sums{};
    for (int j = 0; j < level - 1; ++j) {
        if (!prior[j].q_circ)
            throw std::logic_error("input_probs: prior row lacks the conditional "
                                   "distribution; recursion order is broken");
        for (int y = 0; y < 3; ++y) sums[y] += (*prior[j].q_circ)[y];
    }
    return input_probs_from_sums(level, levels, sums);
}

double pattern_prob(const std::array<double, 4>& p,
                    std::span<const InputSymbol> sigma) {
    double prob = 1.0;
    for (InputSymbol s : sigma) prob *= p[static_cast<int>(s)];
    return prob;
}

OutputProbs output_probs(const ExpandedRuleSet& ers, const std::array<double, 4>& p) {
    OutputProbs out;
    std::array<double, 3> acc{};
    for (const ExpandedRule& er : ers.rules) {
        double pp = pattern_prob(p, er.lhs);
        if (pp == 0) continue;
        out.mean_rule_len += static_cast<double>(er.lhs.size()) * pp;
        for (int y = 0; y < 3; ++y) acc[y] += pp * er.out_count[y];
    }
    if (!(out.mean_rule_len > 0))
        throw std::domain_error("output_probs: no rule has positive probability; "
                                "the rule set cannot be complete");
    for (int y = 0; y < 3; ++y) out.q[y] = acc[y] / out.mean_rule_len;
    return out;
}

std::optional<CircOutputProbs> output_probs_conditional(const ExpandedRuleSet& ers,
                                                        const std::array<double, 4>& p) {
    CircOutputProbs out;
    std::array<double, 3> acc{};
    for (const ExpandedRule& er : ers.rules) {
        int circ_total = er.circ_out_count[0] + er.circ_out_count[1] + er.circ_out_count[2];
        if (circ_total == 0) continue;
        double pp = pattern_prob(p, er.lhs);
        if (pp == 0) continue;
        out.mean_circ_count += circ_total * pp;
        for (int y = 0; y < 3; ++y) acc[y] += pp * er.circ_out_count[y];
    }
    if (out.mean_circ_count == 0) return std::nullopt;
    for (int y = 0; y < 3; ++y) out.q[y] = acc[y] / out.mean_circ_count;
    return out;
}

AnalysisTable analyze(const RuleSet& rs, int levels) {
    if (levels < 2) throw std::invalid_argument("analyze: levels must be at least 2");
    ExpandedRuleSet ers = expand(rs);
    if (!check_complete(rs).empty())
        throw std::invalid_argument("analyze: rule set is not complete");

    AnalysisTable table;
    table.rule_set_name = rs.name;
    table.levels = levels;
    table.rows.reserve(levels);

    std::array<double, 3> circ_sums{};  // running sums of q_circ over lower levels
    for (int i = 1; i <= levels; ++i) {
        LevelProbabilities row;
        row.level = i;
        row.p = input_probs_from_sums(i, levels, circ_sums);

        OutputProbs q = output_probs(ers, row.p);
        row.q = q.q;
        row.mean_rule_len = q.mean_rule_len;

        if (auto qc = output_probs_conditional(ers, row.p)) {
            row.q_circ = qc->q;
            row.mean_circ_count = qc->mean_circ_count;
            for (int y = 0; y < 3; ++y) circ_sums[y] += qc->q[y];
        } else if (i != levels) {
            throw std::logic_error("analyze: conditional distribution vanished "
                                   "below the top level");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

BoundResult bound(const AnalysisTable& table) {
    BoundResult out;
    out.rule_set_name = table.rule_set_name;
    out.levels = table.levels;
    double sum = 0;
    for (const auto& row : table.rows)
        sum += row.q[static_cast<int>(OutputSymbol::Plus)] +
               row.q[static_cast<int>(OutputSymbol::Times)];
    out.value = sum / table.levels;
    return out;
}

StartOffsetDistribution start_offset_distribution(const ExpandedRuleSet& ers,
                                                  const std::array<double, 4>& p,
                                                  double mean_rule_len,
                                                  int level) {
    const int max_len = ers.max_len;
    std::vector<double> by_len(max_len + 1, 0.0);  // total probability per length
    for (const ExpandedRule& er : ers.rules)
        by_len[er.lhs.size()] += pattern_prob(p, er.lhs);

    // tail[l] = P(rule length >= l); tail2[l] = sum of tail over m >= l.
    std::vector<double> tail(max_len + 2, 0.0), tail2(max_len + 2, 0.0);
    for (int l = max_len; l >= 1; --l) {
        tail[l] = tail[l + 1] + by_len[l];
        tail2[l] = tail2[l + 1] + tail[l];
    }
    if (std::abs(tail2[1] - mean_rule_len) > 1e-9 * std::max(1.0, mean_rule_len))
        throw std::invalid_argument("start_offset_distribution: mean_rule_len does "
                                    "not match the pattern probabilities");

    StartOffsetDistribution out;
    out.level = level;
    out.restart_prob.resize(max_len);
    out.offset_pmf.resize(max_len);
    for (int j = 1; j <= max_len; ++j)
        out.restart_prob[j - 1] = tail2[j] > 0 ? tail[j] / tail2[j] : 1.0;

    // Offset pmf by the product formula r_l * prod_{j<l} (1 - r_j). The
    // stationary-age identity offset_pmf[l-1] == tail[l] / Q is asserted in
    // the tests rather than assumed here.
    double survive = 1.0;
    for (int l = 1; l <= max_len; ++l) {
        out.offset_pmf[l - 1] = out.restart_prob[l - 1] * survive;
        survive *= 1.0 - out.restart_prob[l - 1];
    }
    return out;
}

std::string table_to_tsv(const AnalysisTable& table) {
    std::string out = "i\tp+\tpx\tp.\tpo\tqP\tqT\tqD\tqoP\tqoT\tqoD\n";
    char buf[32];
    for (const auto& row : table.rows) {
        out += std::to_string(row.level);
        auto cell = [&](double v) {
            std::snprintf(buf, sizeof buf, "\t%.4f", v);
            out += buf;
        };
        for (int x = 0; x < 4; ++x) cell(row.p[x]);
        for (int y = 0; y < 3; ++y) cell(row.q[y]);
        if (row.q_circ)
            for (int y = 0; y < 3; ++y) cell((*row.q_circ)[y]);
        else
            out += "\t-\t-\t-";
        out += '\n';
    }
    return out;
}

std::string table_to_json(const AnalysisTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r;
        r["i"] = row.level;
        r["p"] = {{"+", row.p[0]}, {"x", row.p[1]}, {".", row.p[2]}, {"o", row.p[3]}};
        r["q"] = {{"P", row.q[0]}, {"T", row.q[1]}, {"D", row.q[2]}};
        if (row.q_circ)
            r["q_circ"] = {{"P", (*row.q_circ)[0]},
                           {"T", (*row.q_circ)[1]},
                           {"D", (*row.q_circ)[2]}};
        else
            r["q_circ"] = nullptr;
        r["mean_rule_len"] = row.mean_rule_len;
        r["mean_circ_count"] = row.mean_circ_count;
        rows.push_back(std::move(r));
    }
    nlohmann::json j;
    j["rule_set"] = table.rule_set_name;
    j["levels"] = table.levels;
    j["rows"] = std::move(rows);
    return j.dump(2);
}

}  // namespace domset
