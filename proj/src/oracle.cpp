#include "domset/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

#include <json.hpp>

namespace domset {

namespace {

struct MdsSearch {
    int n = 0;
    std::vector<uint32_t> closed;  // closed neighborhood masks
    uint32_t all = 0;
    int best_size = 0;
    uint32_t best_set = 0;
    uint64_t nodes = 0;

    void descend(uint32_t dominated, uint32_t chosen, int size) {
        ++nodes;
        if (dominated == all) {
            if (size < best_size) {
                best_size = size;
                best_set = chosen;
            }
            return;
        }
        uint32_t remaining = all & ~dominated;
        int max_gain = 0;
        for (int v = 0; v < n; ++v)
            max_gain = std::max(max_gain, std::popcount(closed[v] & remaining));
        int lower = size + (std::popcount(remaining) + max_gain - 1) / max_gain;
        if (lower >= best_size) return;

        // Branch on who dominates the lowest undominated vertex.
        int u = std::countr_zero(remaining);
        for (int v = 0; v < n; ++v) {
            if (!(closed[v] & (uint32_t{1} << u))) continue;
            descend(dominated | closed[v], chosen | (uint32_t{1} << v), size + 1);
        }
    }
};

}  // namespace

OracleResult exact_domination_number(const Graph& g) {
    const int n = g.vertex_count();
    if (n > 32)
        throw std::invalid_argument("exact solver is capped at 32 vertices");
    if (n == 0) return {};

    MdsSearch search;
    search.n = n;
    search.all = n == 32 ? ~uint32_t{0} : (uint32_t{1} << n) - 1;
    search.closed.resize(n);
    for (int v = 0; v < n; ++v) {
        uint32_t m = uint32_t{1} << v;
        for (int w : g.neighbors(v)) m |= uint32_t{1} << w;
        search.closed[v] = m;
    }

    auto greedy = greedy_domination(g);
    search.best_size = static_cast<int>(greedy.size());
    for (int v : greedy) search.best_set |= uint32_t{1} << v;

    search.descend(0, 0, 0);

    OracleResult out;
    out.domination_number = search.best_size;
    out.nodes_explored = search.nodes;
    for (int v = 0; v < n; ++v)
        if (search.best_set & (uint32_t{1} << v)) out.witness.push_back(v);
    return out;
}

std::vector<int> greedy_domination(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<char> dominated(n, 0);
    std::vector<int> out;
    int left = n;
    while (left > 0) {
        int best = -1, best_gain = -1;
        for (int v = 0; v < n; ++v) {
            int gain = !dominated[v];
            for (int w : g.neighbors(v)) gain += !dominated[w];
            if (gain > best_gain) {
                best_gain = gain;
                best = v;
            }
        }
        out.push_back(best);
        if (!dominated[best]) { dominated[best] = 1; --left; }
        for (int w : g.neighbors(best))
            if (!dominated[w]) { dominated[w] = 1; --left; }
    }
    std::sort(out.begin(), out.end());
    return out;
}

TrialReport run_trials(const TrialConfig& config) {
    if (config.seeds.empty())
        throw std::invalid_argument("run_trials needs at least one seed");
    RuleEngine engine = make_engine(config.rules, config.levels);

    auto one_trial = [&](uint64_t seed) {
        Graph g = generate_random_cubic(config.n, seed);
        std::optional<int> girth_hint;
        if (config.girth_target > 0) {
            BoostResult boosted =
                boost_girth(g, config.girth_target, seed, config.max_boost_proposals);
            g = std::move(boosted.graph);
            girth_hint = boosted.achieved_girth;
        }
        PreparedGraph pg = prepare_graph(g, girth_hint);
        return run_prepared(pg, engine, seed).stats;
    };

    std::vector<RunStats> trials(config.seeds.size());
    int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < config.seeds.size(); ++i)
            trials[i] = one_trial(config.seeds[i]);
    } else {
        std::vector<std::future<RunStats>> pending;
        for (size_t i = 0; i < config.seeds.size(); ++i) {
            pending.push_back(std::async(std::launch::async, one_trial, config.seeds[i]));
            if (static_cast<int>(pending.size()) == jobs || i + 1 == config.seeds.size()) {
                size_t base = i + 1 - pending.size();
                for (size_t k = 0; k < pending.size(); ++k)
                    trials[base + k] = pending[k].get();
                pending.clear();
            }
        }
    }

    for (const RunStats& t : trials)
        if (!t.dominating)
            throw std::runtime_error("trial with seed " + std::to_string(t.seed) +
                                     " produced a non-dominating set");

    TrialReport report;
    report.rule_set_name = config.rules.name;
    report.levels = config.levels;
    report.n = config.n;
    report.girth_target = config.girth_target;
    report.trials = std::move(trials);

    double sum = 0;
    for (const auto& t : report.trials) sum += t.ratio;
    report.mean_ratio = sum / static_cast<double>(report.trials.size());
    double sq = 0;
    for (const auto& t : report.trials) {
        double d = t.ratio - report.mean_ratio;
        sq += d * d;
    }
    if (report.trials.size() > 1) {
        report.stddev = std::sqrt(sq / static_cast<double>(report.trials.size() - 1));
        report.standard_error =
            report.stddev / std::sqrt(static_cast<double>(report.trials.size()));
    }
    return report;
}

std::string report_to_json(const TrialReport& report) {
    nlohmann::json j;
    j["rule_set"] = report.rule_set_name;
    j["levels"] = report.levels;
    j["n"] = report.n;
    j["girth_target"] = report.girth_target;
    j["mean_ratio"] = report.mean_ratio;
    j["stddev"] = report.stddev;
    j["standard_error"] = report.standard_error;
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : report.trials)
        trials.push_back({{"seed", t.seed},
                          {"girth", t.girth_value},
                          {"dset_size", t.dset_size},
                          {"ratio", t.ratio},
                          {"paths", t.path_count},
                          {"uncovered", t.uncovered_count},
                          {"dominating", t.dominating}});
    j["trials"] = std::move(trials);
    return j.dump(2);
}

std::string report_to_text(const TrialReport& report) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "rules=%s levels=%d n=%d girth_target=%d trials=%zu\n",
                  report.rule_set_name.c_str(), report.levels, report.n,
                  report.girth_target, report.trials.size());
    out += buf;
    out += stats_csv_header() + "\n";
    for (const auto& t : report.trials) out += stats_csv_row(t) + "\n";
    std::snprintf(buf, sizeof buf, "mean_ratio=%.6f stddev=%.6f se=%.6f\n",
                  report.mean_ratio, report.stddev, report.standard_error);
    out += buf;
    return out;
}

}  // namespace domset
