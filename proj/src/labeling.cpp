#include "domset/labeling.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace domset {

namespace {

constexpr uint64_t kTagLevelDraws = 0x6c76ULL;
constexpr uint64_t kTagPathLabels = 0x706cULL;

InputSymbol draw_input(const std::array<double, 4>& p, Rng& rng) {
    return static_cast<InputSymbol>(rng.sample(std::span<const double>(p)));
}

}  // namespace

RuleEngine make_engine(const RuleSet& rs, int levels) {
    if (auto bad = check_correct(rs); !bad.empty())
        throw std::invalid_argument("rule set is not correct: " + bad.front().message);
    if (auto bad = check_complete(rs); !bad.empty())
        throw std::invalid_argument("rule set is not complete: " + bad.front().message);

    RuleEngine engine;
    engine.rules = rs;
    engine.expanded = expand(rs);
    engine.table = analyze(rs, levels);
    engine.levels = levels;
    engine.offsets.reserve(levels);
    for (const auto& row : engine.table.rows)
        engine.offsets.push_back(start_offset_distribution(
            engine.expanded, row.p, row.mean_rule_len, row.level));
    return engine;
}

PreparedGraph prepare_graph(const Graph& g, std::optional<int> girth_override) {
    PreparedGraph pg;
    pg.graph = &g;
    if (girth_override) {
        pg.girth_value = *girth_override;
    } else {
        auto report = girth(g);
        if (!report.girth)
            throw std::invalid_argument("acyclic input; cubic graphs always have cycles");
        pg.girth_value = *report.girth;
    }
    pg.matching = maximum_matching(g);

    // The analyzed segment window girth/4K .. girth/2K collapses below one
    // vertex for any girth a generator can reach, and one-vertex paths are all
    // endpoints, so the produced set would be the whole vertex set. Keep the
    // per-path endpoint overhead at O(1/girth) instead by cutting segments of
    // 4*girth .. 8*girth vertices.
    std::pair<int, int> window{4 * pg.girth_value, 8 * pg.girth_value};
    pg.paths = decompose_paths(g, pg.matching, pg.girth_value, /*levels=*/0, window);
    return pg;
}

std::vector<int> assign_levels(size_t path_count, int levels, Rng& rng) {
    std::vector<int> out(path_count);
    for (auto& lvl : out) lvl = static_cast<int>(rng.below(levels)) + 1;
    return out;
}

InputSymbol compute_input_label(int vertex_level, int mate_level,
                                std::optional<OutputSymbol> mate_output) {
    if (mate_level > vertex_level) return InputSymbol::Circ;
    if (mate_level == vertex_level) return InputSymbol::Dot;
    if (!mate_output)
        throw std::logic_error("mate on a lower level has no output label; "
                               "levels were processed out of order");
    switch (*mate_output) {
        case OutputSymbol::Plus: return InputSymbol::Plus;
        case OutputSymbol::Times: return InputSymbol::Times;
        case OutputSymbol::Dot: return InputSymbol::Dot;
    }
    throw std::logic_error("unreachable");
}

std::vector<OutputSymbol> label_path(std::span<const InputSymbol> inputs,
                                     const ExpandedRuleSet& ers,
                                     const std::array<double, 4>& input_prob,
                                     std::span<const double> offset_pmf,
                                     Rng& rng) {
    const size_t max_len = static_cast<size_t>(ers.max_len);
    const size_t offset = rng.sample(offset_pmf) + 1;  // 1..max_len
    const size_t lead = max_len - offset;

    std::vector<InputSymbol> stream;
    stream.reserve(lead + inputs.size() + max_len);
    for (size_t i = 0; i < lead; ++i) stream.push_back(draw_input(input_prob, rng));
    stream.insert(stream.end(), inputs.begin(), inputs.end());
    for (size_t i = 0; i < max_len; ++i) stream.push_back(draw_input(input_prob, rng));

    std::vector<OutputSymbol> out(inputs.size());
    const size_t real_end = lead + inputs.size();
    size_t pos = 0;
    while (pos < real_end) {
        const ExpandedRule& rule = match_prefix(
            ers, std::span<const InputSymbol>(stream).subspan(pos));
        for (size_t k = 0; k < rule.lhs.size(); ++k) {
            size_t at = pos + k;
            if (at >= lead && at < real_end) out[at - lead] = rule.rhs[k];
        }
        pos += rule.lhs.size();
    }
    return out;
}

DominatingSet build_dominating_set(const PathSystem& ps, const Labeling& lab) {
    const size_t n = ps.mate.size();
    std::vector<uint8_t> tag(n, 0);
    for (int v : ps.uncovered) tag[v] |= kFromUncovered;
    for (const auto& path : ps.paths) {
        for (int v : path) {
            if (lab.input[v] == InputSymbol::Plus) tag[v] |= kFromInputPlus;
            if (lab.output[v] == OutputSymbol::Times) tag[v] |= kFromOutputTimes;
        }
        tag[path.front()] |= kFromEndpoint;
        tag[path.back()] |= kFromEndpoint;
    }

    DominatingSet dset;
    for (size_t v = 0; v < n; ++v)
        if (tag[v]) {
            dset.members.push_back(static_cast<int>(v));
            dset.provenance.push_back(tag[v]);
        }
    return dset;
}

VerifyResult verify_dominating(const Graph& g, std::span<const int> dset) {
    const int n = g.vertex_count();
    std::vector<char> covered(n, 0);
    for (int v : dset) {
        covered[v] = 1;
        for (int w : g.neighbors(v)) covered[w] = 1;
    }
    VerifyResult out;
    for (int v = 0; v < n; ++v)
        if (!covered[v]) out.undominated.push_back(v);
    out.dominating = out.undominated.empty();
    return out;
}

RunResult run_prepared(const PreparedGraph& pg, const RuleEngine& engine,
                       uint64_t seed) {
    const Graph& g = *pg.graph;
    const PathSystem& ps = pg.paths;
    const int n = g.vertex_count();
    const int levels = engine.levels;

    Rng level_rng = Rng::stream(seed, kTagLevelDraws);
    std::vector<int> path_level = assign_levels(ps.paths.size(), levels, level_rng);

    RunResult result;
    Labeling& lab = result.labeling;
    lab.level.assign(n, 0);
    lab.input.assign(n, InputSymbol::Plus);
    lab.output.assign(n, OutputSymbol::Dot);

    std::vector<std::vector<int>> paths_per_level(levels + 1);
    for (size_t p = 0; p < ps.paths.size(); ++p)
        paths_per_level[path_level[p]].push_back(static_cast<int>(p));

    std::vector<InputSymbol> inputs;
    for (int lvl = 1; lvl <= levels; ++lvl) {
        const LevelProbabilities& row = engine.table.rows[lvl - 1];
        const auto& offset_pmf = engine.offsets[lvl - 1].offset_pmf;
        for (int p : paths_per_level[lvl]) {
            const auto& path = ps.paths[p];
            inputs.clear();
            for (int v : path) {
                int mate = ps.mate[v];
                int mate_level = path_level[ps.path_of[mate]];
                std::optional<OutputSymbol> mate_output;
                if (mate_level < lvl) mate_output = lab.output[mate];
                inputs.push_back(compute_input_label(lvl, mate_level, mate_output));
            }
            Rng path_rng = Rng::stream(seed, kTagPathLabels, static_cast<uint64_t>(p));
            auto outputs = label_path(inputs, engine.expanded, row.p, offset_pmf,
                                      path_rng);
            for (size_t i = 0; i < path.size(); ++i) {
                int v = path[i];
                lab.level[v] = lvl;
                lab.input[v] = inputs[i];
                lab.output[v] = outputs[i];
                if (outputs[i] == OutputSymbol::Plus && inputs[i] != InputSymbol::Circ)
                    throw std::logic_error("output P assigned over a non-o input; "
                                           "the rule set checks were bypassed");
            }
        }
    }

    result.dset = build_dominating_set(ps, lab);
    auto verdict = verify_dominating(g, result.dset.members);

    RunStats& stats = result.stats;
    stats.rule_set_name = engine.rules.name;
    stats.seed = seed;
    stats.n = n;
    stats.girth_value = pg.girth_value;
    stats.levels = levels;
    stats.path_count = static_cast<int>(ps.paths.size());
    stats.uncovered_count = static_cast<int>(ps.uncovered.size());
    for (const auto& path : ps.paths)
        if (static_cast<int>(path.size()) < engine.expanded.max_len)
            ++stats.short_path_count;
    stats.min_len = ps.params.min_len;
    stats.max_len = ps.params.max_len;
    stats.dset_size = static_cast<int>(result.dset.members.size());
    stats.ratio = n > 0 ? static_cast<double>(stats.dset_size) / n : 0.0;
    stats.dominating = verdict.dominating;
    for (uint8_t tag : result.dset.provenance) {
        if (tag & kFromUncovered) stats.provenance_counts[0]++;
        if (tag & kFromInputPlus) stats.provenance_counts[1]++;
        if (tag & kFromOutputTimes) stats.provenance_counts[2]++;
        if (tag & kFromEndpoint) stats.provenance_counts[3]++;
    }
    stats.level_counts.assign(levels, LevelCounts{});
    for (const auto& path : ps.paths)
        for (int v : path) {
            LevelCounts& c = stats.level_counts[lab.level[v] - 1];
            c.input[static_cast<int>(lab.input[v])]++;
            c.output[static_cast<int>(lab.output[v])]++;
        }
    return result;
}

RunResult run(const Graph& g, const RuleSet& rs, int levels, uint64_t seed,
              std::optional<int> girth_override) {
    RuleEngine engine = make_engine(rs, levels);
    PreparedGraph pg = prepare_graph(g, girth_override);
    return run_prepared(pg, engine, seed);
}

std::string stats_to_json(const RunStats& stats) {
    nlohmann::json j;
    j["rule_set"] = stats.rule_set_name;
    j["seed"] = stats.seed;
    j["n"] = stats.n;
    j["girth"] = stats.girth_value;
    j["levels"] = stats.levels;
    j["paths"] = stats.path_count;
    j["uncovered"] = stats.uncovered_count;
    j["short_paths"] = stats.short_path_count;
    j["segment_window"] = {stats.min_len, stats.max_len};
    j["dominating_set_size"] = stats.dset_size;
    j["ratio"] = stats.ratio;
    j["dominating"] = stats.dominating;
    j["provenance"] = {{"uncovered", stats.provenance_counts[0]},
                       {"input_plus", stats.provenance_counts[1]},
                       {"output_times", stats.provenance_counts[2]},
                       {"endpoint", stats.provenance_counts[3]}};
    nlohmann::json levels = nlohmann::json::array();
    for (size_t i = 0; i < stats.level_counts.size(); ++i) {
        const auto& c = stats.level_counts[i];
        levels.push_back({{"i", i + 1},
                          {"input", {{"+", c.input[0]}, {"x", c.input[1]},
                                     {".", c.input[2]}, {"o", c.input[3]}}},
                          {"output", {{"P", c.output[0]}, {"T", c.output[1]},
                                      {"D", c.output[2]}}}});
    }
    j["level_counts"] = std::move(levels);
    return j.dump(2);
}

std::string stats_csv_header() { return "seed,n,girth,levels,dset_size,ratio"; }

std::string stats_csv_row(const RunStats& stats) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%llu,%d,%d,%d,%d,%.6f",
                  static_cast<unsigned long long>(stats.seed), stats.n,
                  stats.girth_value, stats.levels, stats.dset_size, stats.ratio);
    return buf;
}

}  // namespace domset
