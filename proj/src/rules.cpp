#include "domset/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace domset {

namespace {

std::optional<InputSymbol> input_from_char(char c) {
    switch (c) {
        case '+': return InputSymbol::Plus;
        case 'x': return InputSymbol::Times;
        case '.': return InputSymbol::Dot;
        case 'o': return InputSymbol::Circ;
        default: return std::nullopt;
    }
}

std::optional<OutputSymbol> output_from_char(char c) {
    switch (c) {
        case 'P': return OutputSymbol::Plus;
        case 'T': return OutputSymbol::Times;
        case 'D': return OutputSymbol::Dot;
        default: return std::nullopt;
    }
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

}  // namespace

char to_char(InputSymbol s) {
    static constexpr char k[] = {'+', 'x', '.', 'o'};
    return k[static_cast<int>(s)];
}

char to_char(OutputSymbol s) {
    static constexpr char k[] = {'P', 'T', 'D'};
    return k[static_cast<int>(s)];
}

int RuleSet::max_rule_len() const {
    size_t m = 0;
    for (const auto& r : rules) m = std::max(m, r.lhs.size());
    return static_cast<int>(m);
}

RuleSet parse_rule_set(std::string_view text, std::string name) {
    RuleSet rs;
    rs.name = std::move(name);

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::string flat = strip_spaces(line);
        if (flat.empty()) continue;

        size_t arrow = flat.find("->");
        if (arrow == std::string::npos)
            throw ParseError(line_no, "expected `LHS -> RHS`");
        if (flat.find("->", arrow + 2) != std::string::npos)
            throw ParseError(line_no, "more than one `->`");

        std::string lhs_text = flat.substr(0, arrow);
        std::string rhs_text = flat.substr(arrow + 2);
        if (lhs_text.empty() || rhs_text.empty())
            throw ParseError(line_no, "empty rule side");

        Rule rule;
        for (char c : lhs_text) {
            if (c == '?') {
                rule.lhs.push_back(PatternSymbol::wildcard());
            } else if (auto s = input_from_char(c)) {
                rule.lhs.push_back(*s);
            } else {
                throw ParseError(line_no, std::string("unknown input symbol `") + c + "`");
            }
        }
        for (char c : rhs_text) {
            if (c == '?')
                throw ParseError(line_no, "wildcard not allowed on the right-hand side");
            auto s = output_from_char(c);
            if (!s)
                throw ParseError(line_no, std::string("unknown output symbol `") + c + "`");
            rule.rhs.push_back(*s);
        }
        if (rule.lhs.size() != rule.rhs.size())
            throw ParseError(line_no, "left and right sides differ in length");
        rs.rules.push_back(std::move(rule));
    }

    if (rs.rules.empty()) throw ParseError(line_no, "no rules in input");
    return rs;
}

RuleSet load_rule_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rule file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();

    std::string name = path;
    if (size_t slash = name.find_last_of("/\\"); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (size_t dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    return parse_rule_set(buf.str(), name);
}

std::string to_string(const Rule& rule) {
    std::string out;
    for (PatternSymbol s : rule.lhs)
        out += s.is_wildcard() ? '?' : to_char(s.symbol());
    out += " -> ";
    for (OutputSymbol s : rule.rhs) out += to_char(s);
    return out;
}

std::string to_text(const RuleSet& rs) {
    std::string out;
    for (const auto& rule : rs.rules) {
        out += to_string(rule);
        out += '\n';
    }
    return out;
}

std::string lhs_string(std::span<const InputSymbol> lhs) {
    std::string out;
    for (InputSymbol s : lhs) out += to_char(s);
    return out;
}

ExpandedRuleSet expand(const RuleSet& rs) {
    ExpandedRuleSet ers;
    ers.max_len = rs.max_rule_len();

    std::vector<InputSymbol> scratch;
    for (size_t src = 0; src < rs.rules.size(); ++src) {
        const Rule& rule = rs.rules[src];
        scratch.assign(rule.lhs.size(), InputSymbol::Plus);

        // Odometer over wildcard positions, last wildcard varying fastest.
        std::vector<size_t> wild;
        for (size_t i = 0; i < rule.lhs.size(); ++i) {
            if (rule.lhs[i].is_wildcard())
                wild.push_back(i);
            else
                scratch[i] = rule.lhs[i].symbol();
        }

        size_t variants = size_t{1} << (2 * wild.size());
        for (size_t v = 0; v < variants; ++v) {
            size_t code = v;
            for (size_t w = wild.size(); w-- > 0;) {
                scratch[wild[w]] = static_cast<InputSymbol>(code & 3);
                code >>= 2;
            }
            ExpandedRule er;
            er.lhs = scratch;
            er.rhs = rule.rhs;
            er.source = static_cast<int>(src);
            for (size_t i = 0; i < er.lhs.size(); ++i) {
                int y = static_cast<int>(er.rhs[i]);
                er.out_count[y]++;
                if (er.lhs[i] == InputSymbol::Circ) er.circ_out_count[y]++;
            }
            ers.rules.push_back(std::move(er));
        }
    }

    // Try to build the matching trie; prefix conflicts leave it unusable.
    ers.trie.push_back({});
    ers.prefix_free = true;
    for (size_t r = 0; r < ers.rules.size() && ers.prefix_free; ++r) {
        int32_t node = 0;
        const auto& lhs = ers.rules[r].lhs;
        for (size_t i = 0; i < lhs.size(); ++i) {
            if (ers.trie[node].rule >= 0) { ers.prefix_free = false; break; }
            int c = static_cast<int>(lhs[i]);
            if (ers.trie[node].child[c] < 0) {
                ers.trie[node].child[c] = static_cast<int32_t>(ers.trie.size());
                ers.trie.push_back({});
            }
            node = ers.trie[node].child[c];
        }
        if (!ers.prefix_free) break;
        bool is_interior = std::any_of(ers.trie[node].child.begin(),
                                       ers.trie[node].child.end(),
                                       [](int32_t c) { return c >= 0; });
        if (ers.trie[node].rule >= 0 || is_interior) {
            ers.prefix_free = false;
            break;
        }
        ers.trie[node].rule = static_cast<int32_t>(r);
    }
    if (!ers.prefix_free) ers.trie.clear();
    return ers;
}

std::vector<Violation> check_correct(const RuleSet& rs) {
    std::vector<Violation> out;
    ExpandedRuleSet ers = expand(rs);

    for (const ExpandedRule& er : ers.rules) {
        const auto& s = er.lhs;
        const auto& t = er.rhs;
        int len = static_cast<int>(s.size());
        for (int i = 0; i < len; ++i) {
            bool dot_or_circ = s[i] == InputSymbol::Dot || s[i] == InputSymbol::Circ;
            bool plus_adjacent = (i > 0 && s[i - 1] == InputSymbol::Plus) ||
                                 (i + 1 < len && s[i + 1] == InputSymbol::Plus);
            if (dot_or_circ && !plus_adjacent) {
                bool guarded = t[i] == OutputSymbol::Plus;
                for (int j = std::max(0, i - 1); !guarded && j <= std::min(len - 1, i + 1); ++j)
                    guarded = t[j] == OutputSymbol::Times;
                if (!guarded) {
                    Violation v;
                    v.kind = ViolationKind::Undominated;
                    v.rule = er.source;
                    v.position = i + 1;
                    v.expanded = lhs_string(s);
                    v.message = "rule " + std::to_string(er.source + 1) + " (" +
                                to_string(rs.rules[er.source]) + "), expansion " +
                                v.expanded + ": position " + std::to_string(i + 1) +
                                " is not guaranteed a dominator";
                    out.push_back(std::move(v));
                }
            }
            if (t[i] == OutputSymbol::Plus && s[i] != InputSymbol::Circ) {
                Violation v;
                v.kind = ViolationKind::MateIncludeNotCirc;
                v.rule = er.source;
                v.position = i + 1;
                v.expanded = lhs_string(s);
                v.message = "rule " + std::to_string(er.source + 1) + " (" +
                            to_string(rs.rules[er.source]) + "), expansion " +
                            v.expanded + ": position " + std::to_string(i + 1) +
                            " writes P on a non-o input";
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

std::vector<Violation> check_complete(const RuleSet& rs) {
    std::vector<Violation> out;
    ExpandedRuleSet ers = expand(rs);
    const int max_len = ers.max_len;
    if (max_len > 30)
        throw std::invalid_argument("rule length over 30 not supported by the exact cover check");

    // Prefix-freeness, with the offending pair identified. Re-insert into a
    // private trie so we can name both rules.
    struct Node {
        std::array<int32_t, 4> child{-1, -1, -1, -1};
        int32_t rule = -1;
    };
    std::vector<Node> trie(1);
    for (size_t r = 0; r < ers.rules.size(); ++r) {
        const auto& lhs = ers.rules[r].lhs;
        int32_t node = 0;
        bool clashed = false;
        for (size_t i = 0; i < lhs.size() && !clashed; ++i) {
            if (trie[node].rule >= 0) {
                Violation v;
                v.kind = ViolationKind::PrefixOverlap;
                v.rule = ers.rules[trie[node].rule].source;
                v.other_rule = ers.rules[r].source;
                v.expanded = lhs_string(ers.rules[trie[node].rule].lhs);
                v.message = "lhs " + v.expanded + " (rule " + std::to_string(v.rule + 1) +
                            ") is a prefix of " + lhs_string(lhs) + " (rule " +
                            std::to_string(v.other_rule + 1) + ")";
                out.push_back(std::move(v));
                clashed = true;
                break;
            }
            int c = static_cast<int>(lhs[i]);
            if (trie[node].child[c] < 0) {
                trie[node].child[c] = static_cast<int32_t>(trie.size());
                trie.push_back({});
            }
            node = trie[node].child[c];
        }
        if (clashed) continue;
        bool is_interior = std::any_of(trie[node].child.begin(), trie[node].child.end(),
                                       [](int32_t c) { return c >= 0; });
        if (trie[node].rule >= 0 || is_interior) {
            int other = trie[node].rule;
            if (other < 0) {
                // Some longer rule passes through; find one below this node.
                int32_t walk = node;
                while (trie[walk].rule < 0)
                    for (int32_t c : trie[walk].child)
                        if (c >= 0) { walk = c; break; }
                other = trie[walk].rule;
            }
            Violation v;
            v.kind = ViolationKind::PrefixOverlap;
            v.rule = ers.rules[r].source;
            v.other_rule = ers.rules[other].source;
            v.expanded = lhs_string(lhs);
            v.message = "lhs " + v.expanded + " (rule " + std::to_string(v.rule + 1) +
                        ") overlaps " + lhs_string(ers.rules[other].lhs) + " (rule " +
                        std::to_string(v.other_rule + 1) + ")";
            out.push_back(std::move(v));
        } else {
            trie[node].rule = static_cast<int32_t>(r);
        }
    }

    // Exhaustiveness via the exact Kraft sum, scaled by 4^max_len.
    const unsigned __int128 full = static_cast<unsigned __int128>(1)
                                   << (2 * max_len);
    unsigned __int128 sum = 0;
    for (const auto& er : ers.rules)
        sum += static_cast<unsigned __int128>(1)
               << (2 * (max_len - static_cast<int>(er.lhs.size())));
    if (sum != full) {
        Violation v;
        v.kind = sum < full ? ViolationKind::KraftDeficit : ViolationKind::KraftSurplus;
        double ratio = static_cast<double>(sum) / static_cast<double>(full);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", ratio);
        v.message = std::string("expanded lhs set covers ") + buf + " of all input streams";
        out.push_back(std::move(v));
    }
    return out;
}

const ExpandedRule& match_prefix(const ExpandedRuleSet& ers,
                                 std::span<const InputSymbol> stream) {
    if (!ers.prefix_free)
        throw std::logic_error("match_prefix on a rule set that is not prefix-free");
    int32_t node = 0;
    for (size_t i = 0; i < stream.size(); ++i) {
        if (ers.trie[node].rule >= 0) return ers.rules[ers.trie[node].rule];
        node = ers.trie[node].child[static_cast<int>(stream[i])];
        if (node < 0)
            throw std::logic_error("no rule matches the stream; rule set is not complete");
    }
    if (ers.trie[node].rule >= 0) return ers.rules[ers.trie[node].rule];
    throw std::logic_error("stream shorter than the longest rule");
}

int sigma_tau_count(std::span<const InputSymbol> sigma,
                    std::span<const OutputSymbol> tau,
                    std::optional<InputSymbol> x,
                    std::optional<OutputSymbol> y) {
    int count = 0;
    for (size_t i = 0; i < sigma.size(); ++i)
        if ((!x || sigma[i] == *x) && (!y || tau[i] == *y)) ++count;
    return count;
}

}  // namespace domset
