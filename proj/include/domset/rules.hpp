#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace domset {

// Input labels carried by path vertices. The declaration order fixes the
// canonical expansion order of wildcards (Plus < Times < Dot < Circ).
enum class InputSymbol : uint8_t { Plus, Times, Dot, Circ };

// Output labels written by rule application: Plus = "include my mate",
// Times = "include me", Dot = "dominated locally".
enum class OutputSymbol : uint8_t { Plus, Times, Dot };

inline constexpr int kInputSymbolCount = 4;
inline constexpr int kOutputSymbolCount = 3;

char to_char(InputSymbol s);
char to_char(OutputSymbol s);

// A left-hand-side position: a concrete input symbol or the wildcard.
class PatternSymbol {
public:
    constexpr PatternSymbol(InputSymbol s) : code_(static_cast<uint8_t>(s)) {}
    static constexpr PatternSymbol wildcard() { return PatternSymbol(kWild); }

    constexpr bool is_wildcard() const { return code_ == kWild; }
    constexpr InputSymbol symbol() const { return static_cast<InputSymbol>(code_); }
    constexpr bool matches(InputSymbol s) const {
        return is_wildcard() || symbol() == s;
    }

    friend constexpr bool operator==(PatternSymbol, PatternSymbol) = default;

private:
    static constexpr uint8_t kWild = 4;
    constexpr explicit PatternSymbol(uint8_t code) : code_(code) {}
    uint8_t code_;
};

struct Rule {
    std::vector<PatternSymbol> lhs;
    std::vector<OutputSymbol> rhs;

    bool operator==(const Rule&) const = default;
};

struct RuleSet {
    std::string name;
    std::vector<Rule> rules;

    // Longest left-hand side in the set.
    int max_rule_len() const;
};

// A rule with all wildcards instantiated, plus cached symbol counts the
// probability analysis reads in its inner loop.
struct ExpandedRule {
    std::vector<InputSymbol> lhs;
    std::vector<OutputSymbol> rhs;
    int source = 0;                       // index of the originating rule
    std::array<int, 3> out_count{};      // positions of each output symbol
    std::array<int, 3> circ_out_count{}; // ... restricted to Circ input positions
};

struct ExpandedRuleSet {
    std::vector<ExpandedRule> rules;
    int max_len = 0;

    // 4-way prefix trie over expanded left-hand sides; empty when the set is
    // not prefix-free (match_prefix then refuses to run).
    struct TrieNode {
        std::array<int32_t, 4> child{-1, -1, -1, -1};
        int32_t rule = -1;
    };
    std::vector<TrieNode> trie;
    bool prefix_free = false;
};

enum class ViolationKind {
    Undominated,        // a . or o position no rule window guards
    MateIncludeNotCirc, // output Plus on an input that is not Circ
    PrefixOverlap,      // one expanded lhs is a prefix of another
    KraftDeficit,       // expanded lhs set covers too little
    KraftSurplus,       // expanded lhs set covers too much
};

struct Violation {
    ViolationKind kind;
    int rule = -1;       // source rule index, 0-based
    int other_rule = -1; // second rule for overlaps
    int position = 0;    // 1-based position within the rule, 0 if n/a
    std::string expanded; // offending wildcard-free lhs, for display
    std::string message;
};

struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    int line;
};

// Rule file format: one `LHS -> RHS` per line, `#` starts a comment, blank
// lines are skipped; whitespace inside either side is ignored.
RuleSet parse_rule_set(std::string_view text, std::string name = "rules");
RuleSet load_rule_set(const std::string& path);
std::string to_text(const RuleSet& rs);
std::string to_string(const Rule& rule);
std::string lhs_string(std::span<const InputSymbol> lhs);

// Wildcard instantiation in canonical symbol order; a rule with w wildcards
// yields 4^w expanded rules.
ExpandedRuleSet expand(const RuleSet& rs);

std::vector<Violation> check_correct(const RuleSet& rs);
std::vector<Violation> check_complete(const RuleSet& rs);

// The unique expanded rule whose lhs is a prefix of the stream. Requires a
// prefix-free set and stream.size() >= max_len.
const ExpandedRule& match_prefix(const ExpandedRuleSet& ers,
                                 std::span<const InputSymbol> stream);

// Number of positions where sigma matches x and tau matches y; nullopt acts
// as the wildcard on either side.
int sigma_tau_count(std::span<const InputSymbol> sigma,
                    std::span<const OutputSymbol> tau,
                    std::optional<InputSymbol> x,
                    std::optional<OutputSymbol> y);

}  // namespace domset
