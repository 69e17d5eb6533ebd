#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sen {

/// Token valences plus the rule tables (boosters, negations, idioms) used by
/// the scorer. Valence entries come from a tab-separated file; the rule
/// tables are built in and shared by every lexicon instance.
struct Lexicon {
    std::unordered_map<std::string, double> entries;
    std::unordered_map<std::string, double> booster_map;
    std::unordered_set<std::string> negation_set;
    std::unordered_map<std::string, double> special_cases;

    bool contains(const std::string& token) const { return entries.count(token) != 0; }
};

/// The standard rule tables without any valence entries.
Lexicon empty_lexicon();

/// Loads a lexicon file: one entry per line, token<TAB>mean_valence, any
/// further columns ignored. Tokens are lowercased; a duplicate token keeps
/// the last value and appends a warning. Throws on unreadable files and on
/// rows whose valence does not parse (message carries the row number).
Lexicon load_lexicon(const std::string& path,
                     std::vector<std::string>* warnings = nullptr);

}  // namespace sen
