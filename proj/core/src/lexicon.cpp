#include "sen/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sen {

namespace {

constexpr double kBoostUp = 0.293;
constexpr double kBoostDown = -0.293;

Lexicon make_base_lexicon() {
    Lexicon lex;
    const char* up[] = {
        "absolutely", "amazingly",  "awfully",      "completely",   "considerable",
        "considerably", "decidedly", "deeply",      "effing",       "enormous",
        "enormously", "entirely",   "especially",   "exceptional",  "exceptionally",
        "extreme",    "extremely",  "fabulously",   "flipping",     "flippin",
        "frackin",    "fracking",   "fricking",     "frickin",      "frigging",
        "friggin",    "fully",      "fuckin",       "fucking",      "fuggin",
        "fugging",    "greatly",    "hella",        "highly",       "hugely",
        "incredible", "incredibly", "intensely",    "major",        "majorly",
        "more",       "most",       "particularly", "purely",       "quite",
        "really",     "remarkably", "so",           "substantially", "thoroughly",
        "total",      "totally",    "tremendous",   "tremendously", "uber",
        "unbelievably", "unusually", "utter",       "utterly",      "very",
    };
    const char* down[] = {
        "almost",     "barely",     "hardly",   "just enough", "kind of",
        "kinda",      "kindof",     "kind-of",  "less",        "little",
        "marginal",   "marginally", "occasional", "occasionally", "partly",
        "scarce",     "scarcely",   "slight",   "slightly",    "somewhat",
        "sort of",    "sorta",      "sortof",   "sort-of",
    };
    for (const char* w : up) lex.booster_map.emplace(w, kBoostUp);
    for (const char* w : down) lex.booster_map.emplace(w, kBoostDown);

    const char* negations[] = {
        "aint",    "arent",   "cannot",  "cant",     "couldnt", "darent",
        "didnt",   "doesnt",  "ain't",   "aren't",   "can't",   "couldn't",
        "daren't", "didn't",  "doesn't", "dont",     "hadnt",   "hasnt",
        "havent",  "isnt",    "mightnt", "mustnt",   "neither", "don't",
        "hadn't",  "hasn't",  "haven't", "isn't",    "mightn't", "mustn't",
        "neednt",  "needn't", "never",   "none",     "nope",    "nor",
        "not",     "nothing", "nowhere", "oughtnt",  "shant",   "shouldnt",
        "uhuh",    "wasnt",   "werent",  "oughtn't", "shan't",  "shouldn't",
        "uh-uh",   "wasn't",  "weren't", "without",  "wont",    "wouldnt",
        "won't",   "wouldn't", "rarely", "seldom",   "despite",
    };
    for (const char* w : negations) lex.negation_set.insert(w);

    lex.special_cases = {
        {"the shit", 3.0},   {"the bomb", 3.0},      {"bad ass", 1.5},
        {"badass", 1.5},     {"bus stop", 0.0},      {"yeah right", -2.0},
        {"kiss of death", -1.5}, {"to die for", 3.0}, {"beating heart", 3.1},
        {"broken heart", -2.9},
    };
    return lex;
}

std::string to_lower_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

Lexicon empty_lexicon() { return make_base_lexicon(); }

Lexicon load_lexicon(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path);

    Lexicon lex = make_base_lexicon();
    std::string line;
    std::uint64_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw std::runtime_error("lexicon row " + std::to_string(row) +
                                     ": expected token<TAB>valence");
        }
        std::string token = to_lower_ascii(line.substr(0, tab));
        const auto rest = line.substr(tab + 1);
        const auto next_tab = rest.find('\t');
        const std::string valence_str =
            next_tab == std::string::npos ? rest : rest.substr(0, next_tab);
        double valence = 0.0;
        try {
            std::size_t consumed = 0;
            valence = std::stod(valence_str, &consumed);
            if (consumed != valence_str.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::runtime_error("lexicon row " + std::to_string(row) +
                                     ": non-numeric valence '" + valence_str + "'");
        }
        if (!std::isfinite(valence)) {
            throw std::runtime_error("lexicon row " + std::to_string(row) +
                                     ": non-finite valence");
        }
        auto [it, inserted] = lex.entries.insert_or_assign(std::move(token), valence);
        if (!inserted && warnings) {
            warnings->push_back("duplicate token '" + it->first + "' at row " +
                                std::to_string(row) + ", last value wins");
        }
    }
    if (in.bad()) throw std::runtime_error("I/O failure while reading " + path);
    return lex;
}

}  // namespace sen
