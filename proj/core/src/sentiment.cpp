#include "sen/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

namespace sen {

namespace {

constexpr double kCapsBoost = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kExclamationUnit = 0.292;
constexpr int kExclamationCap = 3;

// Mirrors Python string.punctuation.
bool is_punct(char c) {
    static const std::string punct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
    return punct.find(c) != std::string::npos;
}

bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

// Python str.isupper over ASCII letters: at least one letter, none lowercase.
bool is_upper_word(const std::string& w) {
    bool has_alpha = false;
    for (char c : w) {
        if (!is_ascii_alpha(c)) continue;
        has_alpha = true;
        if (c >= 'a' && c <= 'z') return false;
    }
    return has_alpha;
}

bool looks_like_url(const std::string& low) {
    return low.rfind("http://", 0) == 0 || low.rfind("https://", 0) == 0 ||
           low.rfind("www.", 0) == 0;
}

// Whitespace split, @handles and URLs dropped, then leading/trailing
// punctuation stripped unless the remainder is two chars or fewer (keeps
// emoticons like ":)" intact).
std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        std::string raw(text.substr(start, i - start));
        const std::string low = lower(raw);
        if (raw.size() > 1 && raw[0] == '@') continue;
        if (looks_like_url(low)) continue;
        std::size_t b = 0, e = raw.size();
        while (b < e && is_punct(raw[b])) ++b;
        while (e > b && is_punct(raw[e - 1])) --e;
        if (e - b <= 2) {
            tokens.push_back(std::move(raw));
        } else {
            tokens.push_back(raw.substr(b, e - b));
        }
    }
    return tokens;
}

bool allcap_differential(const std::vector<std::string>& words) {
    std::size_t allcaps = 0;
    for (const auto& w : words) {
        if (is_upper_word(w)) ++allcaps;
    }
    const std::size_t diff = words.size() - allcaps;
    return diff > 0 && diff < words.size();
}

bool negated(const Lexicon& lex, const std::string& low_word) {
    if (lex.negation_set.count(low_word)) return true;
    return low_word.find("n't") != std::string::npos;
}

double scalar_inc_dec(const Lexicon& lex, const std::string& word, double valence,
                      bool cap_diff) {
    double scalar = 0.0;
    const auto it = lex.booster_map.find(lower(word));
    if (it != lex.booster_map.end()) {
        scalar = it->second;
        if (valence < 0) scalar = -scalar;
        if (is_upper_word(word) && cap_diff) {
            scalar += valence > 0 ? kCapsBoost : -kCapsBoost;
        }
    }
    return scalar;
}

double negation_check(const Lexicon& lex, double valence,
                      const std::vector<std::string>& low, int start_i, int i) {
    if (start_i == 0) {
        if (negated(lex, low[i - 1])) valence *= kNegationScalar;
    }
    if (start_i == 1) {
        if (low[i - 2] == "never" && (low[i - 1] == "so" || low[i - 1] == "this")) {
            valence *= 1.25;
        } else if (low[i - 2] == "without" && low[i - 1] == "doubt") {
            // no change
        } else if (negated(lex, low[i - 2])) {
            valence *= kNegationScalar;
        }
    }
    if (start_i == 2) {
        if (low[i - 3] == "never" &&
            (low[i - 2] == "so" || low[i - 2] == "this" || low[i - 1] == "so" ||
             low[i - 1] == "this")) {
            valence *= 1.25;
        } else if (low[i - 3] == "without" &&
                   (low[i - 2] == "doubt" || low[i - 1] == "doubt")) {
            // no change
        } else if (negated(lex, low[i - 3])) {
            valence *= kNegationScalar;
        }
    }
    return valence;
}

double special_idioms_check(const Lexicon& lex, double valence,
                            const std::vector<std::string>& low, int i) {
    const std::string onezero = low[i - 1] + " " + low[i];
    const std::string twoonezero = low[i - 2] + " " + low[i - 1] + " " + low[i];
    const std::string twoone = low[i - 2] + " " + low[i - 1];
    const std::string threetwoone = low[i - 3] + " " + low[i - 2] + " " + low[i - 1];
    const std::string threetwo = low[i - 3] + " " + low[i - 2];
    for (const std::string* seq : {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
        const auto it = lex.special_cases.find(*seq);
        if (it != lex.special_cases.end()) {
            valence = it->second;
            break;
        }
    }
    for (const std::string* n_gram : {&threetwoone, &threetwo, &twoone}) {
        const auto it = lex.booster_map.find(*n_gram);
        if (it != lex.booster_map.end()) valence += it->second;
    }
    return valence;
}

double least_check(const Lexicon& lex, double valence,
                   const std::vector<std::string>& low, int i) {
    if (i > 1 && !lex.contains(low[i - 1]) && low[i - 1] == "least") {
        if (low[i - 2] != "at" && low[i - 2] != "very") valence *= kNegationScalar;
    } else if (i > 0 && !lex.contains(low[i - 1]) && low[i - 1] == "least") {
        valence *= kNegationScalar;
    }
    return valence;
}

double sentiment_valence(const Lexicon& lex, const std::vector<std::string>& words,
                         const std::vector<std::string>& low, bool cap_diff, int i) {
    const std::string& item_low = low[i];
    const auto entry = lex.entries.find(item_low);
    if (entry == lex.entries.end()) return 0.0;
    double valence = entry->second;

    // "no" immediately before a lexicon word acts as a negator, not a word.
    if (item_low == "no" && i != static_cast<int>(words.size()) - 1 &&
        lex.contains(low[i + 1])) {
        valence = 0.0;
    }
    if ((i > 0 && low[i - 1] == "no") || (i > 1 && low[i - 2] == "no") ||
        (i > 2 && low[i - 3] == "no" && (low[i - 1] == "or" || low[i - 1] == "nor"))) {
        valence = entry->second * kNegationScalar;
    }

    if (is_upper_word(words[i]) && cap_diff) {
        valence += valence > 0 ? kCapsBoost : -kCapsBoost;
    }

    for (int start_i = 0; start_i < 3; ++start_i) {
        if (i > start_i && !lex.contains(low[i - (start_i + 1)])) {
            double s = scalar_inc_dec(lex, words[i - (start_i + 1)], valence, cap_diff);
            if (start_i == 1 && s != 0.0) s *= 0.95;
            if (start_i == 2 && s != 0.0) s *= 0.9;
            valence += s;
            valence = negation_check(lex, valence, low, start_i, i);
            if (start_i == 2) valence = special_idioms_check(lex, valence, low, i);
        }
    }
    return least_check(lex, valence, low, i);
}

}  // namespace

double score_text(const Lexicon& lexicon, const ScorerConfig& config,
                  std::string_view text) {
    const std::vector<std::string> words = tokenize(text);
    if (words.empty()) return 0.0;
    std::vector<std::string> low;
    low.reserve(words.size());
    for (const auto& w : words) low.push_back(lower(w));

    const bool cap_diff = allcap_differential(words);
    const int n = static_cast<int>(words.size());
    std::vector<double> sentiments;
    sentiments.reserve(words.size());
    for (int i = 0; i < n; ++i) {
        if (lexicon.booster_map.count(low[i])) {
            sentiments.push_back(0.0);
            continue;
        }
        if (i < n - 1 && low[i] == "kind" && low[i + 1] == "of") {
            sentiments.push_back(0.0);
            continue;
        }
        sentiments.push_back(sentiment_valence(lexicon, words, low, cap_diff, i));
    }

    const auto but = std::find(low.begin(), low.end(), "but");
    if (but != low.end()) {
        const int bi = static_cast<int>(but - low.begin());
        for (int si = 0; si < n; ++si) {
            if (si < bi) sentiments[si] *= 0.5;
            else if (si > bi) sentiments[si] *= 1.5;
        }
    }

    double total = 0.0;
    for (double s : sentiments) total += s;

    int exclamations = static_cast<int>(std::count(text.begin(), text.end(), '!'));
    exclamations = std::min(exclamations, kExclamationCap);
    const double emphasis = exclamations * kExclamationUnit;
    if (total > 0) total += emphasis;
    else if (total < 0) total -= emphasis;

    const double norm = total / std::sqrt(total * total + config.normalization_alpha);
    return std::clamp(norm, -1.0, 1.0);
}

Polarity polarity_of(double compound, const ScorerConfig& config) {
    if (compound <= -config.neg_threshold) return Polarity::Negative;
    if (compound >= config.pos_threshold) return Polarity::Positive;
    return Polarity::Neutral;
}

SentimentLabel label_interaction(const InteractionRecord& record,
                                 const Lexicon& lexicon, const ScorerConfig& config) {
    if (record.kind == InteractionKind::Retweet) {
        return SentimentLabel{0.0, Polarity::Neutral, true};
    }
    const double compound = score_text(lexicon, config, record.text);
    return SentimentLabel{compound, polarity_of(compound, config), false};
}

}  // namespace sen
