#pragma once

#include <string>
#include <string_view>

#include "sen/interaction.hpp"
#include "sen/lexicon.hpp"

namespace sen {

enum class Polarity { Negative, Neutral, Positive };

inline std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::Negative: return "negative";
        case Polarity::Neutral: return "neutral";
        case Polarity::Positive: return "positive";
    }
    return "neutral";
}

struct SentimentLabel {
    double compound = 0.0;  // in [-1, 1]
    Polarity polarity = Polarity::Neutral;
    bool forced_neutral = false;  // true for plain retweets
};

struct ScorerConfig {
    double pos_threshold = 0.05;
    double neg_threshold = 0.05;
    double normalization_alpha = 15.0;
};

/// Lexicon-and-rules compound score for one short text, in [-1, 1].
///
/// Tokens are whitespace-split, @handles and URLs dropped, and leading and
/// trailing punctuation stripped from tokens longer than two characters
/// (which preserves emoticons and contractions). Rules applied on top of
/// the valence lookup: negation within a three-token window (factor -0.74,
/// with the never-so/never-this 1.25 amplifier and the without-doubt
/// exception), booster increments of +/-0.293 damped by 0.95 and 0.9 with
/// distance, an ALL-CAPS adjustment of +/-0.733 when the text mixes cases,
/// a handful of fixed idioms, "least" negation, reweighting around a
/// contrastive "but" (0.5 before, 1.5 after), and up to three exclamation
/// marks adding 0.292 each to a non-zero total. The raw sum x is mapped to
/// x/sqrt(x^2 + alpha). Deterministic and total: unknown-token or empty
/// text scores 0.
double score_text(const Lexicon& lexicon, const ScorerConfig& config,
                  std::string_view text);

Polarity polarity_of(double compound, const ScorerConfig& config);

/// Plain retweets get a forced neutral label (the ego did not write the
/// text); every other kind is scored from the record text.
SentimentLabel label_interaction(const InteractionRecord& record,
                                 const Lexicon& lexicon, const ScorerConfig& config);

}  // namespace sen
