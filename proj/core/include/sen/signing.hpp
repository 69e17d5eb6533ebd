#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "sen/sentiment.hpp"

namespace sen {

struct RelationshipStats {
    std::string ego_id;
    std::string alter_id;
    std::uint64_t n_total = 0;
    std::uint64_t n_negative = 0;
    std::uint64_t n_positive = 0;
    std::uint64_t n_neutral = 0;
    double negative_fraction = 0.0;
};

enum class RelationshipSign { Positive, Negative };

inline std::string_view to_string(RelationshipSign s) {
    return s == RelationshipSign::Negative ? "negative" : "positive";
}

struct SignedRelationship {
    RelationshipStats stats;
    RelationshipSign sign = RelationshipSign::Positive;
    double threshold_used = 0.0;
};

/// The golden interaction threshold: roughly one negative interaction per
/// five positive ones. A relationship whose negative fraction strictly
/// exceeds this is labelled negative; equal or lower stays positive.
inline constexpr double kGoldenThreshold = 0.17;

/// Counts a relationship's interaction labels. Neutral includes forced
/// neutral retweets, which stay in the denominator and dilute the fraction.
/// Throws on an empty sequence.
RelationshipStats aggregate_relationship(const std::string& ego_id,
                                         const std::string& alter_id,
                                         std::span<const SentimentLabel> labels);

SignedRelationship sign_relationship(const RelationshipStats& stats,
                                     double threshold = kGoldenThreshold);

}  // namespace sen
