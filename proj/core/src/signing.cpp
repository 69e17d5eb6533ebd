#include "sen/signing.hpp"

#include <stdexcept>

namespace sen {

RelationshipStats aggregate_relationship(const std::string& ego_id,
                                         const std::string& alter_id,
                                         std::span<const SentimentLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("no interactions");
    RelationshipStats stats;
    stats.ego_id = ego_id;
    stats.alter_id = alter_id;
    for (const auto& label : labels) {
        ++stats.n_total;
        switch (label.polarity) {
            case Polarity::Negative: ++stats.n_negative; break;
            case Polarity::Positive: ++stats.n_positive; break;
            case Polarity::Neutral: ++stats.n_neutral; break;
        }
    }
    stats.negative_fraction =
        static_cast<double>(stats.n_negative) / static_cast<double>(stats.n_total);
    return stats;
}

SignedRelationship sign_relationship(const RelationshipStats& stats, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("sign threshold outside [0, 1]");
    }
    SignedRelationship rel;
    rel.stats = stats;
    rel.threshold_used = threshold;
    rel.sign = stats.negative_fraction > threshold ? RelationshipSign::Negative
                                                   : RelationshipSign::Positive;
    return rel;
}

}  // namespace sen
