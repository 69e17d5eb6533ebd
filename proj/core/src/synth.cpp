#include "sen/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace sen {

namespace {

constexpr double kCorridorLo = 0.8;
constexpr double kCorridorHi = 1.2;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic sampling layer; distributions are hand-rolled so output does
// not depend on the standard library's unspecified algorithms.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    bool bernoulli(double p) { return uniform01() < p; }

    std::uint64_t poisson(double lambda) {
        std::uint64_t total = 0;
        while (lambda > 400.0) {
            total += poisson_knuth(400.0);
            lambda -= 400.0;
        }
        return total + poisson_knuth(lambda);
    }

    std::uint64_t poisson_in(double lambda, std::uint64_t lo, std::uint64_t hi) {
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const std::uint64_t k = poisson(lambda);
            if (k >= lo && k <= hi) return k;
        }
        throw std::invalid_argument("infeasible plan: Poisson corridor [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) +
                                    "] never hit at rate " + std::to_string(lambda));
    }

private:
    std::uint64_t poisson_knuth(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    std::mt19937_64 engine_;
};

struct TextPools {
    std::vector<std::string> negative;
    std::vector<std::string> positive;
    std::vector<std::string> neutral;
};

TextPools verified_pools(const Lexicon& lexicon, const ScorerConfig& config) {
    TextPools pools;
    pools.negative = {
        "this is awful and I hate it",
        "what a terrible and disappointing mess",
        "worst decision ever, truly horrible",
        "that was a disgusting and rude reply",
        "I am so angry about this failure",
        "absolutely miserable experience, never again",
        "this broken update ruined everything",
        "such a pathetic and dishonest excuse",
        "horrible service and a useless answer",
        "I regret this, it hurts and it sucks",
        "the whole thread is toxic and depressing",
        "stop spreading these stupid lies",
    };
    pools.positive = {
        "this is wonderful and I love it",
        "what a fantastic and inspiring story",
        "best news ever, truly amazing",
        "that was a kind and helpful reply",
        "I am so happy about this success",
        "absolutely delightful experience, thanks a lot",
        "this brilliant update improved everything",
        "such a generous and honest answer",
        "excellent service and a great result",
        "I enjoyed this, it feels like a win",
        "the whole thread is friendly and supportive",
        "keep sharing these beautiful photos",
    };
    pools.neutral = {
        "the meeting moved to thursday afternoon",
        "posting the schedule for next week",
        "the train leaves from platform four",
        "new episode drops at nine tonight",
        "they changed the venue to the main hall",
        "the document is in the shared folder",
        "voting opens tomorrow at eight",
        "the bridge is closed for repairs until may",
    };
    for (const auto& text : pools.negative) {
        if (polarity_of(score_text(lexicon, config, text), config) != Polarity::Negative) {
            throw std::logic_error("negative pool text does not score negative: " + text);
        }
    }
    for (const auto& text : pools.positive) {
        if (polarity_of(score_text(lexicon, config, text), config) != Polarity::Positive) {
            throw std::logic_error("positive pool text does not score positive: " + text);
        }
    }
    for (const auto& text : pools.neutral) {
        if (polarity_of(score_text(lexicon, config, text), config) != Polarity::Neutral) {
            throw std::logic_error("neutral pool text does not score neutral: " + text);
        }
    }
    return pools;
}

std::uint64_t ring_size_draw(Sampler& rng, double mean_alters) {
    if (mean_alters <= 0.0) return 0;
    if (mean_alters <= 1.0) return 1;
    return 1 + rng.poisson(mean_alters - 1.0);
}

}  // namespace

SynthSpec dunbar_spec(std::uint64_t n_egos, double window_days, bool with_inactive,
                      std::uint64_t seed) {
    SynthSpec spec;
    spec.n_egos = n_egos;
    spec.window_days = window_days;
    spec.seed = seed;
    const double years = window_days / kDaysPerYear;

    const double rates[5] = {1250.0, 250.0, 50.0, 10.0, 2.0};
    const double sizes[5] = {1.5, 3.5, 10.0, 35.0, 100.0};
    const double neg_probs[5] = {0.45, 0.40, 0.30, 0.25, 0.15};
    for (int b = 0; b < 5; ++b) {
        SynthBand band;
        band.rate_per_year = rates[b];
        band.count_min =
            static_cast<std::uint64_t>(std::ceil(kCorridorLo * rates[b] * years));
        band.count_max =
            static_cast<std::uint64_t>(std::floor(kCorridorHi * rates[b] * years));
        band.mean_alters = sizes[b];
        band.negative_tie_prob = neg_probs[b];
        spec.bands.push_back(band);
    }
    if (with_inactive) {
        spec.inactive_mean_alters = 30.0;
        spec.inactive_negative_prob = 0.0;
    }
    validate_spec(spec);
    return spec;
}

EgonetConfig matching_egonet_config(const SynthSpec& spec) {
    EgonetConfig config;
    config.log_space = true;
    config.meanshift.bandwidth = spec.cluster_bandwidth_log;
    config.active_min_freq = spec.active_min_freq;
    return config;
}

void validate_spec(const SynthSpec& spec) {
    if (spec.n_egos == 0) throw std::invalid_argument("n_egos must be positive");
    if (spec.window_days <= 0.0) throw std::invalid_argument("window must be positive");
    if (spec.window_start_ts <= 0) throw std::invalid_argument("window start must be positive");
    if (spec.bands.empty() && spec.inactive_mean_alters <= 0.0) {
        throw std::invalid_argument("spec plants no alters");
    }
    const double years = spec.window_days / kDaysPerYear;
    const double h = spec.cluster_bandwidth_log;
    for (std::size_t b = 0; b < spec.bands.size(); ++b) {
        const auto& band = spec.bands[b];
        if (band.count_min < 1 || band.count_min > band.count_max) {
            throw std::invalid_argument("band corridor is empty");
        }
        if (band.negative_tie_prob < 0.0 || band.negative_tie_prob > 1.0) {
            throw std::invalid_argument("negative_tie_prob outside [0, 1]");
        }
        const double freq_lo = static_cast<double>(band.count_min) / years;
        if (freq_lo < spec.active_min_freq) {
            throw std::invalid_argument("infeasible plan: band " + std::to_string(b + 1) +
                                        " dips below the active frequency cut");
        }
        const double width = std::log(static_cast<double>(band.count_max)) -
                             std::log(static_cast<double>(band.count_min));
        if (width > h) {
            throw std::invalid_argument("infeasible plan: band " + std::to_string(b + 1) +
                                        " is wider than the clustering bandwidth");
        }
        if (b + 1 < spec.bands.size()) {
            const auto& outer = spec.bands[b + 1];
            if (outer.rate_per_year >= band.rate_per_year) {
                throw std::invalid_argument("bands must have descending rates");
            }
            const double gap = std::log(static_cast<double>(band.count_min)) -
                               std::log(static_cast<double>(outer.count_max));
            if (gap <= h) {
                throw std::invalid_argument(
                    "infeasible plan: gap between bands " + std::to_string(b + 1) +
                    " and " + std::to_string(b + 2) + " is within the bandwidth");
            }
            const double mode_gap = std::log(band.rate_per_year / outer.rate_per_year);
            if (mode_gap < 3.0 * h) {
                throw std::invalid_argument(
                    "infeasible plan: band rates are separated by less than three "
                    "bandwidths in log space");
            }
        }
    }
    if (spec.inactive_mean_alters > 0.0) {
        const double single_contact_freq = kDaysPerYear / spec.window_days;
        if (single_contact_freq >= spec.active_min_freq) {
            throw std::invalid_argument(
                "infeasible plan: window too short for below-threshold alters "
                "(one contact per window must fall under the active cut)");
        }
    }
    if (spec.negative_fraction_target <= spec.sign_threshold ||
        spec.negative_fraction_target > 1.0) {
        throw std::invalid_argument("negative_fraction_target must exceed the threshold");
    }
    if (spec.positive_fraction_target < 0.0 ||
        spec.positive_fraction_target > spec.sign_threshold) {
        throw std::invalid_argument("positive_fraction_target must not exceed the threshold");
    }
}

SynthCorpus generate_corpus(const SynthSpec& spec, const Lexicon& lexicon,
                            const ScorerConfig& scorer_config) {
    validate_spec(spec);
    const TextPools pools = verified_pools(lexicon, scorer_config);
    const double years = spec.window_days / kDaysPerYear;
    const std::int64_t window_seconds =
        static_cast<std::int64_t>(std::llround(spec.window_days * 86400.0));
    const std::int64_t window_end = spec.window_start_ts + window_seconds;

    SynthCorpus corpus;
    corpus.truth.seed = spec.seed;
    corpus.truth.sign_threshold = spec.sign_threshold;

    const InteractionKind directed_kinds[3] = {
        InteractionKind::Reply, InteractionKind::Mention, InteractionKind::QuoteRetweet};

    std::uint64_t retweet_text_cursor = 0;  // cycles all pools so some retweets carry
                                            // sentiment-laden text

    for (std::uint64_t e = 0; e < spec.n_egos; ++e) {
        Sampler rng(splitmix64(spec.seed ^ splitmix64(e + 1)));
        char ego_name[32];
        std::snprintf(ego_name, sizeof(ego_name), "ego%05llu",
                      static_cast<unsigned long long>(e + 1));
        TruthEgo truth_ego;
        truth_ego.ego_id = ego_name;

        struct TiePlan {
            int band;  // 0 = inactive
            std::uint64_t n;
            std::uint64_t n_neg;
        };
        std::vector<TiePlan> plans;
        for (std::size_t b = 0; b < spec.bands.size(); ++b) {
            const auto& band = spec.bands[b];
            const std::uint64_t ring_size = ring_size_draw(rng, band.mean_alters);
            truth_ego.ring_sizes.push_back(ring_size);
            for (std::uint64_t a = 0; a < ring_size; ++a) {
                TiePlan plan;
                plan.band = static_cast<int>(b) + 1;
                plan.n = rng.poisson_in(band.rate_per_year * years, band.count_min,
                                        band.count_max);
                const bool negative = rng.bernoulli(band.negative_tie_prob);
                const double target = negative ? spec.negative_fraction_target
                                               : spec.positive_fraction_target;
                if (spec.exact_fractions) {
                    const double exact = target * static_cast<double>(plan.n);
                    if (std::fabs(exact - std::round(exact)) > 1e-9) {
                        throw std::invalid_argument(
                            "infeasible plan: fraction " + std::to_string(target) +
                            " with " + std::to_string(plan.n) + " interactions");
                    }
                }
                std::uint64_t n_neg = static_cast<std::uint64_t>(
                    std::llround(target * static_cast<double>(plan.n)));
                n_neg = std::min(n_neg, plan.n);
                // Nudge the count until the signing rule reproduces the
                // planted sign exactly under double arithmetic.
                if (negative) {
                    if (n_neg == 0) n_neg = 1;
                    while (static_cast<double>(n_neg) / static_cast<double>(plan.n) <=
                           spec.sign_threshold) {
                        ++n_neg;
                    }
                } else {
                    while (n_neg > 0 &&
                           static_cast<double>(n_neg) / static_cast<double>(plan.n) >
                               spec.sign_threshold) {
                        --n_neg;
                    }
                }
                plan.n_neg = n_neg;
                plans.push_back(plan);
            }
        }
        if (spec.inactive_mean_alters > 0.0) {
            const std::uint64_t pool_size = ring_size_draw(rng, spec.inactive_mean_alters);
            for (std::uint64_t a = 0; a < pool_size; ++a) {
                TiePlan plan;
                plan.band = 0;
                plan.n = 1;
                plan.n_neg = rng.bernoulli(spec.inactive_negative_prob) ? 1 : 0;
                plans.push_back(plan);
            }
        }

        std::vector<InteractionRecord> ego_records;
        std::uint64_t alter_index = 0;
        for (const auto& plan : plans) {
            ++alter_index;
            char alter_name[48];
            std::snprintf(alter_name, sizeof(alter_name), "%s_a%04llu", ego_name,
                          static_cast<unsigned long long>(alter_index));

            TruthTie tie;
            tie.alter_id = alter_name;
            tie.band = plan.band;
            tie.n_interactions = plan.n;
            tie.negative_fraction =
                static_cast<double>(plan.n_neg) / static_cast<double>(plan.n);
            tie.sign = tie.negative_fraction > spec.sign_threshold
                           ? RelationshipSign::Negative
                           : RelationshipSign::Positive;
            truth_ego.ties.push_back(tie);

            for (std::uint64_t slot = 0; slot < plan.n; ++slot) {
                InteractionRecord rec;
                rec.ego_id = ego_name;
                rec.alter_id = alter_name;
                rec.timestamp =
                    slot == 0 ? spec.window_start_ts
                              : spec.window_start_ts + 1 +
                                    static_cast<std::int64_t>(rng.below(
                                        static_cast<std::uint64_t>(window_end -
                                                                   spec.window_start_ts)));
                if (slot < plan.n_neg) {
                    rec.kind = directed_kinds[slot % 3];
                    rec.text = pools.negative[rng.below(pools.negative.size())];
                } else {
                    const std::uint64_t j = slot - plan.n_neg;
                    if (j % 3 == 0) {
                        rec.kind = InteractionKind::Retweet;
                        const std::uint64_t pick = retweet_text_cursor++ % 3;
                        const auto& pool = pick == 0   ? pools.negative
                                           : pick == 1 ? pools.positive
                                                       : pools.neutral;
                        rec.text = pool[rng.below(pool.size())];
                    } else if (j % 3 == 1) {
                        rec.kind = directed_kinds[j % 2];
                        rec.text = pools.positive[rng.below(pools.positive.size())];
                    } else {
                        rec.kind = directed_kinds[(j + 1) % 2];
                        rec.text = pools.neutral[rng.below(pools.neutral.size())];
                    }
                }
                ego_records.push_back(std::move(rec));
            }
        }
        std::sort(ego_records.begin(), ego_records.end(),
                  [](const InteractionRecord& a, const InteractionRecord& b) {
                      if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                      return a.alter_id < b.alter_id;
                  });
        corpus.records.insert(corpus.records.end(),
                              std::make_move_iterator(ego_records.begin()),
                              std::make_move_iterator(ego_records.end()));
        corpus.truth.egos.push_back(std::move(truth_ego));
    }
    return corpus;
}

DiscrepancyReport verify_pipeline(const GroundTruth& truth,
                                  std::span<const SignedRelationship> edges,
                                  std::span<const EgoNetwork> egonets) {
    DiscrepancyReport report;

    std::unordered_map<std::string, RelationshipSign> edge_signs;
    edge_signs.reserve(edges.size());
    for (const auto& edge : edges) {
        edge_signs.emplace(edge.stats.ego_id + "\t" + edge.stats.alter_id, edge.sign);
    }
    std::unordered_map<std::string, const EgoNetwork*> nets;
    for (const auto& net : egonets) nets.emplace(net.ego_id, &net);

    for (const auto& ego : truth.egos) {
        const auto net_it = nets.find(ego.ego_id);
        std::unordered_map<std::string, int> ring_of;
        if (net_it != nets.end()) {
            const auto& rings = net_it->second->rings;
            for (std::size_t r = 0; r < rings.size(); ++r) {
                for (const auto& alter : rings[r].alters) {
                    ring_of[alter] = static_cast<int>(r) + 1;
                }
            }
        }

        std::uint64_t planted_circles = 0;
        for (std::size_t b = 0; b < ego.ring_sizes.size(); ++b) {
            if (ego.ring_sizes[b] > 0) ++planted_circles;
        }
        if (planted_circles > 0) {
            if (net_it == nets.end()) {
                throw std::invalid_argument("id mismatch: no ego network for " +
                                            ego.ego_id);
            }
            if (net_it->second->optimum_circles != planted_circles) {
                report.circle_mismatches.push_back(
                    ego.ego_id + ": planted " + std::to_string(planted_circles) +
                    " circles, recovered " +
                    std::to_string(net_it->second->optimum_circles));
            }
        }

        for (const auto& tie : ego.ties) {
            const auto sign_it = edge_signs.find(ego.ego_id + "\t" + tie.alter_id);
            if (sign_it == edge_signs.end()) {
                throw std::invalid_argument("id mismatch: no signed edge for " +
                                            ego.ego_id + " -> " + tie.alter_id);
            }
            if (sign_it->second != tie.sign) {
                report.sign_mismatches.push_back(
                    ego.ego_id + " -> " + tie.alter_id + ": planted " +
                    std::string(to_string(tie.sign)) + ", got " +
                    std::string(to_string(sign_it->second)));
            }
            const auto ring_it = ring_of.find(tie.alter_id);
            if (tie.band == 0) {
                if (ring_it != ring_of.end()) {
                    report.band_mismatches.push_back(
                        ego.ego_id + " -> " + tie.alter_id +
                        ": planted below the active cut but assigned to ring " +
                        std::to_string(ring_it->second));
                }
            } else if (ring_it == ring_of.end()) {
                report.band_mismatches.push_back(
                    ego.ego_id + " -> " + tie.alter_id + ": planted band " +
                    std::to_string(tie.band) + " but missing from the ego network");
            } else if (ring_it->second != tie.band) {
                report.band_mismatches.push_back(
                    ego.ego_id + " -> " + tie.alter_id + ": planted band " +
                    std::to_string(tie.band) + ", recovered ring " +
                    std::to_string(ring_it->second));
            }
        }
    }
    return report;
}

}  // namespace sen
