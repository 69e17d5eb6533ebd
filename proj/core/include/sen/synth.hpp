#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sen/egonet.hpp"
#include "sen/interaction.hpp"
#include "sen/lexicon.hpp"
#include "sen/sentiment.hpp"
#include "sen/signing.hpp"

namespace sen {

/// One frequency band of the planted circle structure. Tie interaction
/// counts are Poisson draws at rate_per_year, rejected into the
/// [count_min, count_max] corridor so realized frequencies stay inside a
/// known interval and bands cannot overlap.
struct SynthBand {
    double rate_per_year = 0.0;
    std::uint64_t count_min = 1;
    std::uint64_t count_max = 1;
    double mean_alters = 1.0;       // ring size is 1 + Poisson(mean_alters - 1)
    double negative_tie_prob = 0.0;
};

struct SynthSpec {
    std::uint64_t n_egos = 100;
    double window_days = 438.3;                  // observation window length
    std::int64_t window_start_ts = 1577836800;  // 2020-01-01T00:00:00Z
    std::vector<SynthBand> bands;               // inner to outer, descending rate
    double inactive_mean_alters = 0.0;          // single-contact alters below the cut
    double inactive_negative_prob = 0.0;
    double negative_fraction_target = 0.45;     // negative share on negative ties
    double positive_fraction_target = 0.05;     // negative share on positive ties
    double sign_threshold = kGoldenThreshold;
    double active_min_freq = kActiveMinFreq;
    double cluster_bandwidth_log = 0.5;         // log-space bandwidth the plan targets
    bool exact_fractions = false;  // require target*count to be integral per tie
    std::uint64_t seed = 42;
};

/// Dunbar-tuned defaults: five bands with expected ring sizes
/// 1.5/3.5/10/35/100 (cumulative 1.5/5/15/50/150) at rate ratio 5, plus an
/// optional pool of below-threshold alters (needs a window over one year).
SynthSpec dunbar_spec(std::uint64_t n_egos, double window_days, bool with_inactive,
                      std::uint64_t seed);

/// Clustering settings matched to a spec's planted geometry (log space,
/// fixed bandwidth).
EgonetConfig matching_egonet_config(const SynthSpec& spec);

/// Throws std::invalid_argument when the band plan cannot be recovered by
/// the matched clustering settings: corridors must sit above the active
/// cut, band widths must stay below the bandwidth, gaps must exceed it, and
/// consecutive band rates must be separated by at least three bandwidths in
/// log space.
void validate_spec(const SynthSpec& spec);

struct TruthTie {
    std::string alter_id;
    int band = 0;  // 1-based ring index, 0 = below the active cut
    RelationshipSign sign = RelationshipSign::Positive;
    double negative_fraction = 0.0;
    std::uint64_t n_interactions = 0;
};

struct TruthEgo {
    std::string ego_id;
    std::vector<std::uint64_t> ring_sizes;  // inner to outer
    std::vector<TruthTie> ties;
};

struct GroundTruth {
    std::uint64_t seed = 0;
    double sign_threshold = kGoldenThreshold;
    std::vector<TruthEgo> egos;
};

struct SynthCorpus {
    std::vector<InteractionRecord> records;
    GroundTruth truth;
};

/// Deterministic given spec.seed. Texts are drawn from pools verified
/// against the supplied scorer at generation time, and per-tie negative
/// counts are chosen so the realized label fraction matches the planted
/// sign exactly. Each tie opens at the window start so planted frequencies
/// are exact. Throws on infeasible plans.
SynthCorpus generate_corpus(const SynthSpec& spec, const Lexicon& lexicon,
                            const ScorerConfig& scorer_config);

struct DiscrepancyReport {
    std::vector<std::string> sign_mismatches;
    std::vector<std::string> band_mismatches;
    std::vector<std::string> circle_mismatches;

    bool empty() const {
        return sign_mismatches.empty() && band_mismatches.empty() &&
               circle_mismatches.empty();
    }
    std::size_t total() const {
        return sign_mismatches.size() + band_mismatches.size() +
               circle_mismatches.size();
    }
};

/// Compares pipeline outputs against the planted truth. Throws when an ego
/// or tie present in the truth is missing from the outputs (id mismatch);
/// genuine disagreements are listed in the report.
DiscrepancyReport verify_pipeline(const GroundTruth& truth,
                                  std::span<const SignedRelationship> edges,
                                  std::span<const EgoNetwork> egonets);

}  // namespace sen
