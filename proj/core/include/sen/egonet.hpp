#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sen/interaction.hpp"
#include "sen/meanshift.hpp"

namespace sen {

struct TieFrequency {
    std::string ego_id;
    std::string alter_id;
    std::uint64_t n_interactions = 0;
    double duration_days = 0.0;
    double freq_per_year = 0.0;
};

inline constexpr double kDaysPerYear = 365.25;
inline constexpr double kDurationFloorDays = 30.0;
inline constexpr double kActiveMinFreq = 1.0;  // contacts per year

struct EgonetConfig {
    MeanShiftConfig meanshift;
    bool log_space = false;       // cluster on log frequencies
    double active_min_freq = kActiveMinFreq;
    double duration_floor_days = kDurationFloorDays;
};

struct Ring {
    double mode_freq = 0.0;                // representative frequency (per year)
    std::vector<std::string> alters;       // descending frequency within the ring
};

/// An ego's clustered active network. Rings are ordered by descending mode
/// frequency; circle sizes are cumulative (circle k contains rings 1..k),
/// so the last circle size equals the active network size.
struct EgoNetwork {
    std::string ego_id;
    std::vector<Ring> rings;
    std::vector<std::uint64_t> circle_sizes;
    std::uint64_t optimum_circles = 0;
    std::uint64_t active_size = 0;
    bool clustering_converged = true;
};

/// Interaction frequency of one ego-alter pair over the observation period.
/// Duration runs from the pair's first interaction to observation_end with a
/// floor (default 30 days) against near-zero denominators. Timestamps need
/// not be sorted; the set must be non-empty and observation_end must not
/// precede the last interaction.
TieFrequency tie_frequency(const std::string& ego_id, const std::string& alter_id,
                           std::span<const std::int64_t> timestamps,
                           std::int64_t observation_end,
                           double duration_floor_days = kDurationFloorDays);

/// Alters contacted at least min_freq times per year (inclusive), in
/// descending frequency order (ties broken by alter id for determinism).
std::vector<TieFrequency> active_alters(std::vector<TieFrequency> freqs,
                                        double min_freq = kActiveMinFreq);

/// Clusters an ego's active ties into concentric circles. Expects the input
/// in descending frequency order as produced by active_alters. Degenerate
/// inputs (a single alter, or identical frequencies that defeat the
/// bandwidth estimate) produce a single ring. Throws on an empty active set.
EgoNetwork build_ego_network(const std::string& ego_id,
                             std::span<const TieFrequency> active,
                             const EgonetConfig& config);

}  // namespace sen
