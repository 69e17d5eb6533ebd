#include "sen/egonet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sen {

TieFrequency tie_frequency(const std::string& ego_id, const std::string& alter_id,
                           std::span<const std::int64_t> timestamps,
                           std::int64_t observation_end, double duration_floor_days) {
    if (timestamps.empty()) throw std::invalid_argument("tie has no interactions");
    const auto [min_it, max_it] =
        std::minmax_element(timestamps.begin(), timestamps.end());
    if (observation_end < *max_it) {
        throw std::invalid_argument("observation_end precedes last interaction");
    }
    TieFrequency tie;
    tie.ego_id = ego_id;
    tie.alter_id = alter_id;
    tie.n_interactions = timestamps.size();
    const double raw_days =
        static_cast<double>(observation_end - *min_it) / 86400.0;
    tie.duration_days = std::max(raw_days, duration_floor_days);
    tie.freq_per_year =
        static_cast<double>(tie.n_interactions) * kDaysPerYear / tie.duration_days;
    return tie;
}

std::vector<TieFrequency> active_alters(std::vector<TieFrequency> freqs,
                                        double min_freq) {
    std::erase_if(freqs, [&](const TieFrequency& t) { return t.freq_per_year < min_freq; });
    std::sort(freqs.begin(), freqs.end(), [](const TieFrequency& a, const TieFrequency& b) {
        if (a.freq_per_year != b.freq_per_year) return a.freq_per_year > b.freq_per_year;
        return a.alter_id < b.alter_id;
    });
    return freqs;
}

EgoNetwork build_ego_network(const std::string& ego_id,
                             std::span<const TieFrequency> active,
                             const EgonetConfig& config) {
    if (active.empty()) throw std::invalid_argument("empty active set");

    EgoNetwork net;
    net.ego_id = ego_id;
    net.active_size = active.size();

    std::vector<double> values;
    values.reserve(active.size());
    for (const auto& tie : active) {
        values.push_back(config.log_space ? std::log(tie.freq_per_year)
                                          : tie.freq_per_year);
    }

    MeanShiftResult clusters;
    bool degenerate = active.size() == 1;
    if (!degenerate && config.meanshift.bandwidth <= 0.0) {
        // Identical frequencies defeat the bandwidth estimate; fall back to
        // a single ring.
        try {
            estimate_bandwidth(values, config.meanshift.quantile);
        } catch (const std::domain_error&) {
            degenerate = true;
        }
    }
    if (degenerate) {
        clusters.assignment.assign(active.size(), 0);
        clusters.modes.assign(1, 0.0);
        clusters.cluster_sizes.assign(1, active.size());
        double sum = 0.0;
        for (double v : values) sum += v;
        clusters.modes[0] = sum / static_cast<double>(values.size());
    } else {
        clusters = mean_shift_1d(values, config.meanshift);
    }
    net.clustering_converged = clusters.fully_converged;

    net.rings.resize(clusters.modes.size());
    for (std::size_t m = 0; m < clusters.modes.size(); ++m) {
        net.rings[m].mode_freq =
            config.log_space ? std::exp(clusters.modes[m]) : clusters.modes[m];
        net.rings[m].alters.reserve(clusters.cluster_sizes[m]);
    }
    // Input is already in descending frequency order, so ring member lists
    // inherit that order.
    for (std::size_t i = 0; i < active.size(); ++i) {
        net.rings[clusters.assignment[i]].alters.push_back(active[i].alter_id);
    }

    net.optimum_circles = net.rings.size();
    net.circle_sizes.reserve(net.rings.size());
    std::uint64_t running = 0;
    for (const auto& ring : net.rings) {
        running += ring.alters.size();
        net.circle_sizes.push_back(running);
    }
    return net;
}

}  // namespace sen
