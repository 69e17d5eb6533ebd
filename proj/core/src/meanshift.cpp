#include "sen/meanshift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sen {

double estimate_bandwidth(std::span<const double> points, double quantile) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("estimate_bandwidth needs >= 2 points");
    if (!(quantile > 0.0 && quantile < 1.0)) {
        throw std::invalid_argument("quantile must be in (0, 1)");
    }
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());

    std::size_t k = static_cast<std::size_t>(
        std::ceil(quantile * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n - 1);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // k-th nearest neighbour of sorted[i]: expand left/right pointers,
        // taking the closer side at each step.
        std::size_t left = i, right = i;
        double dist = 0.0;
        for (std::size_t step = 0; step < k; ++step) {
            const double dl = left > 0 ? sorted[i] - sorted[left - 1]
                                       : std::numeric_limits<double>::infinity();
            const double dr = right + 1 < n ? sorted[right + 1] - sorted[i]
                                            : std::numeric_limits<double>::infinity();
            if (dl <= dr) {
                --left;
                dist = dl;
            } else {
                ++right;
                dist = dr;
            }
        }
        sum += dist;
    }
    const double bandwidth = sum / static_cast<double>(n);
    if (bandwidth <= 0.0) {
        throw std::domain_error("degenerate: identical points");
    }
    return bandwidth;
}

MeanShiftResult mean_shift_1d(std::span<const double> points,
                              const MeanShiftConfig& config) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("mean_shift_1d needs >= 1 point");

    double bandwidth = config.bandwidth;
    if (bandwidth <= 0.0) bandwidth = estimate_bandwidth(points, config.quantile);
    const double merge_radius =
        config.mode_merge_radius > 0.0 ? config.mode_merge_radius : bandwidth;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = points[order[i]];

    // Shift each point to its fixed point. Window membership and the window
    // mean are computed over the ascending sorted array so results do not
    // depend on input order.
    std::vector<double> converged(n);
    std::vector<char> ok(n, 1);
    bool all_converged = true;
    for (std::size_t i = 0; i < n; ++i) {
        double x = sorted[i];
        bool done = false;
        for (int iter = 0; iter < config.max_iterations; ++iter) {
            const double lo = x - bandwidth;
            const double hi = x + bandwidth;
            const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
            const auto last = std::upper_bound(first, sorted.end(), hi);
            double sum = 0.0;
            for (auto it = first; it != last; ++it) sum += *it;
            const double mean = sum / static_cast<double>(last - first);
            const double shift = std::fabs(mean - x);
            x = mean;
            if (shift < config.convergence_tol) {
                done = true;
                break;
            }
        }
        converged[i] = x;
        if (!done) {
            ok[i] = 0;
            all_converged = false;
        }
    }

    // Merge converged positions, scanning from the highest down; a position
    // within merge_radius of the current mode anchor joins it, so ties go to
    // the higher mode.
    std::vector<std::size_t> scan(n);
    std::iota(scan.begin(), scan.end(), 0);
    std::stable_sort(scan.begin(), scan.end(), [&](std::size_t a, std::size_t b) {
        if (converged[a] != converged[b]) return converged[a] > converged[b];
        return sorted[a] > sorted[b];
    });

    std::vector<int> sorted_assignment(n, -1);
    std::vector<double> mode_sum;
    std::vector<std::size_t> mode_count;
    std::vector<double> anchors;
    for (std::size_t s : scan) {
        if (!ok[s]) continue;
        if (anchors.empty() || anchors.back() - converged[s] > merge_radius) {
            anchors.push_back(converged[s]);
            mode_sum.push_back(0.0);
            mode_count.push_back(0);
        }
        const int mode = static_cast<int>(anchors.size()) - 1;
        sorted_assignment[s] = mode;
        mode_sum[mode] += converged[s];
        mode_count[mode] += 1;
    }
    if (anchors.empty()) {
        // Nothing converged; fall back to treating final positions as modes.
        for (std::size_t s : scan) {
            if (anchors.empty() || anchors.back() - converged[s] > merge_radius) {
                anchors.push_back(converged[s]);
                mode_sum.push_back(0.0);
                mode_count.push_back(0);
            }
            const int mode = static_cast<int>(anchors.size()) - 1;
            sorted_assignment[s] = mode;
            mode_sum[mode] += converged[s];
            mode_count[mode] += 1;
        }
    }

    MeanShiftResult result;
    result.fully_converged = all_converged;
    result.modes.resize(anchors.size());
    for (std::size_t m = 0; m < anchors.size(); ++m) {
        result.modes[m] = mode_sum[m] / static_cast<double>(mode_count[m]);
    }
    result.cluster_sizes.assign(anchors.size(), 0);

    // Unconverged stragglers join the nearest mode.
    for (std::size_t i = 0; i < n; ++i) {
        if (sorted_assignment[i] >= 0) continue;
        int best = 0;
        double best_dist = std::fabs(converged[i] - result.modes[0]);
        for (int m = 1; m < static_cast<int>(result.modes.size()); ++m) {
            const double d = std::fabs(converged[i] - result.modes[m]);
            if (d < best_dist) {
                best = m;
                best_dist = d;
            }
        }
        sorted_assignment[i] = best;
    }

    result.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.assignment[order[i]] = sorted_assignment[i];
        result.cluster_sizes[sorted_assignment[i]] += 1;
    }
    return result;
}

}  // namespace sen
