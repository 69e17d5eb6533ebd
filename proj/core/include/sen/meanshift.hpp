#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sen {

struct MeanShiftConfig {
    double bandwidth = 0.0;        // <= 0 means estimate from the data
    double quantile = 0.3;         // kNN quantile for the auto estimate
    int max_iterations = 300;
    double convergence_tol = 1e-4;
    double mode_merge_radius = 0.0;  // <= 0 means use the bandwidth
};

struct MeanShiftResult {
    std::vector<int> assignment;  // point index -> cluster index
    std::vector<double> modes;    // strictly descending
    std::vector<std::size_t> cluster_sizes;
    bool fully_converged = true;  // false if any point hit max_iterations
};

/// Mean over all points of the distance to each point's ceil(quantile*n)-th
/// nearest neighbour (the index is clamped to [1, n-1]). Needs at least two
/// points; throws "degenerate: identical points" when the estimate is zero.
double estimate_bandwidth(std::span<const double> points, double quantile);

/// Flat-kernel mean shift on the line. Every point is iterated to the mean
/// of the points within +/- bandwidth of it until the move is below
/// convergence_tol; converged positions within mode_merge_radius are merged
/// into one mode (ties join the higher mode) and each point is assigned to
/// the mode its trajectory reached. Points that never converge are assigned
/// to the nearest mode and flagged via fully_converged.
MeanShiftResult mean_shift_1d(std::span<const double> points,
                              const MeanShiftConfig& config);

}  // namespace sen
