#pragma once

#include <cstdint>
#include <span>

namespace sen {

struct MeanWithCI {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t n = 0;
    double level = 0.95;
};

/// Two-sided Student-t interval for the mean: mean +/- t_{1-(1-level)/2, n-1}
/// * s/sqrt(n). A single value yields a zero-width interval. Throws on empty
/// input or a level outside (0, 1).
MeanWithCI mean_confidence_interval(std::span<const double> values,
                                    double level = 0.95);

/// Percentile bootstrap interval for the mean (seeded, deterministic).
MeanWithCI bootstrap_confidence_interval(std::span<const double> values,
                                         double level = 0.95,
                                         std::uint64_t resamples = 10000,
                                         std::uint64_t seed = 1);

double student_t_quantile(double p, double degrees_of_freedom);

}  // namespace sen
