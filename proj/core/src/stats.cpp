#include "sen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace sen {

double student_t_quantile(double p, double degrees_of_freedom) {
    const boost::math::students_t_distribution<double> dist(degrees_of_freedom);
    return boost::math::quantile(dist, p);
}

namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

MeanWithCI mean_confidence_interval(std::span<const double> values, double level) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must be in (0, 1)");
    }
    MeanWithCI ci;
    ci.n = values.size();
    ci.level = level;
    ci.mean = mean_of(values);
    if (ci.n == 1) {
        ci.lo = ci.hi = ci.mean;
        return ci;
    }
    double ss = 0.0;
    for (double v : values) {
        const double d = v - ci.mean;
        ss += d * d;
    }
    const double stddev = std::sqrt(ss / static_cast<double>(ci.n - 1));
    const double scale = stddev / std::sqrt(static_cast<double>(ci.n));
    const double t = student_t_quantile(1.0 - (1.0 - level) / 2.0,
                                        static_cast<double>(ci.n - 1));
    ci.lo = ci.mean - t * scale;
    ci.hi = ci.mean + t * scale;
    return ci;
}

MeanWithCI bootstrap_confidence_interval(std::span<const double> values, double level,
                                         std::uint64_t resamples, std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must be in (0, 1)");
    }
    MeanWithCI ci;
    ci.n = values.size();
    ci.level = level;
    ci.mean = mean_of(values);
    if (ci.n == 1) {
        ci.lo = ci.hi = ci.mean;
        return ci;
    }
    std::mt19937_64 rng(seed);
    const std::size_t n = values.size();
    std::vector<double> means(resamples);
    for (std::uint64_t r = 0; r < resamples; ++r) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += values[rng() % n];
        }
        means[r] = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    const auto pick = [&](double q) {
        const double pos = q * static_cast<double>(resamples - 1);
        const std::size_t idx = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(idx);
        if (idx + 1 >= means.size()) return means.back();
        return means[idx] * (1.0 - frac) + means[idx + 1] * frac;
    };
    ci.lo = pick(alpha);
    ci.hi = pick(1.0 - alpha);
    return ci;
}

}  // namespace sen
