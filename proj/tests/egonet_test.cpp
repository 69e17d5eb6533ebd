#include <doctest.h>

#include <stdexcept>
#include <unordered_map>
#include <limits>
#include <numeric>

#include <cmath>
#include <random>
#include <vector>

#include "sen/egonet.hpp"

using namespace sen;

namespace {

constexpr std::int64_t kDay = 86400;

TieFrequency tie_of(const std::string& alter, double freq) {
    TieFrequency t;
    t.ego_id = "e";
    t.alter_id = alter;
    t.n_interactions = 1;
    t.duration_days = 365.25;
    t.freq_per_year = freq;
    return t;
}

}  // namespace

TEST_CASE("twelve interactions over one year is twelve per year") {
    const std::int64_t end = 2000000000;
    const std::int64_t first = end - static_cast<std::int64_t>(365.25 * kDay);
    std::vector<std::int64_t> stamps = {first};
    for (int i = 1; i < 12; ++i) stamps.push_back(first + i * 1000000);
    const TieFrequency tie = tie_frequency("e", "a", stamps, end);
    CHECK(tie.duration_days == 365.25);
    CHECK(tie.freq_per_year == 12.0);
}

TEST_CASE("a single interaction at the observation end hits the duration floor") {
    const std::int64_t end = 2000000000;
    const std::vector<std::int64_t> stamps = {end};
    const TieFrequency tie = tie_frequency("e", "a", stamps, end);
    CHECK(tie.duration_days == 30.0);
    CHECK(tie.freq_per_year == doctest::Approx(12.175));
}

TEST_CASE("frequency estimates a planted Poisson rate within three sigma") {
    // two years of a 52-per-year tie; the Poisson draw is the oracle
    std::mt19937_64 rng(99);
    std::poisson_distribution<int> poisson(104.0);
    const int n = poisson(rng);
    const std::int64_t start = 1500000000;
    const std::int64_t window = static_cast<std::int64_t>(2 * 365.25 * kDay);
    std::vector<std::int64_t> stamps = {start};
    for (int i = 1; i < n; ++i) {
        stamps.push_back(start + static_cast<std::int64_t>(rng() % window));
    }
    const TieFrequency tie = tie_frequency("e", "a", stamps, start + window);
    const double sigma = std::sqrt(104.0) / 2.0;
    CHECK(std::fabs(tie.freq_per_year - 52.0) <= 3.0 * sigma);
}

TEST_CASE("tie_frequency validates its inputs") {
    CHECK_THROWS_AS(tie_frequency("e", "a", {}, 100), std::invalid_argument);
    const std::vector<std::int64_t> stamps = {200};
    CHECK_THROWS_AS(tie_frequency("e", "a", stamps, 100), std::invalid_argument);
}

TEST_CASE("the active cut is inclusive at one contact per year") {
    const std::vector<TieFrequency> freqs = {tie_of("a", 2.0), tie_of("b", 1.0),
                                             tie_of("c", 0.5)};
    const auto active = active_alters(freqs);
    REQUIRE(active.size() == 2);
    CHECK(active[0].alter_id == "a");
    CHECK(active[1].alter_id == "b");
}

TEST_CASE("an all-inactive ego yields an empty active set") {
    const std::vector<TieFrequency> freqs = {tie_of("a", 0.9), tie_of("b", 0.1)};
    CHECK(active_alters(freqs).empty());
}

TEST_CASE("a planted active/inactive split is recovered exactly") {
    std::mt19937_64 rng(42);
    std::vector<TieFrequency> freqs;
    std::size_t planted_active = 0;
    for (int i = 0; i < 60; ++i) {
        const bool make_active = rng() % 2 == 0;
        const double freq = make_active ? 1.0 + static_cast<double>(rng() % 100)
                                        : 0.99 - static_cast<double>(rng() % 90) / 100.0;
        freqs.push_back(tie_of("a" + std::to_string(i), freq));
        if (make_active) ++planted_active;
    }
    CHECK(active_alters(freqs).size() == planted_active);
}

TEST_CASE("one active alter builds a one-circle network") {
    const std::vector<TieFrequency> active = {tie_of("a", 5.0)};
    EgonetConfig config;
    const EgoNetwork net = build_ego_network("e", active, config);
    CHECK(net.optimum_circles == 1);
    CHECK(net.circle_sizes == std::vector<std::uint64_t>{1});
    CHECK(net.active_size == 1);
    CHECK(net.rings[0].mode_freq == 5.0);
}

TEST_CASE("identical frequencies collapse into a single ring") {
    std::vector<TieFrequency> active;
    for (int i = 0; i < 8; ++i) active.push_back(tie_of("a" + std::to_string(i), 3.0));
    EgonetConfig config;  // auto bandwidth would be degenerate here
    const EgoNetwork net = build_ego_network("e", active, config);
    CHECK(net.optimum_circles == 1);
    CHECK(net.active_size == 8);
}

TEST_CASE("five well-separated bands are recovered with log-space clustering") {
    // planted bands at rate ratio 5; membership is the oracle
    const double modes[5] = {1250.0, 250.0, 50.0, 10.0, 2.0};
    const std::size_t sizes[5] = {2, 4, 10, 35, 100};
    std::mt19937_64 rng(8);
    std::vector<TieFrequency> active;
    std::vector<int> planted_band;
    for (int b = 0; b < 5; ++b) {
        for (std::size_t i = 0; i < sizes[b]; ++i) {
            const double jitter = 0.85 + 0.3 * static_cast<double>(rng() % 1000) / 1000.0;
            active.push_back(tie_of("b" + std::to_string(b) + "_" + std::to_string(i),
                                    modes[b] * jitter));
            planted_band.push_back(b);
        }
    }
    // descending order as active_alters would produce
    std::vector<std::size_t> order(active.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return active[a].freq_per_year > active[b].freq_per_year;
    });
    std::vector<TieFrequency> sorted_active;
    std::vector<int> sorted_band;
    for (const std::size_t i : order) {
        sorted_active.push_back(active[i]);
        sorted_band.push_back(planted_band[i]);
    }

    EgonetConfig config;
    config.log_space = true;
    config.meanshift.bandwidth = 0.5;
    const EgoNetwork net = build_ego_network("e", sorted_active, config);
    REQUIRE(net.optimum_circles == 5);
    CHECK(net.active_size == 151);
    CHECK(net.circle_sizes.back() == net.active_size);
    for (std::size_t c = 1; c < net.circle_sizes.size(); ++c) {
        CHECK(net.circle_sizes[c] > net.circle_sizes[c - 1]);
    }
    // ring index equals planted band for every alter
    std::size_t cursor = 0;
    for (std::size_t r = 0; r < net.rings.size(); ++r) {
        for (const auto& alter : net.rings[r].alters) {
            CHECK(alter == sorted_active[cursor].alter_id);
            CHECK(static_cast<int>(r) == sorted_band[cursor]);
            ++cursor;
        }
    }
    // modes are reported in frequency units, descending
    CHECK(net.rings[0].mode_freq > 800.0);
    CHECK(net.rings[4].mode_freq < 3.0);
}

TEST_CASE("rings are frequency intervals: concentricity holds") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 30; ++round) {
        std::vector<TieFrequency> active;
        const int n = 2 + static_cast<int>(rng() % 80);
        for (int i = 0; i < n; ++i) {
            active.push_back(
                tie_of("a" + std::to_string(i),
                       1.0 + static_cast<double>(rng() % 10000) / 37.0));
        }
        std::sort(active.begin(), active.end(),
                  [](const TieFrequency& a, const TieFrequency& b) {
                      return a.freq_per_year > b.freq_per_year;
                  });
        EgonetConfig config;  // auto bandwidth, raw space
        EgoNetwork net;
        try {
            net = build_ego_network("e", active, config);
        } catch (const std::domain_error&) {
            continue;
        }
        std::unordered_map<std::string, double> freq_of;
        for (const auto& tie : active) freq_of[tie.alter_id] = tie.freq_per_year;
        for (std::size_t r = 1; r < net.rings.size(); ++r) {
            double inner_min = std::numeric_limits<double>::infinity();
            for (const auto& alter : net.rings[r - 1].alters) {
                inner_min = std::min(inner_min, freq_of[alter]);
            }
            double outer_max = -std::numeric_limits<double>::infinity();
            for (const auto& alter : net.rings[r].alters) {
                outer_max = std::max(outer_max, freq_of[alter]);
            }
            CHECK(inner_min >= outer_max);
        }
    }
}

TEST_CASE("build_ego_network rejects an empty active set") {
    EgonetConfig config;
    CHECK_THROWS_AS(build_ego_network("e", {}, config), std::invalid_argument);
}
