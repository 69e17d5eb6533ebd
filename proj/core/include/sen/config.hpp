#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sen/corpus.hpp"
#include "sen/egonet.hpp"
#include "sen/report.hpp"
#include "sen/sentiment.hpp"
#include "sen/signing.hpp"

namespace sen {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a pipeline run needs. Field defaults equal the module
/// defaults, so an empty config file is a valid run configuration.
struct RunConfig {
    std::string input_path;
    std::string lexicon_path;
    std::string out_dir = "out";
    int jobs = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 42;

    EngagementPolicy engagement;
    ScorerConfig scorer;
    double sign_threshold = kGoldenThreshold;
    EgonetConfig egonet;
    ReportOptions report;

    // Knobs for the synthetic-corpus factory.
    std::uint64_t synth_egos = 100;
    double synth_window_days = 438.3;
    bool synth_with_inactive = true;
};

/// Applies a TOML-style config ([section] headers, key = value lines,
/// # comments) on top of the defaults. Unknown sections or keys raise
/// ConfigError, as do malformed values.
RunConfig parse_config_file(const std::string& path);
void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& origin);

/// Stable hash of the configuration subsections governing an artifact
/// ("skips", "filtered", "labeled", "edges", "egonets", "report").
/// Embedded in artifact headers so a stale artifact is detectable after a
/// config change.
std::string stage_hash(const RunConfig& config, std::string_view artifact);

}  // namespace sen
