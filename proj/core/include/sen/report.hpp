#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sen/egonet.hpp"
#include "sen/signing.hpp"
#include "sen/stats.hpp"

namespace sen {

struct ReportOptions {
    enum class Averaging { PerEgo, Pooled };
    enum class CiMethod { StudentT, Bootstrap };

    Averaging averaging = Averaging::PerEgo;
    CiMethod ci_method = CiMethod::StudentT;
    double ci_level = 0.95;
    unsigned restrict_k = 5;
    std::uint64_t bootstrap_resamples = 10000;
    std::uint64_t bootstrap_seed = 1;
};

struct NetworkCounts {
    std::uint64_t egos = 0;
    std::uint64_t alters = 0;
    std::uint64_t relationships = 0;
    std::uint64_t interactions = 0;
};

struct CircleNegativityRow {
    double mean_negative_count = 0.0;
    double mean_negative_pct = 0.0;
};

/// The statistics suite for one dataset: full and active counts, mean
/// negativity with confidence intervals, circle-count and network-size
/// summaries, and the per-circle tables restricted to egos whose optimum
/// circle count equals restrict_k.
struct DatasetReport {
    NetworkCounts counts_full;
    NetworkCounts counts_active;
    MeanWithCI negativity_full;
    MeanWithCI negativity_active;
    std::uint64_t negativity_active_excluded = 0;  // egos with no active ties
    MeanWithCI mean_optimum_circles;
    MeanWithCI mean_active_size;
    unsigned restrict_k = 5;
    std::uint64_t restricted_ego_count = 0;
    std::vector<double> circle_size_means;             // one per circle 1..k
    std::vector<CircleNegativityRow> circle_negativity;  // one per circle 1..k
};

enum class Scope { Full, Active };

/// Mean percentage of negative relationships per ego (or pooled over edges
/// when options select it). Active scope restricts each ego's edges to the
/// alters present in its ego network; egos with no in-scope relationship are
/// excluded and counted via excluded_egos. Throws when no ego qualifies.
MeanWithCI negativity_summary(std::span<const SignedRelationship> edges,
                              Scope scope, std::span<const EgoNetwork> egonets,
                              const ReportOptions& options,
                              std::uint64_t* excluded_egos = nullptr);

struct CircleTables {
    std::vector<double> size_means;
    std::vector<CircleNegativityRow> negativity;
    std::uint64_t ego_count = 0;
};

/// Per-circle mean sizes and negativity over egos with exactly restrict_k
/// circles. Circles are cumulative: circle c covers rings 1..c. Returns
/// empty tables (ego_count 0) when no ego qualifies.
CircleTables circle_tables(std::span<const SignedRelationship> edges,
                           std::span<const EgoNetwork> egonets,
                           unsigned restrict_k);

DatasetReport build_dataset_report(std::span<const SignedRelationship> edges,
                                   std::span<const EgoNetwork> egonets,
                                   const ReportOptions& options);

/// Markdown rendering with fixed two-decimal numbers; deterministic.
std::string render_report_markdown(const DatasetReport& report);

/// One CSV per table, full float precision; keys are file names.
std::map<std::string, std::string> render_report_csv(const DatasetReport& report);

}  // namespace sen
