#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sen/interaction.hpp"

namespace sen {

/// Calendar month in UTC, e.g. {2020, 1} for January 2020.
struct MonthKey {
    int year = 0;
    unsigned month = 1;  // 1..12

    auto operator<=>(const MonthKey&) const = default;
};

unsigned days_in_month(MonthKey m);
MonthKey month_of(std::int64_t utc_seconds);

struct TimelineSummary {
    std::string ego_id;
    std::uint64_t total_interactions = 0;
    std::int64_t first_ts = 0;
    std::int64_t last_ts = 0;
    std::map<MonthKey, std::uint64_t> per_month_counts;
};

/// Engagement filter thresholds. An ego must clear all three rules to be
/// kept for analysis: a minimum timeline size, a minimum first-to-last
/// span, and a regularity rule over its active months.
struct EngagementPolicy {
    std::uint64_t min_total = 2000;
    unsigned min_span_months = 6;
    double regularity_rate = 1.0 / 3.0;  // interactions per day
    double max_low_month_fraction = 0.5;
};

/// Span rule in days for a month requirement: floor(months * 365.25 / 12).
/// 6 months -> 182 days.
std::int64_t span_days_required(unsigned min_span_months);

struct SkipEntry {
    std::uint64_t line_number = 0;  // 1-based
    std::string reason;
};

struct ParseResult {
    std::vector<InteractionRecord> records;
    std::vector<SkipEntry> skips;
    std::uint64_t line_count = 0;
};

/// Streaming parse of a line-delimited JSON interaction log. Total over any
/// byte stream: records.size() + skips.size() == line_count. Malformed
/// lines, unknown kinds, non-positive timestamps and self-interactions are
/// recorded as skips and the stream continues. A stream-level I/O failure
/// throws with the partial line count in the message.
ParseResult parse_interaction_log(std::istream& in);

/// Records must be non-empty and all belong to one ego.
TimelineSummary summarize_timeline(std::span<const InteractionRecord> records);

bool is_engaged(const TimelineSummary& summary, const EngagementPolicy& policy);

/// Fraction of active months whose count is below rate * days-in-month.
double low_month_fraction(const TimelineSummary& summary, double regularity_rate);

std::string skip_report_csv(const ParseResult& result);

}  // namespace sen
