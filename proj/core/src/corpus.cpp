#include "sen/corpus.hpp"

#include <chrono>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sen {

MonthKey month_of(std::int64_t utc_seconds) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{utc_seconds}};
    const year_month_day ymd{floor<days>(tp)};
    return MonthKey{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

unsigned days_in_month(MonthKey m) {
    using namespace std::chrono;
    const year_month_day_last last{year{m.year} / month{m.month} / std::chrono::last};
    return static_cast<unsigned>(last.day());
}

std::int64_t span_days_required(unsigned min_span_months) {
    return static_cast<std::int64_t>(min_span_months * 365.25 / 12.0);
}

namespace {

const char* validate_record(const nlohmann::json& j, InteractionRecord& out) {
    if (!j.is_object()) return "not an object";
    auto ego = j.find("ego");
    auto alter = j.find("alter");
    auto kind = j.find("kind");
    auto ts = j.find("ts");
    auto text = j.find("text");
    if (ego == j.end() || alter == j.end() || kind == j.end() || ts == j.end() ||
        text == j.end()) {
        return "missing field";
    }
    if (!ego->is_string() || !alter->is_string() || !kind->is_string() ||
        !ts->is_number_integer() || !text->is_string()) {
        return "wrong field type";
    }
    const auto parsed_kind = kind_from_string(kind->get_ref<const std::string&>());
    if (!parsed_kind) return "unknown kind";
    const std::int64_t timestamp = ts->get<std::int64_t>();
    if (timestamp <= 0) return "non-positive timestamp";
    if (ego->get_ref<const std::string&>() == alter->get_ref<const std::string&>()) {
        return "self interaction";
    }
    out.ego_id = ego->get<std::string>();
    out.alter_id = alter->get<std::string>();
    out.kind = *parsed_kind;
    out.timestamp = timestamp;
    out.text = text->get<std::string>();
    return nullptr;
}

}  // namespace

ParseResult parse_interaction_log(std::istream& in) {
    ParseResult result;
    std::string line;
    while (std::getline(in, line)) {
        ++result.line_count;
        if (line.empty()) {
            result.skips.push_back({result.line_count, "empty line"});
            continue;
        }
        const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) {
            result.skips.push_back({result.line_count, "invalid json"});
            continue;
        }
        InteractionRecord rec;
        if (const char* why = validate_record(j, rec)) {
            result.skips.push_back({result.line_count, why});
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    if (in.bad()) {
        throw std::runtime_error("I/O failure while reading interaction log after " +
                                 std::to_string(result.line_count) + " lines");
    }
    return result;
}

TimelineSummary summarize_timeline(std::span<const InteractionRecord> records) {
    if (records.empty()) throw std::invalid_argument("empty timeline");
    TimelineSummary s;
    s.ego_id = records.front().ego_id;
    s.first_ts = records.front().timestamp;
    s.last_ts = records.front().timestamp;
    for (const auto& r : records) {
        if (r.ego_id != s.ego_id) {
            throw std::invalid_argument("timeline mixes egos: " + s.ego_id + " vs " +
                                        r.ego_id);
        }
        s.total_interactions += 1;
        s.first_ts = std::min(s.first_ts, r.timestamp);
        s.last_ts = std::max(s.last_ts, r.timestamp);
        s.per_month_counts[month_of(r.timestamp)] += 1;
    }
    return s;
}

double low_month_fraction(const TimelineSummary& summary, double regularity_rate) {
    if (summary.per_month_counts.empty()) return 0.0;
    std::uint64_t low = 0;
    for (const auto& [month, count] : summary.per_month_counts) {
        const double threshold = regularity_rate * days_in_month(month);
        if (static_cast<double>(count) < threshold) ++low;
    }
    return static_cast<double>(low) / static_cast<double>(summary.per_month_counts.size());
}

bool is_engaged(const TimelineSummary& summary, const EngagementPolicy& policy) {
    if (summary.total_interactions < policy.min_total) return false;
    const std::int64_t span_seconds = summary.last_ts - summary.first_ts;
    if (span_seconds < span_days_required(policy.min_span_months) * 86400) return false;
    return low_month_fraction(summary, policy.regularity_rate) <=
           policy.max_low_month_fraction;
}

std::string skip_report_csv(const ParseResult& result) {
    std::ostringstream out;
    out << "line_number,reason\n";
    for (const auto& s : result.skips) {
        out << s.line_number << ',' << s.reason << '\n';
    }
    return out.str();
}

}  // namespace sen
