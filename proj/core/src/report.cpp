#include "sen/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sen {

namespace {

MeanWithCI summarize(std::vector<double> values, const ReportOptions& options) {
    // Canonical value order makes the summary independent of ego order.
    std::sort(values.begin(), values.end());
    if (options.ci_method == ReportOptions::CiMethod::Bootstrap) {
        return bootstrap_confidence_interval(values, options.ci_level,
                                             options.bootstrap_resamples,
                                             options.bootstrap_seed);
    }
    return mean_confidence_interval(values, options.ci_level);
}

using ActiveSets = std::unordered_map<std::string, std::unordered_set<std::string>>;

ActiveSets active_sets_of(std::span<const EgoNetwork> egonets) {
    ActiveSets sets;
    for (const auto& net : egonets) {
        auto& alters = sets[net.ego_id];
        for (const auto& ring : net.rings) {
            alters.insert(ring.alters.begin(), ring.alters.end());
        }
    }
    return sets;
}

bool in_scope(const SignedRelationship& edge, Scope scope, const ActiveSets& sets) {
    if (scope == Scope::Full) return true;
    const auto it = sets.find(edge.stats.ego_id);
    return it != sets.end() && it->second.count(edge.stats.alter_id) != 0;
}

std::string format2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string ci_cell(const MeanWithCI& ci) {
    return format2(ci.mean) + " [" + format2(ci.lo) + ", " + format2(ci.hi) + "]";
}

}  // namespace

MeanWithCI negativity_summary(std::span<const SignedRelationship> edges, Scope scope,
                              std::span<const EgoNetwork> egonets,
                              const ReportOptions& options,
                              std::uint64_t* excluded_egos) {
    const ActiveSets sets = active_sets_of(egonets);

    struct Tally {
        std::uint64_t total = 0;
        std::uint64_t negative = 0;
    };
    std::unordered_map<std::string, Tally> per_ego;
    for (const auto& edge : edges) {
        per_ego.try_emplace(edge.stats.ego_id);  // count all egos for exclusion
        if (!in_scope(edge, scope, sets)) continue;
        auto& tally = per_ego[edge.stats.ego_id];
        tally.total += 1;
        if (edge.sign == RelationshipSign::Negative) tally.negative += 1;
    }

    std::uint64_t excluded = 0;
    if (options.averaging == ReportOptions::Averaging::Pooled) {
        std::uint64_t total = 0, negative = 0;
        for (const auto& [ego, tally] : per_ego) {
            if (tally.total == 0) {
                ++excluded;
                continue;
            }
            total += tally.total;
            negative += tally.negative;
        }
        if (excluded_egos) *excluded_egos = excluded;
        if (total == 0) throw std::invalid_argument("no relationships in scope");
        // Pooled proportion with a normal-approximation interval.
        const double p = static_cast<double>(negative) / static_cast<double>(total);
        const double z = student_t_quantile(1.0 - (1.0 - options.ci_level) / 2.0, 1e9);
        const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
        MeanWithCI ci;
        ci.mean = 100.0 * p;
        ci.lo = 100.0 * std::max(0.0, p - half);
        ci.hi = 100.0 * std::min(1.0, p + half);
        ci.n = total;
        ci.level = options.ci_level;
        return ci;
    }

    std::vector<double> percentages;
    percentages.reserve(per_ego.size());
    for (const auto& [ego, tally] : per_ego) {
        if (tally.total == 0) {
            ++excluded;
            continue;
        }
        percentages.push_back(100.0 * static_cast<double>(tally.negative) /
                              static_cast<double>(tally.total));
    }
    if (excluded_egos) *excluded_egos = excluded;
    if (percentages.empty()) throw std::invalid_argument("no eligible egos");
    return summarize(std::move(percentages), options);
}

CircleTables circle_tables(std::span<const SignedRelationship> edges,
                           std::span<const EgoNetwork> egonets, unsigned restrict_k) {
    if (restrict_k == 0) throw std::invalid_argument("restrict_k must be positive");

    std::unordered_map<std::string, std::unordered_set<std::string>> negative_alters;
    for (const auto& edge : edges) {
        if (edge.sign == RelationshipSign::Negative) {
            negative_alters[edge.stats.ego_id].insert(edge.stats.alter_id);
        }
    }

    // Accumulate in ego-id order so the sums do not depend on input order.
    std::vector<const EgoNetwork*> ordered;
    ordered.reserve(egonets.size());
    for (const auto& net : egonets) ordered.push_back(&net);
    std::sort(ordered.begin(), ordered.end(),
              [](const EgoNetwork* a, const EgoNetwork* b) { return a->ego_id < b->ego_id; });

    CircleTables tables;
    std::vector<double> size_sums(restrict_k, 0.0);
    std::vector<double> count_sums(restrict_k, 0.0);
    std::vector<double> pct_sums(restrict_k, 0.0);
    for (const EgoNetwork* net_ptr : ordered) {
        const auto& net = *net_ptr;
        if (net.optimum_circles != restrict_k) continue;
        ++tables.ego_count;
        const auto neg_it = negative_alters.find(net.ego_id);
        std::uint64_t cumulative_size = 0;
        std::uint64_t cumulative_negative = 0;
        for (unsigned c = 0; c < restrict_k; ++c) {
            cumulative_size += net.rings[c].alters.size();
            if (neg_it != negative_alters.end()) {
                for (const auto& alter : net.rings[c].alters) {
                    if (neg_it->second.count(alter)) ++cumulative_negative;
                }
            }
            size_sums[c] += static_cast<double>(cumulative_size);
            count_sums[c] += static_cast<double>(cumulative_negative);
            pct_sums[c] += 100.0 * static_cast<double>(cumulative_negative) /
                           static_cast<double>(cumulative_size);
        }
    }
    if (tables.ego_count == 0) return tables;

    const double n = static_cast<double>(tables.ego_count);
    tables.size_means.resize(restrict_k);
    tables.negativity.resize(restrict_k);
    for (unsigned c = 0; c < restrict_k; ++c) {
        tables.size_means[c] = size_sums[c] / n;
        tables.negativity[c].mean_negative_count = count_sums[c] / n;
        tables.negativity[c].mean_negative_pct = pct_sums[c] / n;
    }
    return tables;
}

DatasetReport build_dataset_report(std::span<const SignedRelationship> edges,
                                   std::span<const EgoNetwork> egonets,
                                   const ReportOptions& options) {
    DatasetReport report;
    report.restrict_k = options.restrict_k;

    const ActiveSets sets = active_sets_of(egonets);
    std::set<std::string> egos_full, egos_active;
    std::set<std::string> alters_full, alters_active;
    for (const auto& edge : edges) {
        egos_full.insert(edge.stats.ego_id);
        alters_full.insert(edge.stats.alter_id);
        report.counts_full.relationships += 1;
        report.counts_full.interactions += edge.stats.n_total;
        if (in_scope(edge, Scope::Active, sets)) {
            egos_active.insert(edge.stats.ego_id);
            alters_active.insert(edge.stats.alter_id);
            report.counts_active.relationships += 1;
            report.counts_active.interactions += edge.stats.n_total;
        }
    }
    report.counts_full.egos = egos_full.size();
    report.counts_full.alters = alters_full.size();
    report.counts_active.egos = egos_active.size();
    report.counts_active.alters = alters_active.size();

    if (!edges.empty()) {
        report.negativity_full = negativity_summary(edges, Scope::Full, egonets, options);
        if (!egos_active.empty()) {
            report.negativity_active =
                negativity_summary(edges, Scope::Active, egonets, options,
                                   &report.negativity_active_excluded);
        } else {
            report.negativity_active_excluded = egos_full.size();
        }
    }

    if (!egonets.empty()) {
        std::vector<double> circles, sizes;
        circles.reserve(egonets.size());
        sizes.reserve(egonets.size());
        for (const auto& net : egonets) {
            circles.push_back(static_cast<double>(net.optimum_circles));
            sizes.push_back(static_cast<double>(net.active_size));
        }
        report.mean_optimum_circles = summarize(std::move(circles), options);
        report.mean_active_size = summarize(std::move(sizes), options);
    }

    CircleTables tables = circle_tables(edges, egonets, options.restrict_k);
    report.restricted_ego_count = tables.ego_count;
    report.circle_size_means = std::move(tables.size_means);
    report.circle_negativity = std::move(tables.negativity);
    return report;
}

std::string render_report_markdown(const DatasetReport& report) {
    std::ostringstream md;
    md << "# Dataset report\n\n";

    md << "## Network counts\n\n"
       << "| Scope | Egos | Alters | Relationships | Interactions |\n"
       << "|---|---|---|---|---|\n";
    if (report.counts_full.egos > 0) {
        md << "| Full | " << report.counts_full.egos << " | " << report.counts_full.alters
           << " | " << report.counts_full.relationships << " | "
           << report.counts_full.interactions << " |\n"
           << "| Active | " << report.counts_active.egos << " | "
           << report.counts_active.alters << " | " << report.counts_active.relationships
           << " | " << report.counts_active.interactions << " |\n";
    }

    md << "\n## Negative relationships (mean % per ego)\n\n"
       << "| Full (%) | Active (%) | Difference |\n"
       << "|---|---|---|\n";
    if (report.negativity_full.n > 0 && report.negativity_active.n > 0) {
        md << "| " << ci_cell(report.negativity_full) << " | "
           << ci_cell(report.negativity_active) << " | "
           << format2(report.negativity_active.mean - report.negativity_full.mean)
           << " |\n";
    }

    md << "\n## Active network shape\n\n"
       << "| Mean optimum circles | Mean active network size |\n"
       << "|---|---|\n";
    if (report.mean_optimum_circles.n > 0) {
        md << "| " << ci_cell(report.mean_optimum_circles) << " | "
           << ci_cell(report.mean_active_size) << " |\n";
    }

    md << "\n## Mean circle sizes (egos with " << report.restrict_k
       << " circles: " << report.restricted_ego_count << ")\n\n|";
    for (unsigned c = 1; c <= report.restrict_k; ++c) md << " Circle " << c << " |";
    md << "\n|";
    for (unsigned c = 1; c <= report.restrict_k; ++c) md << "---|";
    md << "\n";
    if (!report.circle_size_means.empty()) {
        md << "|";
        for (double size : report.circle_size_means) md << " " << format2(size) << " |";
        md << "\n";
    }

    md << "\n## Negative relationships per circle (same egos)\n\n|  |";
    for (unsigned c = 1; c <= report.restrict_k; ++c) md << " Circle " << c << " |";
    md << "\n|---|";
    for (unsigned c = 1; c <= report.restrict_k; ++c) md << "---|";
    md << "\n";
    if (!report.circle_negativity.empty()) {
        md << "| Mean count |";
        for (const auto& row : report.circle_negativity) {
            md << " " << format2(row.mean_negative_count) << " |";
        }
        md << "\n| Mean % |";
        for (const auto& row : report.circle_negativity) {
            md << " " << format2(row.mean_negative_pct) << " |";
        }
        md << "\n";
    }
    return md.str();
}

std::map<std::string, std::string> render_report_csv(const DatasetReport& report) {
    std::map<std::string, std::string> files;

    {
        std::ostringstream csv;
        csv << "scope,egos,alters,relationships,interactions\n";
        if (report.counts_full.egos > 0) {
            csv << "full," << report.counts_full.egos << ',' << report.counts_full.alters
                << ',' << report.counts_full.relationships << ','
                << report.counts_full.interactions << '\n'
                << "active," << report.counts_active.egos << ','
                << report.counts_active.alters << ','
                << report.counts_active.relationships << ','
                << report.counts_active.interactions << '\n';
        }
        files["counts.csv"] = csv.str();
    }
    {
        std::ostringstream csv;
        csv << "scope,mean_pct,ci_lo,ci_hi,n,excluded_egos\n";
        if (report.negativity_full.n > 0) {
            csv << "full," << format_full(report.negativity_full.mean) << ','
                << format_full(report.negativity_full.lo) << ','
                << format_full(report.negativity_full.hi) << ','
                << report.negativity_full.n << ",0\n";
        }
        if (report.negativity_active.n > 0) {
            csv << "active," << format_full(report.negativity_active.mean) << ','
                << format_full(report.negativity_active.lo) << ','
                << format_full(report.negativity_active.hi) << ','
                << report.negativity_active.n << ',' << report.negativity_active_excluded
                << '\n';
        }
        files["negativity.csv"] = csv.str();
    }
    {
        std::ostringstream csv;
        csv << "metric,mean,ci_lo,ci_hi,n\n";
        if (report.mean_optimum_circles.n > 0) {
            csv << "optimum_circles," << format_full(report.mean_optimum_circles.mean)
                << ',' << format_full(report.mean_optimum_circles.lo) << ','
                << format_full(report.mean_optimum_circles.hi) << ','
                << report.mean_optimum_circles.n << '\n'
                << "active_size," << format_full(report.mean_active_size.mean) << ','
                << format_full(report.mean_active_size.lo) << ','
                << format_full(report.mean_active_size.hi) << ','
                << report.mean_active_size.n << '\n';
        }
        files["network_size.csv"] = csv.str();
    }
    {
        std::ostringstream csv;
        csv << "circle,mean_size\n";
        for (std::size_t c = 0; c < report.circle_size_means.size(); ++c) {
            csv << (c + 1) << ',' << format_full(report.circle_size_means[c]) << '\n';
        }
        files["circle_sizes.csv"] = csv.str();
    }
    {
        std::ostringstream csv;
        csv << "circle,mean_negative_count,mean_negative_pct\n";
        for (std::size_t c = 0; c < report.circle_negativity.size(); ++c) {
            csv << (c + 1) << ',' << format_full(report.circle_negativity[c].mean_negative_count)
                << ',' << format_full(report.circle_negativity[c].mean_negative_pct) << '\n';
        }
        files["circle_negativity.csv"] = csv.str();
    }
    return files;
}

}  // namespace sen
