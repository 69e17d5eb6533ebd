#include "sen/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

namespace sen {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct EgoGroup {
    std::string ego_id;
    std::vector<std::size_t> record_indices;  // input order
};

std::vector<EgoGroup> group_by_ego(std::span<const InteractionRecord> records) {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<EgoGroup> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto [it, inserted] = slot.try_emplace(records[i].ego_id, groups.size());
        if (inserted) groups.push_back({records[i].ego_id, {}});
        groups[it->second].record_indices.push_back(i);
    }
    std::sort(groups.begin(), groups.end(),
              [](const EgoGroup& a, const EgoGroup& b) { return a.ego_id < b.ego_id; });
    return groups;
}

json record_to_json(const InteractionRecord& r) {
    return json{{"ego", r.ego_id},
                {"alter", r.alter_id},
                {"kind", std::string(to_string(r.kind))},
                {"ts", r.timestamp},
                {"text", r.text}};
}

void open_out(std::ofstream& out, const std::string& path) {
    out.open(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failure: " + path);
}

std::string jsonl_header(std::string_view artifact, const std::string& hash) {
    json header{{"artifact", std::string(artifact)}, {"config_hash", hash}};
    return header.dump();
}

}  // namespace

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                   : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

FilterOutcome filter_corpus(std::vector<InteractionRecord> records,
                            const EngagementPolicy& policy) {
    FilterOutcome outcome;
    const auto groups = group_by_ego(records);
    outcome.summaries.reserve(groups.size());
    outcome.engaged.reserve(groups.size());
    std::unordered_map<std::string, bool> engaged_by_ego;
    for (const auto& group : groups) {
        std::vector<InteractionRecord> ego_records;
        ego_records.reserve(group.record_indices.size());
        for (const std::size_t i : group.record_indices) ego_records.push_back(records[i]);
        TimelineSummary summary = summarize_timeline(ego_records);
        const bool keep = is_engaged(summary, policy);
        engaged_by_ego.emplace(group.ego_id, keep);
        outcome.summaries.push_back(std::move(summary));
        outcome.engaged.push_back(keep ? 1 : 0);
        if (keep) ++outcome.engaged_count;
    }
    outcome.kept.reserve(records.size());
    for (auto& record : records) {
        if (engaged_by_ego.at(record.ego_id)) outcome.kept.push_back(std::move(record));
    }
    return outcome;
}

std::vector<SentimentLabel> label_records(std::span<const InteractionRecord> records,
                                          const Lexicon& lexicon,
                                          const ScorerConfig& config, int jobs) {
    std::vector<SentimentLabel> labels(records.size());
    const auto groups = group_by_ego(records);
    parallel_for(groups.size(), jobs, [&](std::size_t g) {
        for (const std::size_t i : groups[g].record_indices) {
            labels[i] = label_interaction(records[i], lexicon, config);
        }
    });
    return labels;
}

std::vector<SignedRelationship> sign_corpus(std::span<const InteractionRecord> records,
                                            std::span<const SentimentLabel> labels,
                                            double threshold, int jobs) {
    if (records.size() != labels.size()) {
        throw std::invalid_argument("records and labels differ in length");
    }
    const auto groups = group_by_ego(records);
    std::vector<std::vector<SignedRelationship>> per_ego(groups.size());
    parallel_for(groups.size(), jobs, [&](std::size_t g) {
        std::map<std::string, std::vector<SentimentLabel>> by_alter;
        for (const std::size_t i : groups[g].record_indices) {
            by_alter[records[i].alter_id].push_back(labels[i]);
        }
        auto& edges = per_ego[g];
        edges.reserve(by_alter.size());
        for (const auto& [alter, pair_labels] : by_alter) {
            const RelationshipStats stats =
                aggregate_relationship(groups[g].ego_id, alter, pair_labels);
            edges.push_back(sign_relationship(stats, threshold));
        }
    });
    std::vector<SignedRelationship> edges;
    for (auto& chunk : per_ego) {
        edges.insert(edges.end(), std::make_move_iterator(chunk.begin()),
                     std::make_move_iterator(chunk.end()));
    }
    return edges;
}

EgonetOutcome build_egonets(std::span<const InteractionRecord> records,
                            const EgonetConfig& config, int jobs) {
    const auto groups = group_by_ego(records);
    std::vector<EgoNetwork> nets(groups.size());
    std::vector<char> has_net(groups.size(), 0);
    parallel_for(groups.size(), jobs, [&](std::size_t g) {
        std::int64_t observation_end = 0;
        std::map<std::string, std::vector<std::int64_t>> times;
        for (const std::size_t i : groups[g].record_indices) {
            times[records[i].alter_id].push_back(records[i].timestamp);
            observation_end = std::max(observation_end, records[i].timestamp);
        }
        std::vector<TieFrequency> freqs;
        freqs.reserve(times.size());
        for (const auto& [alter, stamps] : times) {
            freqs.push_back(tie_frequency(groups[g].ego_id, alter, stamps,
                                          observation_end, config.duration_floor_days));
        }
        const auto active = active_alters(std::move(freqs), config.active_min_freq);
        if (active.empty()) return;
        nets[g] = build_ego_network(groups[g].ego_id, active, config);
        has_net[g] = 1;
    });
    EgonetOutcome outcome;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (has_net[g]) {
            outcome.egonets.push_back(std::move(nets[g]));
        } else {
            ++outcome.egos_without_active;
        }
    }
    return outcome;
}

PipelineData compute_pipeline(std::vector<InteractionRecord> records,
                              const Lexicon& lexicon, const RunConfig& config) {
    PipelineData data;
    FilterOutcome filtered = filter_corpus(std::move(records), config.engagement);
    data.total_egos = filtered.summaries.size();
    data.engaged_egos = filtered.engaged_count;
    data.records = std::move(filtered.kept);
    data.labels = label_records(data.records, lexicon, config.scorer, config.jobs);
    data.edges =
        sign_corpus(data.records, data.labels, config.sign_threshold, config.jobs);
    EgonetOutcome nets = build_egonets(data.records, config.egonet, config.jobs);
    data.egonets = std::move(nets.egonets);
    data.egos_without_active = nets.egos_without_active;
    data.report = build_dataset_report(data.edges, data.egonets, config.report);
    return data;
}

void write_skips_csv(const std::string& path, const ParseResult& parsed,
                     const std::string& config_hash) {
    std::ofstream out;
    open_out(out, path);
    out << "# artifact=skips config_hash=" << config_hash << '\n';
    out << skip_report_csv(parsed);
    finish_out(out, path);
}

void write_engagement_csv(const std::string& path, const FilterOutcome& outcome,
                          const EngagementPolicy& policy,
                          const std::string& config_hash) {
    std::ofstream out;
    open_out(out, path);
    out << "# artifact=engagement config_hash=" << config_hash << '\n';
    out << "ego,total,first_ts,last_ts,active_months,low_month_fraction,engaged\n";
    for (std::size_t i = 0; i < outcome.summaries.size(); ++i) {
        const auto& s = outcome.summaries[i];
        out << s.ego_id << ',' << s.total_interactions << ',' << s.first_ts << ','
            << s.last_ts << ',' << s.per_month_counts.size() << ','
            << format_full(low_month_fraction(s, policy.regularity_rate)) << ','
            << (outcome.engaged[i] ? "true" : "false") << '\n';
    }
    finish_out(out, path);
}

void write_records_jsonl(const std::string& path, std::string_view artifact,
                         const std::string& config_hash,
                         std::span<const InteractionRecord> records,
                         std::span<const SentimentLabel> labels) {
    std::ofstream out;
    open_out(out, path);
    out << jsonl_header(artifact, config_hash) << '\n';
    for (std::size_t i = 0; i < records.size(); ++i) {
        json j = record_to_json(records[i]);
        if (!labels.empty()) {
            j["compound"] = labels[i].compound;
            j["polarity"] = std::string(to_string(labels[i].polarity));
        }
        out << j.dump() << '\n';
    }
    finish_out(out, path);
}

void write_edges_csv(const std::string& path,
                     std::span<const SignedRelationship> edges,
                     const std::string& config_hash) {
    std::ofstream out;
    open_out(out, path);
    out << "# artifact=edges config_hash=" << config_hash << '\n';
    out << "ego,alter,n_total,n_neg,n_pos,n_neu,fraction,sign\n";
    for (const auto& e : edges) {
        out << e.stats.ego_id << ',' << e.stats.alter_id << ',' << e.stats.n_total << ','
            << e.stats.n_negative << ',' << e.stats.n_positive << ',' << e.stats.n_neutral
            << ',' << format_full(e.stats.negative_fraction) << ',' << to_string(e.sign)
            << '\n';
    }
    finish_out(out, path);
}

void write_egonets_jsonl(const std::string& path,
                         std::span<const EgoNetwork> egonets,
                         const std::string& config_hash) {
    std::ofstream out;
    open_out(out, path);
    out << jsonl_header("egonets", config_hash) << '\n';
    for (const auto& net : egonets) {
        json rings = json::array();
        for (const auto& ring : net.rings) {
            rings.push_back(json{{"mode_freq", ring.mode_freq}, {"alters", ring.alters}});
        }
        const json j{{"ego", net.ego_id},
                     {"optimum_circles", net.optimum_circles},
                     {"circle_sizes", net.circle_sizes},
                     {"rings", rings},
                     {"active_size", net.active_size}};
        out << j.dump() << '\n';
    }
    finish_out(out, path);
}

namespace {

template <typename Fn>
auto stage(std::string_view name, std::ostream* log, Fn&& fn) {
    try {
        if (log) *log << "[stage] " << name << '\n';
        return fn();
    } catch (const InputError& e) {
        throw InputError(std::string(name) + " stage failed: " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + " stage failed: " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + " stage failed: " + e.what());
    }
}

}  // namespace

RunSummary run_pipeline(const RunConfig& config, std::ostream* log) {
    if (config.input_path.empty()) throw ConfigError("no input corpus configured");
    if (config.lexicon_path.empty()) throw ConfigError("no lexicon configured");
    fs::create_directories(config.out_dir);
    fs::create_directories(fs::path(config.out_dir) / "tables");
    const auto out_path = [&](std::string_view name) {
        return (fs::path(config.out_dir) / name).string();
    };

    RunSummary summary;
    const Lexicon lexicon = load_lexicon(config.lexicon_path);

    ParseResult parsed = stage("corpus", log, [&] {
        std::ifstream in(config.input_path, std::ios::binary);
        if (!in) throw InputError("cannot open input: " + config.input_path);
        ParseResult result = parse_interaction_log(in);
        write_skips_csv(out_path("skips.csv"), result, stage_hash(config, "skips"));
        return result;
    });
    summary.line_count = parsed.line_count;
    summary.parsed_records = parsed.records.size();
    summary.skipped_lines = parsed.skips.size();
    if (log) {
        *log << "  parsed " << summary.parsed_records << " records, "
             << summary.skipped_lines << " skipped\n";
    }

    FilterOutcome filtered = stage("filter", log, [&] {
        FilterOutcome outcome =
            filter_corpus(std::move(parsed.records), config.engagement);
        write_engagement_csv(out_path("engagement.csv"), outcome, config.engagement,
                             stage_hash(config, "filtered"));
        write_records_jsonl(out_path("filtered.jsonl"), "filtered",
                            stage_hash(config, "filtered"), outcome.kept);
        return outcome;
    });
    summary.total_egos = filtered.summaries.size();
    summary.engaged_egos = filtered.engaged_count;
    if (log) {
        *log << "  " << summary.engaged_egos << " of " << summary.total_egos
             << " egos engaged\n";
    }

    const std::vector<InteractionRecord> records = std::move(filtered.kept);
    const std::vector<SentimentLabel> labels = stage("sentiment", log, [&] {
        auto result = label_records(records, lexicon, config.scorer, config.jobs);
        write_records_jsonl(out_path("labeled.jsonl"), "labeled",
                            stage_hash(config, "labeled"), records, result);
        return result;
    });

    const std::vector<SignedRelationship> edges = stage("signing", log, [&] {
        auto result = sign_corpus(records, labels, config.sign_threshold, config.jobs);
        write_edges_csv(out_path("edges.csv"), result, stage_hash(config, "edges"));
        return result;
    });
    if (log) *log << "  " << edges.size() << " signed relationships\n";

    const EgonetOutcome nets = stage("egonet", log, [&] {
        EgonetOutcome outcome = build_egonets(records, config.egonet, config.jobs);
        write_egonets_jsonl(out_path("egonets.jsonl"), outcome.egonets,
                            stage_hash(config, "egonets"));
        return outcome;
    });
    summary.egos_without_active = nets.egos_without_active;
    if (log) {
        *log << "  " << nets.egonets.size() << " ego networks ("
             << nets.egos_without_active << " egos without active alters)\n";
    }

    stage("report", log, [&] {
        const DatasetReport report =
            build_dataset_report(edges, nets.egonets, config.report);
        {
            std::ofstream out;
            open_out(out, out_path("report.md"));
            out << "<!-- config_hash=" << stage_hash(config, "report") << " -->\n";
            out << render_report_markdown(report);
            finish_out(out, out_path("report.md"));
        }
        for (const auto& [name, content] : render_report_csv(report)) {
            std::ofstream out;
            const std::string path = out_path("tables/" + name);
            open_out(out, path);
            out << "# artifact=report config_hash=" << stage_hash(config, "report")
                << '\n'
                << content;
            finish_out(out, path);
        }
        return 0;
    });
    return summary;
}

// --- artifact IO -----------------------------------------------------------

void write_corpus_jsonl(const std::string& path,
                        std::span<const InteractionRecord> records) {
    std::ofstream out;
    open_out(out, path);
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    finish_out(out, path);
}

std::vector<InteractionRecord> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    ParseResult parsed = parse_interaction_log(in);
    for (const auto& skip : parsed.skips) {
        if (skip.line_number == 1 && skip.reason == "missing field") continue;  // header
        throw InputError(path + ":" + std::to_string(skip.line_number) + ": " +
                         skip.reason);
    }
    return std::move(parsed.records);
}

void write_truth_json(const std::string& path, const GroundTruth& truth) {
    json egos = json::array();
    for (const auto& ego : truth.egos) {
        json ties = json::array();
        for (const auto& tie : ego.ties) {
            ties.push_back(json{{"alter", tie.alter_id},
                                {"band", tie.band},
                                {"sign", std::string(to_string(tie.sign))},
                                {"negative_fraction", tie.negative_fraction},
                                {"n", tie.n_interactions}});
        }
        egos.push_back(json{{"ego", ego.ego_id},
                            {"ring_sizes", ego.ring_sizes},
                            {"ties", std::move(ties)}});
    }
    const json j{{"seed", truth.seed},
                 {"sign_threshold", truth.sign_threshold},
                 {"egos", std::move(egos)}};
    std::ofstream out;
    open_out(out, path);
    out << j.dump(2) << '\n';
    finish_out(out, path);
}

GroundTruth read_truth_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    json j;
    in >> j;
    GroundTruth truth;
    truth.seed = j.at("seed").get<std::uint64_t>();
    truth.sign_threshold = j.at("sign_threshold").get<double>();
    for (const auto& ego_json : j.at("egos")) {
        TruthEgo ego;
        ego.ego_id = ego_json.at("ego").get<std::string>();
        ego.ring_sizes = ego_json.at("ring_sizes").get<std::vector<std::uint64_t>>();
        for (const auto& tie_json : ego_json.at("ties")) {
            TruthTie tie;
            tie.alter_id = tie_json.at("alter").get<std::string>();
            tie.band = tie_json.at("band").get<int>();
            tie.sign = tie_json.at("sign").get<std::string>() == "negative"
                           ? RelationshipSign::Negative
                           : RelationshipSign::Positive;
            tie.negative_fraction = tie_json.at("negative_fraction").get<double>();
            tie.n_interactions = tie_json.at("n").get<std::uint64_t>();
            ego.ties.push_back(std::move(tie));
        }
        truth.egos.push_back(std::move(ego));
    }
    return truth;
}

std::vector<SignedRelationship> read_edges_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    std::vector<SignedRelationship> edges;
    std::string line;
    bool header_seen = false;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cols.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cols.size() != 8) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 8 columns");
        }
        SignedRelationship edge;
        edge.stats.ego_id = cols[0];
        edge.stats.alter_id = cols[1];
        edge.stats.n_total = std::stoull(cols[2]);
        edge.stats.n_negative = std::stoull(cols[3]);
        edge.stats.n_positive = std::stoull(cols[4]);
        edge.stats.n_neutral = std::stoull(cols[5]);
        edge.stats.negative_fraction = std::stod(cols[6]);
        edge.sign = cols[7] == "negative" ? RelationshipSign::Negative
                                          : RelationshipSign::Positive;
        edges.push_back(std::move(edge));
    }
    return edges;
}

std::vector<EgoNetwork> read_egonets_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    std::vector<EgoNetwork> nets;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": invalid json");
        }
        if (j.contains("artifact")) continue;  // header line
        EgoNetwork net;
        net.ego_id = j.at("ego").get<std::string>();
        net.optimum_circles = j.at("optimum_circles").get<std::uint64_t>();
        net.circle_sizes = j.at("circle_sizes").get<std::vector<std::uint64_t>>();
        net.active_size = j.at("active_size").get<std::uint64_t>();
        for (const auto& ring_json : j.at("rings")) {
            Ring ring;
            ring.mode_freq = ring_json.at("mode_freq").get<double>();
            ring.alters = ring_json.at("alters").get<std::vector<std::string>>();
            net.rings.push_back(std::move(ring));
        }
        nets.push_back(std::move(net));
    }
    return nets;
}

}  // namespace sen
