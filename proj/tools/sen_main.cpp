// sen: batch toolkit turning directed-interaction logs into signed ego
// networks and the accompanying statistics report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sen/config.hpp"
#include "sen/pipeline.hpp"
#include "sen/synth.hpp"

namespace fs = std::filesystem;
using namespace sen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

fs::path executable_dir() {
    std::error_code ec;
    const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (ec) return fs::current_path();
    return exe.parent_path();
}

std::string default_lexicon_path() {
    if (const char* env = std::getenv("SEN_LEXICON")) return env;
    const fs::path staged = executable_dir() / ".." / "share" / "sen" /
                            "sentiment_lexicon.txt";
    std::error_code ec;
    if (fs::exists(staged, ec)) return fs::weakly_canonical(staged, ec).string();
    return {};
}

struct CliOverrides {
    std::optional<std::string> input;
    std::optional<std::string> lexicon;
    std::optional<std::string> out_dir;
    std::optional<int> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<double> sign_threshold;
    std::optional<double> active_min_freq;
    std::optional<std::string> bandwidth;
    std::optional<double> quantile;
    std::optional<bool> log_space;
    std::optional<std::string> averaging;
    std::optional<std::string> ci_method;
    std::optional<unsigned> restrict_k;
    std::optional<std::uint64_t> synth_egos;
    std::optional<double> synth_window_days;
    std::optional<bool> synth_with_inactive;
};

void apply_overrides(RunConfig& config, const CliOverrides& cli) {
    if (cli.input) config.input_path = *cli.input;
    if (cli.lexicon) config.lexicon_path = *cli.lexicon;
    if (cli.out_dir) config.out_dir = *cli.out_dir;
    if (cli.jobs) config.jobs = *cli.jobs;
    if (cli.seed) config.seed = *cli.seed;
    if (cli.sign_threshold) {
        if (!(*cli.sign_threshold >= 0.0 && *cli.sign_threshold <= 1.0)) {
            throw ConfigError("--threshold must be in [0, 1]");
        }
        config.sign_threshold = *cli.sign_threshold;
    }
    if (cli.active_min_freq) config.egonet.active_min_freq = *cli.active_min_freq;
    if (cli.bandwidth) {
        if (*cli.bandwidth == "auto") {
            config.egonet.meanshift.bandwidth = 0.0;
        } else {
            try {
                config.egonet.meanshift.bandwidth = std::stod(*cli.bandwidth);
            } catch (const std::exception&) {
                throw ConfigError("--bandwidth expects a number or \"auto\"");
            }
            if (config.egonet.meanshift.bandwidth < 0.0) {
                throw ConfigError("--bandwidth must be positive or \"auto\"");
            }
        }
    }
    if (cli.quantile) config.egonet.meanshift.quantile = *cli.quantile;
    if (cli.log_space) config.egonet.log_space = *cli.log_space;
    if (cli.averaging) {
        if (*cli.averaging == "ego") {
            config.report.averaging = ReportOptions::Averaging::PerEgo;
        } else if (*cli.averaging == "pooled") {
            config.report.averaging = ReportOptions::Averaging::Pooled;
        } else {
            throw ConfigError("--averaging expects ego or pooled");
        }
    }
    if (cli.ci_method) {
        if (*cli.ci_method == "t") {
            config.report.ci_method = ReportOptions::CiMethod::StudentT;
        } else if (*cli.ci_method == "bootstrap") {
            config.report.ci_method = ReportOptions::CiMethod::Bootstrap;
        } else {
            throw ConfigError("--ci-method expects t or bootstrap");
        }
    }
    if (cli.restrict_k) config.report.restrict_k = *cli.restrict_k;
    if (cli.synth_egos) config.synth_egos = *cli.synth_egos;
    if (cli.synth_window_days) config.synth_window_days = *cli.synth_window_days;
    if (cli.synth_with_inactive) config.synth_with_inactive = *cli.synth_with_inactive;
}

RunConfig resolve_config(const std::string& config_path, const CliOverrides& cli) {
    RunConfig config;
    if (!config_path.empty()) config = parse_config_file(config_path);
    apply_overrides(config, cli);
    if (config.lexicon_path.empty()) config.lexicon_path = default_lexicon_path();
    return config;
}

void require_input(const RunConfig& config) {
    if (config.input_path.empty()) {
        throw ConfigError("no input given: pass --input or set [input] corpus");
    }
}

void require_lexicon(const RunConfig& config) {
    if (config.lexicon_path.empty()) {
        throw ConfigError(
            "no lexicon found: pass --lexicon, set [input] lexicon, or set "
            "SEN_LEXICON");
    }
}

fs::path prepare_out_dir(const RunConfig& config) {
    fs::create_directories(config.out_dir);
    return config.out_dir;
}

int cmd_validate(const RunConfig& config) {
    require_input(config);
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) throw InputError("cannot open input: " + config.input_path);
    const ParseResult parsed = parse_interaction_log(in);
    const fs::path out = prepare_out_dir(config) / "skips.csv";
    std::ofstream report(out, std::ios::binary);
    report << skip_report_csv(parsed);
    std::cout << "lines: " << parsed.line_count << "\nrecords: " << parsed.records.size()
              << "\nskipped: " << parsed.skips.size() << "\nskip report: " << out.string()
              << "\n";
    return parsed.skips.empty() ? kExitOk : kExitInput;
}

int cmd_filter(const RunConfig& config) {
    require_input(config);
    const FilterOutcome outcome =
        filter_corpus(read_corpus_jsonl(config.input_path), config.engagement);
    const fs::path out = prepare_out_dir(config);
    {
        std::ofstream csv(out / "engagement.csv", std::ios::binary);
        csv << "# artifact=engagement config_hash=" << stage_hash(config, "filtered")
            << "\n"
            << "ego,total,first_ts,last_ts,active_months,low_month_fraction,engaged\n";
        for (std::size_t i = 0; i < outcome.summaries.size(); ++i) {
            const auto& s = outcome.summaries[i];
            csv << s.ego_id << ',' << s.total_interactions << ',' << s.first_ts << ','
                << s.last_ts << ',' << s.per_month_counts.size() << ','
                << low_month_fraction(s, config.engagement.regularity_rate) << ','
                << (outcome.engaged[i] ? "true" : "false") << '\n';
        }
    }
    write_corpus_jsonl((out / "filtered.jsonl").string(), outcome.kept);
    std::cout << "egos: " << outcome.summaries.size()
              << "\nengaged: " << outcome.engaged_count
              << "\nkept records: " << outcome.kept.size() << "\n";
    return kExitOk;
}

int cmd_sentiment(const RunConfig& config) {
    require_input(config);
    require_lexicon(config);
    const Lexicon lexicon = load_lexicon(config.lexicon_path);
    const auto records = read_corpus_jsonl(config.input_path);
    const auto labels = label_records(records, lexicon, config.scorer, config.jobs);
    const fs::path out = prepare_out_dir(config) / "labeled.jsonl";
    std::ofstream file(out, std::ios::binary);
    file << R"({"artifact":"labeled","config_hash":")" << stage_hash(config, "labeled")
         << "\"}\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        nlohmann::json j{{"ego", records[i].ego_id},
                         {"alter", records[i].alter_id},
                         {"kind", std::string(to_string(records[i].kind))},
                         {"ts", records[i].timestamp},
                         {"text", records[i].text},
                         {"compound", labels[i].compound},
                         {"polarity", std::string(to_string(labels[i].polarity))}};
        file << j.dump() << '\n';
    }
    std::cout << "labeled records: " << records.size() << "\n";
    return kExitOk;
}

int cmd_sign(const RunConfig& config) {
    require_input(config);
    require_lexicon(config);
    const Lexicon lexicon = load_lexicon(config.lexicon_path);
    const auto records = read_corpus_jsonl(config.input_path);
    const auto labels = label_records(records, lexicon, config.scorer, config.jobs);
    const auto edges = sign_corpus(records, labels, config.sign_threshold, config.jobs);
    const fs::path out = prepare_out_dir(config) / "edges.csv";
    std::ofstream csv(out, std::ios::binary);
    csv << "# artifact=edges config_hash=" << stage_hash(config, "edges") << "\n"
        << "ego,alter,n_total,n_neg,n_pos,n_neu,fraction,sign\n";
    char buf[64];
    for (const auto& e : edges) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.stats.negative_fraction);
        csv << e.stats.ego_id << ',' << e.stats.alter_id << ',' << e.stats.n_total << ','
            << e.stats.n_negative << ',' << e.stats.n_positive << ','
            << e.stats.n_neutral << ',' << buf << ',' << to_string(e.sign) << '\n';
    }
    std::cout << "signed relationships: " << edges.size() << "\n";
    return kExitOk;
}

int cmd_egonet(const RunConfig& config) {
    require_input(config);
    const auto records = read_corpus_jsonl(config.input_path);
    const EgonetOutcome outcome = build_egonets(records, config.egonet, config.jobs);
    const fs::path out = prepare_out_dir(config) / "egonets.jsonl";
    std::ofstream file(out, std::ios::binary);
    file << R"({"artifact":"egonets","config_hash":")" << stage_hash(config, "egonets")
         << "\"}\n";
    for (const auto& net : outcome.egonets) {
        nlohmann::json rings = nlohmann::json::array();
        for (const auto& ring : net.rings) {
            rings.push_back(nlohmann::json{{"mode_freq", ring.mode_freq},
                                           {"alters", ring.alters}});
        }
        nlohmann::json j{{"ego", net.ego_id},
                         {"optimum_circles", net.optimum_circles},
                         {"circle_sizes", net.circle_sizes},
                         {"rings", rings},
                         {"active_size", net.active_size}};
        file << j.dump() << '\n';
    }
    std::cout << "ego networks: " << outcome.egonets.size()
              << "\negos without active alters: " << outcome.egos_without_active << "\n";
    return kExitOk;
}

int cmd_report(const RunConfig& config, const std::string& edges_path,
               const std::string& egonets_path) {
    const auto edges = read_edges_csv(edges_path);
    const auto egonets = read_egonets_jsonl(egonets_path);
    const DatasetReport report = build_dataset_report(edges, egonets, config.report);
    const fs::path out = prepare_out_dir(config);
    fs::create_directories(out / "tables");
    {
        std::ofstream md(out / "report.md", std::ios::binary);
        md << "<!-- config_hash=" << stage_hash(config, "report") << " -->\n"
           << render_report_markdown(report);
    }
    for (const auto& [name, content] : render_report_csv(report)) {
        std::ofstream csv(out / "tables" / name, std::ios::binary);
        csv << "# artifact=report config_hash=" << stage_hash(config, "report") << "\n"
            << content;
    }
    std::cout << render_report_markdown(report);
    return kExitOk;
}

int cmd_run(const RunConfig& config) {
    require_input(config);
    require_lexicon(config);
    const RunSummary summary = run_pipeline(config, &std::cout);
    std::cout << "done: " << summary.engaged_egos << " engaged egos, artifacts in "
              << config.out_dir << "\n";
    return kExitOk;
}

int cmd_synth(const RunConfig& config) {
    const SynthSpec spec = dunbar_spec(config.synth_egos, config.synth_window_days,
                                       config.synth_with_inactive, config.seed);
    const Lexicon lexicon = [&] {
        RunConfig c = config;
        if (c.lexicon_path.empty()) {
            throw ConfigError("synth needs a lexicon to verify its text pools");
        }
        return load_lexicon(c.lexicon_path);
    }();
    const SynthCorpus corpus = generate_corpus(spec, lexicon, config.scorer);
    const fs::path out = prepare_out_dir(config);
    write_corpus_jsonl((out / "corpus.jsonl").string(), corpus.records);
    write_truth_json((out / "truth.json").string(), corpus.truth);

    // Matching run configuration: the planted bands are laid out for
    // log-space clustering at this fixed bandwidth.
    const EgonetConfig egonet = matching_egonet_config(spec);
    std::ofstream cfg(out / "run_config.toml", std::ios::binary);
    cfg << "[input]\ncorpus = \"" << (out / "corpus.jsonl").string() << "\"\n"
        << "lexicon = \"" << config.lexicon_path << "\"\n\n"
        << "[output]\ndir = \"" << (out / "run").string() << "\"\n\n"
        << "[egonet]\nbandwidth = " << egonet.meanshift.bandwidth << "\n"
        << "log_space = true\n";
    std::cout << "egos: " << spec.n_egos << "\nrecords: " << corpus.records.size()
              << "\ncorpus: " << (out / "corpus.jsonl").string()
              << "\ntruth: " << (out / "truth.json").string()
              << "\nrun config: " << (out / "run_config.toml").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed ego network toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides cli;
    std::string edges_path = "out/edges.csv";
    std::string egonets_path = "out/egonets.jsonl";

    const auto add_common = [&](CLI::App* cmd, bool with_input) {
        cmd->add_option("--config", config_path, "TOML-style configuration file");
        cmd->add_option("--out", cli.out_dir, "output directory (default: out)");
        cmd->add_option("--jobs", cli.jobs, "worker threads, 0 = all cores");
        cmd->add_option("--seed", cli.seed, "seed for randomized components");
        if (with_input) {
            cmd->add_option("--input", cli.input, "interaction log (JSONL)");
        }
    };
    const auto add_lexicon = [&](CLI::App* cmd) {
        cmd->add_option("--lexicon", cli.lexicon,
                        "sentiment lexicon (token<TAB>valence)");
    };
    const auto add_egonet_flags = [&](CLI::App* cmd) {
        cmd->add_option("--bandwidth", cli.bandwidth,
                        "mean-shift bandwidth, number or \"auto\"");
        cmd->add_option("--quantile", cli.quantile, "kNN quantile for auto bandwidth");
        cmd->add_flag("--log-space,!--raw-space", cli.log_space,
                      "cluster on log frequencies");
        cmd->add_option("--active-min-freq", cli.active_min_freq,
                        "active-network cut in contacts per year");
    };
    const auto add_report_flags = [&](CLI::App* cmd) {
        cmd->add_option("--averaging", cli.averaging, "ego or pooled");
        cmd->add_option("--ci-method", cli.ci_method, "t or bootstrap");
        cmd->add_option("--restrict-k", cli.restrict_k,
                        "circle count for the per-circle tables");
    };

    CLI::App* validate = app.add_subcommand("validate", "parse a log, report skips");
    add_common(validate, true);

    CLI::App* filter = app.add_subcommand("filter", "apply the engagement filter");
    add_common(filter, true);

    CLI::App* sentiment =
        app.add_subcommand("sentiment", "label every interaction with a polarity");
    add_common(sentiment, true);
    add_lexicon(sentiment);

    CLI::App* sign = app.add_subcommand("sign", "aggregate labels into signed edges");
    add_common(sign, true);
    add_lexicon(sign);
    sign->add_option("--threshold", cli.sign_threshold,
                     "negative-fraction threshold (default 0.17)");

    CLI::App* egonet = app.add_subcommand("egonet", "cluster ties into circles");
    add_common(egonet, true);
    add_egonet_flags(egonet);

    CLI::App* report = app.add_subcommand("report", "build the statistics report");
    add_common(report, false);
    report->add_option("--edges", edges_path, "signed edges CSV");
    report->add_option("--egonets", egonets_path, "ego networks JSONL");
    add_report_flags(report);

    CLI::App* run = app.add_subcommand("run", "full pipeline: parse to report");
    add_common(run, true);
    add_lexicon(run);
    run->add_option("--threshold", cli.sign_threshold,
                    "negative-fraction threshold (default 0.17)");
    add_egonet_flags(run);
    add_report_flags(run);

    CLI::App* synth = app.add_subcommand("synth", "generate a corpus with ground truth");
    add_common(synth, false);
    add_lexicon(synth);
    synth->add_option("--egos", cli.synth_egos, "number of egos");
    synth->add_option("--window-days", cli.synth_window_days,
                      "observation window length in days");
    synth->add_flag("--with-inactive,!--no-inactive", cli.synth_with_inactive,
                    "plant below-threshold alters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const RunConfig config = resolve_config(config_path, cli);
        if (*validate) return cmd_validate(config);
        if (*filter) return cmd_filter(config);
        if (*sentiment) return cmd_sentiment(config);
        if (*sign) return cmd_sign(config);
        if (*egonet) return cmd_egonet(config);
        if (*report) return cmd_report(config, edges_path, egonets_path);
        if (*run) return cmd_run(config);
        if (*synth) return cmd_synth(config);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
