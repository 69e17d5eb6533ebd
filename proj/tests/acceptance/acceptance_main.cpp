// Acceptance suite: one criterion per run_* function, one PASS/FAIL line
// each, non-zero exit if anything fails. Oracles are either exact-arithmetic
// transcriptions of the rules, a recorded reference-scorer run, or planted
// synthetic ground truth.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sen/config.hpp"
#include "sen/corpus.hpp"
#include "sen/meanshift.hpp"
#include "sen/pipeline.hpp"
#include "sen/report.hpp"
#include "sen/sentiment.hpp"
#include "sen/signing.hpp"
#include "sen/stats.hpp"
#include "sen/synth.hpp"

#include "../reference/naive_meanshift.hpp"

namespace fs = std::filesystem;
using namespace sen;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& why) {
        if (!condition) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << why;
        }
    }
    void note(const std::string& text) {
        if (detail.tellp() > 0) detail << "; ";
        detail << text;
    }
};

const std::string kSourceDir = SEN_SOURCE_DIR;
const std::string kLexiconPath = kSourceDir + "/core/data/sentiment_lexicon.txt";

const Lexicon& bundled_lexicon() {
    static const Lexicon lex = load_lexicon(kLexiconPath);
    return lex;
}

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "sen_acceptance";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// 1. Sign-rule exactness over planted label counts, five thresholds, with an
// exact rational oracle; boundary cases 1/6 -> positive, 1/5 -> negative.
void run_sign_rule(Check& check) {
    std::mt19937_64 rng(101);
    struct Planted {
        std::uint64_t neg, pos, neu;
    };
    std::vector<Planted> plants;
    plants.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t total = 1 + rng() % 500;
        const std::uint64_t neg = rng() % (total + 1);
        const std::uint64_t pos = (total - neg) == 0 ? 0 : rng() % (total - neg + 1);
        plants.push_back({neg, pos, total - neg - pos});
    }
    const struct {
        double value;
        std::uint64_t num, den;  // exact rational form
    } thresholds[] = {
        {0.0, 0, 1}, {1.0 / 6.0, 1, 6}, {0.17, 17, 100}, {0.2, 1, 5}, {1.0, 1, 1}};

    std::uint64_t mismatches = 0;
    for (const auto& plant : plants) {
        std::vector<SentimentLabel> labels;
        for (std::uint64_t i = 0; i < plant.neg; ++i)
            labels.push_back({-0.5, Polarity::Negative, false});
        for (std::uint64_t i = 0; i < plant.pos; ++i)
            labels.push_back({0.5, Polarity::Positive, false});
        for (std::uint64_t i = 0; i < plant.neu; ++i)
            labels.push_back({0.0, Polarity::Neutral, i % 2 == 0});
        const RelationshipStats stats = aggregate_relationship("e", "a", labels);
        for (const auto& threshold : thresholds) {
            const auto got = sign_relationship(stats, threshold.value).sign;
            // oracle in integer arithmetic: negative iff neg/total > num/den
            const bool negative =
                stats.n_negative * threshold.den > threshold.num * stats.n_total;
            const auto expected =
                negative ? RelationshipSign::Negative : RelationshipSign::Positive;
            if (got != expected) ++mismatches;
        }
    }
    check.require(mismatches == 0,
                  "rule mismatches: " + std::to_string(mismatches));

    std::vector<SentimentLabel> five_pos_one_neg(5, {0.5, Polarity::Positive, false});
    five_pos_one_neg.push_back({-0.5, Polarity::Negative, false});
    const auto boundary = aggregate_relationship("e", "a", five_pos_one_neg);
    check.require(sign_relationship(boundary, 0.17).sign == RelationshipSign::Positive,
                  "1 negative per 5 positive must stay positive");

    std::vector<SentimentLabel> four_pos_one_neg(4, {0.5, Polarity::Positive, false});
    four_pos_one_neg.push_back({-0.5, Polarity::Negative, false});
    const auto above = aggregate_relationship("e", "a", four_pos_one_neg);
    check.require(sign_relationship(above, 0.17).sign == RelationshipSign::Negative,
                  "1 negative in 5 interactions must turn negative");
    check.note("5000 sign decisions checked");
}

// 2. Retweet neutrality, exhaustively over a synthetic corpus, plus the
// retweet -> quote-retweet flip.
void run_retweet_neutrality(Check& check) {
    const SynthSpec spec = dunbar_spec(30, 438.3, true, 2027);
    const ScorerConfig scorer;
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), scorer);

    std::uint64_t retweets = 0;
    std::uint64_t wrong = 0;
    const InteractionRecord* negative_retweet = nullptr;
    for (const auto& record : corpus.records) {
        const SentimentLabel label = label_interaction(record, bundled_lexicon(), scorer);
        const bool is_retweet = record.kind == InteractionKind::Retweet;
        if (is_retweet) {
            ++retweets;
            if (!(label.forced_neutral && label.polarity == Polarity::Neutral &&
                  label.compound == 0.0)) {
                ++wrong;
            }
            if (!negative_retweet &&
                polarity_of(score_text(bundled_lexicon(), scorer, record.text),
                            scorer) == Polarity::Negative) {
                negative_retweet = &record;
            }
        } else if (label.forced_neutral) {
            ++wrong;
        }
    }
    check.require(retweets > 0, "corpus has no retweets");
    check.require(wrong == 0, std::to_string(wrong) + " records break the rule");
    check.require(negative_retweet != nullptr, "no retweet with negative text");
    if (negative_retweet) {
        InteractionRecord quoted = *negative_retweet;
        quoted.kind = InteractionKind::QuoteRetweet;
        const SentimentLabel label =
            label_interaction(quoted, bundled_lexicon(), scorer);
        check.require(label.polarity == Polarity::Negative && !label.forced_neutral,
                      "quote-retweet conversion did not flip the label");
    }
    check.note(std::to_string(corpus.records.size()) + " records, " +
               std::to_string(retweets) + " retweets");
}

// 3. Mean shift against the naive reference on 200 random instances, plus
// the fixed three-group example.
void run_meanshift_oracle(Check& check) {
    std::mt19937_64 rng(31337);
    std::uint64_t disagreements = 0;
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 50);
        const int clusters = 1 + static_cast<int>(rng() % 4);
        std::vector<double> centers(clusters);
        for (auto& c : centers) c = static_cast<double>(rng() % 10000) / 100.0;
        std::vector<double> points;
        for (int i = 0; i < n; ++i) {
            const double spread = 0.05 + static_cast<double>(rng() % 300) / 100.0;
            const double offset =
                spread * (static_cast<double>(rng() % 2000) / 1000.0 - 1.0);
            points.push_back(centers[rng() % centers.size()] + offset);
        }
        MeanShiftConfig config;
        config.bandwidth = 0.1 + static_cast<double>(rng() % 1000) / 200.0;
        const auto mine = mean_shift_1d(points, config);
        const auto naive = sen_test::naive_mean_shift_1d(
            points, config.bandwidth, config.bandwidth, config.max_iterations,
            config.convergence_tol);
        if (mine.assignment != naive.assignment || mine.modes != naive.modes) {
            ++disagreements;
        }
    }
    check.require(disagreements == 0,
                  std::to_string(disagreements) + " instances disagree");

    const std::vector<double> fixed = {0.9, 1.0, 1.1, 9.9, 10.1, 100.0};
    MeanShiftConfig config;
    config.bandwidth = 1.0;
    const auto result = mean_shift_1d(fixed, config);
    check.require(result.modes.size() == 3,
                  "fixed example produced " + std::to_string(result.modes.size()) +
                      " clusters");
    check.note("200 random instances matched");
}

// 4. End-to-end planted recovery on a Dunbar-tuned population of 500 egos,
// through files and the full pipeline.
void run_planted_recovery(Check& check) {
    // 0.9-year window: even an ego whose innermost ring draws a single
    // alter clears the 2,000-interaction engagement floor comfortably.
    const SynthSpec spec = dunbar_spec(500, 328.725, false, 424242);
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});
    const fs::path dir = work_dir() / "recovery";
    fs::create_directories(dir);
    const std::string corpus_path = (dir / "corpus.jsonl").string();
    write_corpus_jsonl(corpus_path, corpus.records);

    RunConfig config;
    config.input_path = corpus_path;
    config.lexicon_path = kLexiconPath;
    config.out_dir = (dir / "out").string();
    config.egonet = matching_egonet_config(spec);
    config.jobs = 0;
    const RunSummary summary = run_pipeline(config);
    check.require(summary.engaged_egos == 500, "an ego failed the engagement filter");

    const auto edges = read_edges_csv((fs::path(config.out_dir) / "edges.csv").string());
    const auto nets =
        read_egonets_jsonl((fs::path(config.out_dir) / "egonets.jsonl").string());
    const DiscrepancyReport report = verify_pipeline(corpus.truth, edges, nets);

    std::uint64_t ties = 0;
    for (const auto& ego : corpus.truth.egos) ties += ego.ties.size();
    const double circle_rate =
        1.0 - static_cast<double>(report.circle_mismatches.size()) / 500.0;
    const double band_rate =
        1.0 - static_cast<double>(report.band_mismatches.size()) /
                  static_cast<double>(ties);
    check.require(circle_rate >= 0.95,
                  "five-circle recovery rate " + std::to_string(circle_rate));
    check.require(band_rate >= 0.99, "band recovery rate " + std::to_string(band_rate));
    check.require(report.sign_mismatches.empty(),
                  std::to_string(report.sign_mismatches.size()) + " sign mismatches");

    double ratio_sum = 0.0;
    std::uint64_t ratio_count = 0;
    for (const auto& net : nets) {
        double ego_sum = 0.0;
        std::size_t ego_pairs = 0;
        for (std::size_t c = 1; c < net.circle_sizes.size(); ++c) {
            ego_sum += static_cast<double>(net.circle_sizes[c]) /
                       static_cast<double>(net.circle_sizes[c - 1]);
            ++ego_pairs;
        }
        if (ego_pairs > 0) {
            ratio_sum += ego_sum / static_cast<double>(ego_pairs);
            ++ratio_count;
        }
    }
    const double mean_ratio = ratio_sum / static_cast<double>(ratio_count);
    check.require(mean_ratio >= 2.0 && mean_ratio <= 4.0,
                  "mean circle size ratio " + std::to_string(mean_ratio));
    check.note(std::to_string(summary.parsed_records) + " interactions, " +
               std::to_string(ties) + " ties, mean size ratio " +
               std::to_string(mean_ratio));
}

// 5. Engagement filter boundaries: 1,999 vs 2,000 interactions; 181 vs 182
// days; a low-month fraction of exactly one half vs just above.
void run_engagement_boundaries(Check& check) {
    const EngagementPolicy policy;
    constexpr std::int64_t kDay = 86400;
    constexpr std::int64_t kStart = 1577836800;  // 2020-01-01

    const auto dense = [&](std::uint64_t total, std::int64_t span_days) {
        TimelineSummary s;
        s.ego_id = "e";
        s.total_interactions = total;
        s.first_ts = kStart;
        s.last_ts = kStart + span_days * kDay;
        const unsigned months = static_cast<unsigned>(span_days / 30 + 1);
        for (unsigned m = 0; m < months; ++m) {
            s.per_month_counts[{2020 + static_cast<int>(m / 12), 1 + m % 12}] =
                total / months + 31;
        }
        return s;
    };
    check.require(!is_engaged(dense(1999, 200), policy), "1999 must be rejected");
    check.require(is_engaged(dense(2000, 200), policy), "2000 must be accepted");
    check.require(!is_engaged(dense(2500, 181), policy), "181 days must be rejected");
    check.require(is_engaged(dense(2500, 182), policy), "182 days must be accepted");

    TimelineSummary half = dense(4000, 240);
    half.per_month_counts.clear();
    for (unsigned m = 1; m <= 8; ++m) {
        half.per_month_counts[{2020, m}] = m <= 4 ? 1 : 600;
    }
    check.require(is_engaged(half, policy), "low fraction 0.5 must be accepted");
    half.per_month_counts[{2020, 5}] = 1;  // 5/8 low now
    check.require(!is_engaged(half, policy),
                  "low fraction above 0.5 must be rejected");
}

// 6. Negativity planted only on high-frequency ties must push the active
// mean strictly above the full mean.
void run_negativity_direction(Check& check) {
    SynthSpec spec = dunbar_spec(120, 438.3, true, 606);
    spec.bands[0].negative_tie_prob = 0.8;
    spec.bands[1].negative_tie_prob = 0.7;
    spec.bands[2].negative_tie_prob = 0.0;
    spec.bands[3].negative_tie_prob = 0.0;
    spec.bands[4].negative_tie_prob = 0.0;
    spec.inactive_negative_prob = 0.0;
    SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});

    RunConfig config;
    config.egonet = matching_egonet_config(spec);
    config.jobs = 0;
    const PipelineData data =
        compute_pipeline(std::move(corpus.records), bundled_lexicon(), config);
    check.require(data.report.negativity_active.mean >
                      data.report.negativity_full.mean,
                  "active mean must strictly exceed the full mean");
    check.note("full " + std::to_string(data.report.negativity_full.mean) +
               "%, active " + std::to_string(data.report.negativity_active.mean) + "%");
}

// 7. Student-t interval against closed forms (df 1 and 2) to 1e-9 and
// Monte-Carlo coverage over 10,000 trials within 95% +/- 1%.
void run_ci_correctness(Check& check) {
    {
        const std::vector<double> values = {0.0, 10.0};
        const MeanWithCI ci = mean_confidence_interval(values, 0.95);
        const double t = std::tan(std::numbers::pi * (0.975 - 0.5));
        const double half = t * std::sqrt(50.0) / std::sqrt(2.0);
        check.require(std::fabs((ci.hi - ci.mean) - half) < 1e-9,
                      "df=1 interval is off");
        check.require(std::fabs((ci.mean - ci.lo) - half) < 1e-9,
                      "df=1 interval is asymmetric");
    }
    {
        const std::vector<double> values = {1.0, 4.0, 10.0};
        const MeanWithCI ci = mean_confidence_interval(values, 0.95);
        const double q = 0.95;
        const double t = q * std::sqrt(2.0 / (1.0 - q * q));
        double mean = 5.0;
        double ss = (1 - mean) * (1 - mean) + (4 - mean) * (4 - mean) +
                    (10 - mean) * (10 - mean);
        const double half = t * std::sqrt(ss / 2.0) / std::sqrt(3.0);
        check.require(std::fabs((ci.hi - ci.mean) - half) < 1e-9,
                      "df=2 interval is off");
    }
    {
        std::mt19937_64 rng(271828);
        std::normal_distribution<double> normal(3.0, 2.0);
        const int trials = 10000;
        const int n = 12;
        int covered = 0;
        std::vector<double> sample(n);
        for (int t = 0; t < trials; ++t) {
            for (int i = 0; i < n; ++i) sample[i] = normal(rng);
            const MeanWithCI ci = mean_confidence_interval(sample, 0.95);
            if (ci.lo <= 3.0 && 3.0 <= ci.hi) ++covered;
        }
        const double coverage = static_cast<double>(covered) / trials;
        check.require(coverage >= 0.94 && coverage <= 0.96,
                      "coverage " + std::to_string(coverage));
        check.note("coverage " + std::to_string(coverage));
    }
}

// 8. Byte-identical artifact trees across reruns and across --jobs 1/8.
void run_determinism(Check& check) {
    const SynthSpec spec = dunbar_spec(40, 438.3, true, 808);
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});
    const fs::path dir = work_dir() / "determinism";
    fs::create_directories(dir);
    const std::string corpus_path = (dir / "corpus.jsonl").string();
    write_corpus_jsonl(corpus_path, corpus.records);

    const auto run_with = [&](const std::string& name, int jobs) {
        RunConfig config;
        config.input_path = corpus_path;
        config.lexicon_path = kLexiconPath;
        config.out_dir = (dir / name).string();
        config.egonet = matching_egonet_config(spec);
        config.jobs = jobs;
        run_pipeline(config);
        return config.out_dir;
    };
    const std::string first = run_with("j1_first", 1);
    const std::string second = run_with("j1_second", 1);
    const std::string eight_a = run_with("j8_first", 8);
    const std::string eight_b = run_with("j8_second", 8);

    std::uint64_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(first)) {
        if (!entry.is_regular_file()) continue;
        ++files;
        const fs::path rel = fs::relative(entry.path(), first);
        const std::string reference = slurp(entry.path());
        for (const std::string* other : {&second, &eight_a, &eight_b}) {
            if (slurp(fs::path(*other) / rel) != reference) {
                check.require(false, "artifact differs: " + rel.string());
            }
        }
    }
    check.require(files >= 12, "artifact tree looks incomplete");
    check.note(std::to_string(files) + " files compared across 4 runs");
}

// 9. Scorer fidelity against the recorded reference run: polarity agreement
// >= 90% and compound MAE <= 0.05 on the bundled 50-sentence corpus.
void run_scorer_fidelity(Check& check) {
    std::ifstream in(kSourceDir + "/tests/data/sentiment_oracle.tsv");
    check.require(static_cast<bool>(in), "oracle file missing");
    const ScorerConfig config;
    std::string line;
    std::size_t total = 0, polarity_matches = 0;
    double abs_error_sum = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        const double expected = std::stod(line.substr(0, tab));
        const std::string text = line.substr(tab + 1);
        const double got = score_text(bundled_lexicon(), config, text);
        abs_error_sum += std::fabs(got - expected);
        if (polarity_of(got, config) == polarity_of(expected, config)) {
            ++polarity_matches;
        }
        ++total;
    }
    check.require(total == 50, "expected 50 oracle sentences");
    const double agreement = static_cast<double>(polarity_matches) /
                             static_cast<double>(total);
    const double mae = abs_error_sum / static_cast<double>(total);
    check.require(agreement >= 0.90, "polarity agreement " + std::to_string(agreement));
    check.require(mae <= 0.05, "MAE " + std::to_string(mae));
    check.note("agreement " + std::to_string(agreement) + ", MAE " +
               std::to_string(mae));
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "sign-rule exactness", 1.0, run_sign_rule},
        {2, "retweet neutrality", 5.0, run_retweet_neutrality},
        {3, "mean-shift oracle equivalence", 10.0, run_meanshift_oracle},
        {4, "end-to-end planted recovery", 60.0, run_planted_recovery},
        {5, "engagement filter boundaries", 1.0, run_engagement_boundaries},
        {6, "negativity summary direction", 10.0, run_negativity_direction},
        {7, "confidence interval correctness", 30.0, run_ci_correctness},
        {8, "determinism across jobs and reruns", 120.0, run_determinism},
        {9, "sentiment scorer fidelity", 5.0, run_scorer_fidelity},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (seconds > criterion.budget_seconds) {
            check.require(false, "over time budget (" + std::to_string(seconds) +
                                     "s > " + std::to_string(criterion.budget_seconds) +
                                     "s)");
        }
        if (!check.ok) ++failures;
        std::printf("[%s] %d. %s (%.2fs)%s%s\n", check.ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, seconds,
                    check.detail.tellp() > 0 ? ": " : "",
                    check.detail.str().c_str());
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
