#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sen/pipeline.hpp"
#include "sen/synth.hpp"

using namespace sen;
namespace fs = std::filesystem;

namespace {

const std::string kLexiconPath =
    std::string(SEN_SOURCE_DIR) + "/core/data/sentiment_lexicon.txt";

const Lexicon& bundled_lexicon() {
    static const Lexicon lex = load_lexicon(kLexiconPath);
    return lex;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sen_pipeline_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("a generated corpus round-trips through the jsonl format") {
    const SynthSpec spec = dunbar_spec(3, 438.3, true, 4);
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});
    REQUIRE(corpus.records.size() > 10000);

    const fs::path dir = fresh_dir("roundtrip");
    const std::string path = (dir / "corpus.jsonl").string();
    write_corpus_jsonl(path, corpus.records);
    const std::vector<InteractionRecord> back = read_corpus_jsonl(path);
    REQUIRE(back.size() == corpus.records.size());
    CHECK(back == corpus.records);
}

TEST_CASE("truth files round-trip") {
    const SynthSpec spec = dunbar_spec(2, 438.3, true, 9);
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});
    const fs::path dir = fresh_dir("truth");
    const std::string path = (dir / "truth.json").string();
    write_truth_json(path, corpus.truth);
    const GroundTruth back = read_truth_json(path);
    CHECK(back.seed == corpus.truth.seed);
    REQUIRE(back.egos.size() == corpus.truth.egos.size());
    for (std::size_t e = 0; e < back.egos.size(); ++e) {
        CHECK(back.egos[e].ego_id == corpus.truth.egos[e].ego_id);
        CHECK(back.egos[e].ring_sizes == corpus.truth.egos[e].ring_sizes);
        REQUIRE(back.egos[e].ties.size() == corpus.truth.egos[e].ties.size());
        for (std::size_t t = 0; t < back.egos[e].ties.size(); ++t) {
            CHECK(back.egos[e].ties[t].alter_id == corpus.truth.egos[e].ties[t].alter_id);
            CHECK(back.egos[e].ties[t].band == corpus.truth.egos[e].ties[t].band);
            CHECK(back.egos[e].ties[t].sign == corpus.truth.egos[e].ties[t].sign);
        }
    }
}

TEST_CASE("run_pipeline writes the whole artifact tree") {
    const SynthSpec spec = dunbar_spec(4, 438.3, true, 21);
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});
    const fs::path dir = fresh_dir("artifacts");
    const std::string corpus_path = (dir / "corpus.jsonl").string();
    write_corpus_jsonl(corpus_path, corpus.records);

    RunConfig config;
    config.input_path = corpus_path;
    config.lexicon_path = kLexiconPath;
    config.out_dir = (dir / "out").string();
    config.egonet = matching_egonet_config(spec);
    config.jobs = 2;

    const RunSummary summary = run_pipeline(config);
    CHECK(summary.parsed_records == corpus.records.size());
    CHECK(summary.skipped_lines == 0);
    CHECK(summary.engaged_egos == 4);
    CHECK(summary.egos_without_active == 0);

    for (const char* name : {"skips.csv", "engagement.csv", "filtered.jsonl",
                             "labeled.jsonl", "edges.csv", "egonets.jsonl",
                             "report.md"}) {
        CHECK(fs::exists(dir / "out" / name));
    }
    for (const char* name : {"counts.csv", "negativity.csv", "network_size.csv",
                             "circle_sizes.csv", "circle_negativity.csv"}) {
        CHECK(fs::exists(dir / "out" / "tables" / name));
    }

    // artifacts carry the stage hash in their headers
    const std::string edges_text = slurp(dir / "out" / "edges.csv");
    CHECK(edges_text.find("# artifact=edges config_hash=" +
                          stage_hash(config, "edges")) == 0);
    const std::string labeled_first =
        slurp(dir / "out" / "labeled.jsonl").substr(0, 200);
    CHECK(labeled_first.find("\"artifact\":\"labeled\"") != std::string::npos);

    // artifact readers agree with the in-memory pipeline
    const PipelineData data =
        compute_pipeline(corpus.records, bundled_lexicon(), config);
    const auto edges = read_edges_csv((dir / "out" / "edges.csv").string());
    REQUIRE(edges.size() == data.edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        CHECK(edges[i].stats.ego_id == data.edges[i].stats.ego_id);
        CHECK(edges[i].stats.alter_id == data.edges[i].stats.alter_id);
        CHECK(edges[i].stats.n_total == data.edges[i].stats.n_total);
        CHECK(edges[i].sign == data.edges[i].sign);
    }
    const auto nets = read_egonets_jsonl((dir / "out" / "egonets.jsonl").string());
    REQUIRE(nets.size() == data.egonets.size());
    for (std::size_t i = 0; i < nets.size(); ++i) {
        CHECK(nets[i].ego_id == data.egonets[i].ego_id);
        CHECK(nets[i].circle_sizes == data.egonets[i].circle_sizes);
        CHECK(nets[i].optimum_circles == data.egonets[i].optimum_circles);
    }

    // verification against the truth passes end to end
    const DiscrepancyReport report = verify_pipeline(corpus.truth, edges, nets);
    CHECK(report.empty());
}

TEST_CASE("reruns are byte-identical for one and many jobs") {
    const SynthSpec spec = dunbar_spec(3, 438.3, true, 33);
    const SynthCorpus corpus = generate_corpus(spec, bundled_lexicon(), {});
    const fs::path dir = fresh_dir("determinism");
    const std::string corpus_path = (dir / "corpus.jsonl").string();
    write_corpus_jsonl(corpus_path, corpus.records);

    auto run_with = [&](const std::string& out_name, int jobs) {
        RunConfig config;
        config.input_path = corpus_path;
        config.lexicon_path = kLexiconPath;
        config.out_dir = (dir / out_name).string();
        config.egonet = matching_egonet_config(spec);
        config.jobs = jobs;
        run_pipeline(config);
        return config.out_dir;
    };
    const std::string a = run_with("out_j1a", 1);
    const std::string b = run_with("out_j1b", 1);
    const std::string c = run_with("out_j4", 4);

    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), a);
        CHECK(slurp(entry.path()) == slurp(fs::path(b) / rel));
        CHECK(slurp(entry.path()) == slurp(fs::path(c) / rel));
    }
}

TEST_CASE("a failing stage reports its name and keeps earlier artifacts") {
    RunConfig config;
    config.input_path = "/nonexistent/corpus.jsonl";
    config.lexicon_path = kLexiconPath;
    config.out_dir = (fresh_dir("failure") / "out").string();
    CHECK_THROWS_WITH_AS(run_pipeline(config),
                         "corpus stage failed: cannot open input: "
                         "/nonexistent/corpus.jsonl",
                         std::runtime_error);
}

TEST_CASE("stage hashes move only with their governing config") {
    RunConfig config;
    const std::string edges_before = stage_hash(config, "edges");
    const std::string egonets_before = stage_hash(config, "egonets");
    config.sign_threshold = 0.25;
    CHECK(stage_hash(config, "edges") != edges_before);
    CHECK(stage_hash(config, "egonets") == egonets_before);
    config.egonet.log_space = true;
    CHECK(stage_hash(config, "egonets") != egonets_before);
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
    for (const int h : hits) CHECK(h == 1);
    parallel_for(0, 8, [&](std::size_t) { FAIL("must not be called"); });
}
