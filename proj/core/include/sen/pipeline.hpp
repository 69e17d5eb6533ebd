#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sen/config.hpp"
#include "sen/corpus.hpp"
#include "sen/egonet.hpp"
#include "sen/lexicon.hpp"
#include "sen/report.hpp"
#include "sen/sentiment.hpp"
#include "sen/signing.hpp"
#include "sen/synth.hpp"

namespace sen {

/// Unreadable or malformed input files (as opposed to configuration
/// mistakes or internal failures); the CLI maps these to exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runs fn(0..count-1) on a worker pool. jobs <= 0 selects the hardware
/// thread count. Items must be independent; exceptions propagate.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

struct FilterOutcome {
    std::vector<InteractionRecord> kept;      // engaged egos, input order
    std::vector<TimelineSummary> summaries;   // every ego, sorted by id
    std::vector<char> engaged;                // parallel to summaries
    std::uint64_t engaged_count = 0;
};

FilterOutcome filter_corpus(std::vector<InteractionRecord> records,
                            const EngagementPolicy& policy);

std::vector<SentimentLabel> label_records(std::span<const InteractionRecord> records,
                                          const Lexicon& lexicon,
                                          const ScorerConfig& config, int jobs);

/// Aggregates per-pair labels into signed edges, sorted by (ego, alter).
std::vector<SignedRelationship> sign_corpus(std::span<const InteractionRecord> records,
                                            std::span<const SentimentLabel> labels,
                                            double threshold, int jobs);

struct EgonetOutcome {
    std::vector<EgoNetwork> egonets;  // sorted by ego id
    std::uint64_t egos_without_active = 0;
};

/// Ties use the ego's last interaction as the observation end.
EgonetOutcome build_egonets(std::span<const InteractionRecord> records,
                            const EgonetConfig& config, int jobs);

struct PipelineData {
    std::vector<InteractionRecord> records;  // engaged egos only
    std::vector<SentimentLabel> labels;      // parallel to records
    std::vector<SignedRelationship> edges;
    std::vector<EgoNetwork> egonets;
    std::uint64_t total_egos = 0;
    std::uint64_t engaged_egos = 0;
    std::uint64_t egos_without_active = 0;
    DatasetReport report;
};

/// The full in-memory pipeline over already-parsed records.
PipelineData compute_pipeline(std::vector<InteractionRecord> records,
                              const Lexicon& lexicon, const RunConfig& config);

struct RunSummary {
    std::uint64_t line_count = 0;
    std::uint64_t parsed_records = 0;
    std::uint64_t skipped_lines = 0;
    std::uint64_t total_egos = 0;
    std::uint64_t engaged_egos = 0;
    std::uint64_t egos_without_active = 0;
};

/// File-based run: parse -> filter -> sentiment -> signing -> egonet ->
/// report, every stage's artifacts written under config.out_dir before the
/// next stage starts. A rerun with identical input and config is
/// byte-identical for any job count. Stage failures rethrow with the stage
/// name; artifacts already written stay on disk.
RunSummary run_pipeline(const RunConfig& config, std::ostream* log = nullptr);

// --- artifact IO ---------------------------------------------------------
// Writers embed the governing config hash in a header line; readers skip it.

void write_skips_csv(const std::string& path, const ParseResult& parsed,
                     const std::string& config_hash);
void write_engagement_csv(const std::string& path, const FilterOutcome& outcome,
                          const EngagementPolicy& policy,
                          const std::string& config_hash);
void write_records_jsonl(const std::string& path, std::string_view artifact,
                         const std::string& config_hash,
                         std::span<const InteractionRecord> records,
                         std::span<const SentimentLabel> labels = {});
void write_edges_csv(const std::string& path,
                     std::span<const SignedRelationship> edges,
                     const std::string& config_hash);
void write_egonets_jsonl(const std::string& path,
                         std::span<const EgoNetwork> egonets,
                         const std::string& config_hash);

void write_corpus_jsonl(const std::string& path,
                        std::span<const InteractionRecord> records);

/// Header-tolerant strict reader: accepts an optional artifact header line
/// and extra fields per record, throws if any line fails to parse.
std::vector<InteractionRecord> read_corpus_jsonl(const std::string& path);

void write_truth_json(const std::string& path, const GroundTruth& truth);
GroundTruth read_truth_json(const std::string& path);

std::vector<SignedRelationship> read_edges_csv(const std::string& path);
std::vector<EgoNetwork> read_egonets_jsonl(const std::string& path);

}  // namespace sen
