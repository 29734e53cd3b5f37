#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "garble/corpus_io.hpp"
#include "garble/engine.hpp"
#include "garble/tokenizer.hpp"

namespace garble {

// One training record: a clean token window, its corrupted counterpart and
// the corruption bookkeeping. Serialized one JSON object per line; see
// docs/formats.md.
struct Observation {
  std::string id;
  std::string source;
  std::string clean_text;
  std::string corrupted_text;
  std::size_t token_count = 0;
  std::optional<double> target_cer;
  std::optional<double> target_wer;
  std::optional<double> effective_cer;
  std::optional<double> observed_cer;
  std::optional<double> observed_wer;
  bool saturated = false;
  std::optional<EventCounts> events;
};

struct DatasetStats {
  std::optional<double> mean_observed_cer, median_observed_cer;
  std::optional<double> mean_observed_wer, median_observed_wer;
};

// Everything needed to regenerate the dataset bit-identically given the
// source corpus files and the probability table: the build's root seed, the
// dataset's index within the build, targets and window geometry.
struct DatasetManifest {
  std::string dataset_id;
  std::string kind;  // uniform_cer | cer_wer_grid | mixture | token_grid
  std::uint64_t seed = 0;
  std::uint64_t dataset_index = 0;
  std::size_t record_count = 0;
  std::size_t tokens_per_observation = 0;
  std::uint64_t total_tokens = 0;
  std::string tokenizer_name;
  std::vector<std::string> source_corpus;
  std::string table_source;
  std::optional<double> target_cer;
  std::optional<double> target_wer;
  std::optional<double> effective_cer;
  bool saturated = false;
  std::vector<CorruptionBucket> buckets;     // mixture only
  std::vector<std::size_t> bucket_counts;    // mixture only: realized shares
  DatasetStats stats;
  std::size_t skipped_short_sources = 0;
};

struct BuiltDataset {
  DatasetManifest manifest;
  std::vector<Observation> observations;
};

struct BuildOptions {
  std::size_t tokens_per_observation = 200;
  std::size_t observations = 0;
  std::uint64_t seed = 0;
  const Tokenizer* tokenizer = nullptr;  // null: whitespace tokenizer
  unsigned threads = 0;                  // 0: hardware concurrency
  std::vector<std::string> source_corpus_ids;
  std::string table_source;
};

struct SliceResult {
  std::vector<Observation> observations;
  std::size_t skipped_short_sources = 0;
};

// Cuts n_obs clean windows of exactly tokens_per_obs tokens, token-aligned
// and uniformly positioned. Sources are drawn without replacement first,
// then with replacement (fresh positions) once the corpus is exhausted;
// sources shorter than the window are skipped and counted.
SliceResult slice_observations(std::span<const SourceDocument> corpus,
                               const Tokenizer& tokenizer,
                               std::size_t tokens_per_obs, std::size_t n_obs,
                               std::uint64_t seed);

// One dataset per CER level; all levels share the same clean windows and
// differ only in corruption.
std::vector<BuiltDataset> build_uniform_cer_suite(
    std::span<const SourceDocument> corpus, const ConditionalProbTable& table,
    std::span<const double> cer_levels, const BuildOptions& options);

// Cartesian product of CER and WER targets, one dataset per cell, clean
// windows shared. Cells whose CER/WER ratio exceeds the effective-CER cap
// are built anyway and flagged saturated in their manifests.
std::vector<BuiltDataset> build_cer_wer_grid(std::span<const SourceDocument> corpus,
                                             const ConditionalProbTable& table,
                                             std::span<const double> cer_values,
                                             std::span<const double> wer_values,
                                             const BuildOptions& options);

struct TokenGridCell {
  std::uint64_t total_tokens = 0;
  std::size_t tokens_per_observation = 0;
};

// One dataset per (total token budget, tokens per observation) cell at a
// fixed corruption level; total_tokens must divide evenly.
std::vector<BuiltDataset> build_token_grid(std::span<const SourceDocument> corpus,
                                           const ConditionalProbTable& table,
                                           std::span<const TokenGridCell> cells,
                                           double target_cer, double target_wer,
                                           const BuildOptions& options);

// Single mixture dataset driven by spec.buckets and the empirical (cer, wer)
// observations.
BuiltDataset build_mixture(std::span<const SourceDocument> corpus,
                           const ConditionalProbTable& table,
                           const CorruptionSpec& spec,
                           std::span<const std::pair<double, double>> empirical,
                           const BuildOptions& options,
                           const std::string& dataset_id);

struct EmpiricalCerWer {
  std::vector<std::pair<double, double>> pairs;
  std::size_t skipped = 0;
};

// Per-record (CER, WER) of a parallel corpus; records with undefined rates
// are skipped and counted.
EmpiricalCerWer empirical_cer_wer(std::span<const ParallelRecord> records);

// data.jsonl + manifest.json under dir; creates the directory.
void write_dataset(const BuiltDataset& dataset, const std::filesystem::path& dir);

std::vector<Observation> read_observations(const std::filesystem::path& jsonl_path);

std::string observation_to_json(const Observation& obs);
std::string manifest_to_json(const DatasetManifest& manifest);

}  // namespace garble
