#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace garble {

// Edit-error decomposition against a reference. rate() is
// (S + D + I) / (S + D + C); the denominator equals the reference length
// (characters for CER, words for WER) and insertions can push the rate
// above 1. An empty reference leaves the rate undefined.
struct ErrorBreakdown {
  std::uint64_t substitutions = 0;
  std::uint64_t deletions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t correct = 0;

  std::uint64_t reference_length() const { return substitutions + deletions + correct; }
  std::uint64_t edit_errors() const { return substitutions + deletions + insertions; }
  bool rate_defined() const { return reference_length() > 0; }
  std::optional<double> rate() const {
    if (!rate_defined()) return std::nullopt;
    return static_cast<double>(edit_errors()) / static_cast<double>(reference_length());
  }
};

// Character error rate over code points, no Unicode normalization. The
// individual S/D/I split follows the alignment tie-break (match/substitute,
// then delete, then insert); only the total S+D+I is stable across optimal
// edit scripts.
ErrorBreakdown cer(std::string_view reference, std::string_view hypothesis);

// Word error rate; words are runs of non-whitespace, punctuation attached.
ErrorBreakdown wer(std::string_view reference, std::string_view hypothesis);

struct RecordScore {
  std::string id;
  ErrorBreakdown cer;
  ErrorBreakdown wer;
};

struct CorpusScore {
  std::vector<RecordScore> per_record;
  std::optional<double> mean_cer, median_cer;
  std::optional<double> mean_wer, median_wer;
  // Records whose rate was undefined (empty reference / no reference words);
  // they stay in per_record but are excluded from the aggregates.
  std::size_t skipped_cer = 0;
  std::size_t skipped_wer = 0;
};

struct ScoreInput {
  std::string id;
  std::string reference;
  std::string hypothesis;
};

CorpusScore score_corpus(std::span<const ScoreInput> records);

// Recomputes the aggregate fields from per_record; used after partitioning.
void recompute_aggregates(CorpusScore& score);

// Partition by per-record CER: <= threshold goes low, > threshold goes high.
// Records with undefined CER land in neither side and are counted in both
// halves' skipped_cer.
std::pair<CorpusScore, CorpusScore> median_split(const CorpusScore& score,
                                                 double threshold);

// Report formats are pinned in docs/formats.md.
void write_score_report(const CorpusScore& score, const std::filesystem::path& tsv_path);
void write_score_summary(const CorpusScore& score, const std::filesystem::path& json_path);

}  // namespace garble
