#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "garble/metrics.hpp"
#include "garble/prob_table.hpp"

namespace garble {

// Above this ratio, concentrating a document-level CER into the selected
// words can no longer be honoured; the per-word corruption level is capped
// here and the result flagged as saturated.
inline constexpr double kEffectiveCerCap = 1.5;

enum class CorruptionMode { kCerOnly, kCerWer, kMixture };

enum class WerSampling { kEmpirical, kFixed };

// One CER bucket of a mixture: records assigned here draw a target CER
// uniformly from [cer_low, cer_high) and a WER either from the empirical
// (cer, wer) observations whose CER falls in the bucket, or fixed_wer.
// A bucket with cer_high == 0 passes records through uncorrupted.
struct CorruptionBucket {
  double cer_low = 0.0;
  double cer_high = 0.0;
  double weight = 0.0;
  WerSampling wer_sampling = WerSampling::kEmpirical;
  double fixed_wer = 1.0;
};

struct CorruptionSpec {
  CorruptionMode mode = CorruptionMode::kCerOnly;
  double target_cer = 0.0;
  std::optional<double> target_wer;
  std::vector<CorruptionBucket> buckets;
  std::uint64_t seed = 0;

  void validate() const;
};

// Raw sampled event tallies: base emissions (correct/substituted/deleted)
// plus inserted characters. Unlike the observed metrics these are not
// collapsed by minimum-edit-distance rescoring.
struct EventCounts {
  std::uint64_t correct = 0;
  std::uint64_t substituted = 0;
  std::uint64_t deleted = 0;
  std::uint64_t inserted = 0;

  EventCounts& operator+=(const EventCounts& other) {
    correct += other.correct;
    substituted += other.substituted;
    deleted += other.deleted;
    inserted += other.inserted;
    return *this;
  }
};

struct CorruptionResult {
  std::string corrupted;
  // Recomputed from (original, corrupted) via the metrics module, so stored
  // values always equal an external rescoring.
  ErrorBreakdown cer;
  ErrorBreakdown wer;
  double effective_cer = 0.0;
  bool saturated = false;
  EventCounts events;

  std::optional<double> observed_cer() const { return cer.rate(); }
  std::optional<double> observed_wer() const { return wer.rate(); }
};

// Samples each character through the corruption network with the table
// renormalized to target_cer: one draw over {correct, substitute, delete,
// insert}, then after any non-deleted base emission a geometric run of
// insertions continuing with probability p_insert. Deterministic per seed.
CorruptionResult corrupt(std::string_view text, const ConditionalProbTable& table,
                         double target_cer, std::uint64_t seed);

// Concentrates corruption into words: each word is independently selected
// with probability target_wer and corrupted at
// effective_cer = min(target_cer / target_wer, kEffectiveCerCap); whitespace
// and unselected words pass through untouched. target_wer == 1 behaves
// exactly as corrupt().
CorruptionResult corrupt_cer_wer(std::string_view text,
                                 const ConditionalProbTable& table,
                                 double target_cer, double target_wer,
                                 std::uint64_t seed);

// Mixture corruption per spec.buckets. Each record derives its own RNG
// stream from (seed, record index), draws a bucket by weight, a target CER
// uniformly within the bucket, and a WER per the bucket's sampling rule.
// empirical_cer_wer supplies the (cer, wer) observations for empirical
// buckets; a bucket with no matching observations is an error.
std::vector<CorruptionResult> corrupt_mixture(
    std::span<const std::string> records, const ConditionalProbTable& table,
    const CorruptionSpec& spec,
    std::span<const std::pair<double, double>> empirical_cer_wer,
    std::uint64_t seed);

// Bucket index each record would be assigned; exposed so dataset manifests
// can report realized bucket shares.
std::vector<std::size_t> mixture_bucket_assignment(std::size_t record_count,
                                                   const CorruptionSpec& spec,
                                                   std::uint64_t seed);

}  // namespace garble
