#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>

#include "garble/align.hpp"

namespace garble {

enum class CorruptionState { kCorrect, kSubstitute, kDelete, kInsert };

// Per-character distribution over the four corruption states. p_insert is
// both the state mass and the geometric continuation probability of the
// insertion self-loop, so a run of insertions after a non-deleted emission
// has mean length p_insert / (1 - p_insert).
struct StateDistribution {
  double p_correct = 1.0;
  double p_substitute = 0.0;
  double p_delete = 0.0;
  double p_insert = 0.0;

  double sum() const { return p_correct + p_substitute + p_delete + p_insert; }
  double state(CorruptionState s) const;
  void set_state(CorruptionState s, double value);
};

// Row sums and categorical sums are validated to this tolerance on every
// construction path (learn, renormalize, load).
inline constexpr double kProbabilitySumTolerance = 1e-9;

using CharDistribution = std::map<char32_t, double>;

// The learned corruption model: per-character state rows plus substitution
// and insertion character distributions. Characters unseen in training fall
// back to default_state. Immutable by convention: operations return copies.
struct ConditionalProbTable {
  std::map<char32_t, StateDistribution> per_char;
  StateDistribution default_state;
  std::map<char32_t, CharDistribution> substitution_dist;
  std::map<char32_t, CharDistribution> insertion_dist;
  std::set<char32_t> vocabulary;

  const StateDistribution& state_for(char32_t c) const;

  // Throws garble::Error on any invariant violation: rows or categorical
  // distributions not summing to 1 within tolerance, probabilities outside
  // [0, 1], substitution mass on the identity, vocabulary out of sync.
  void validate() const;
};

// Count accumulator for learning; corpora can be sharded, counted
// independently and merged before finalizing.
class CorruptionCounts {
 public:
  // Counts alignment events: match, substitution (with replacement char),
  // deletion, and insertions attributed to the preceding ground-truth
  // character. Throws if the pair violates AlignedPair invariants.
  void add(const AlignedPair& pair);
  void merge(const CorruptionCounts& other);
  ConditionalProbTable finalize() const;

  std::uint64_t base_events() const { return base_events_; }
  std::uint64_t leading_insertions() const { return leading_insertions_; }

 private:
  struct CharCounts {
    std::uint64_t matched = 0;
    std::uint64_t substituted = 0;
    std::uint64_t deleted = 0;
    std::uint64_t inserted = 0;
    std::map<char32_t, std::uint64_t> substitution_chars;
    std::map<char32_t, std::uint64_t> insertion_chars;
  };
  std::map<char32_t, CharCounts> counts_;
  std::uint64_t base_events_ = 0;
  // Insertions at record start have no preceding character to attribute to;
  // they are counted here and excluded from the model.
  std::uint64_t leading_insertions_ = 0;
};

// Learns the conditional distributions from aligned pairs. Errors on empty
// input or an invalid pair (with its index).
ConditionalProbTable learn(std::span<const AlignedPair> pairs);

// Sets p_correct to exactly 1 - target_cer for every row (including
// default_state) and scales the other three states by
// f = (1 - p_correct') / (1 - p_correct), which keeps each row summing to 1
// with no further renormalization. Rows with p_correct == 1 have no learned
// ratios, so the freed mass is split uniformly over the three corruption
// states. Substitution/insertion distributions are untouched.
ConditionalProbTable renormalize_to_cer(const ConditionalProbTable& table,
                                        double target_cer);

// General row adjustment for any state k: scales the non-k entries of each
// row by f = (1 - target) / (1 - P(k|x)), keeps entry k, then renormalizes
// by the row sum. Unlike renormalize_to_cer this does not land state k
// exactly on the target; it exists for adjusting states other than correct.
ConditionalProbTable rescale_state(const ConditionalProbTable& table,
                                   CorruptionState k, double target);

// 1 - sum_x P(correct|x) * freq(x in text); default_state covers unseen
// characters. Empty text has no defined value.
std::optional<double> expected_cer(const ConditionalProbTable& table,
                                   std::string_view text);

// Versioned JSON files; see docs/formats.md. Probabilities survive the
// round trip bit-identically (shortest exact decimal, <= 17 significant
// digits). load validates all table invariants and the format version.
void save_table(const ConditionalProbTable& table, const std::filesystem::path& path);
ConditionalProbTable load_table(const std::filesystem::path& path);

ConditionalProbTable parse_table_json(std::string_view json_text,
                                      const std::string& origin);
std::string table_to_json(const ConditionalProbTable& table);

}  // namespace garble
