#include "garble/engine.hpp"

#include <algorithm>
#include <cmath>

#include "garble/error.hpp"
#include "garble/rng.hpp"
#include "garble/tokenizer.hpp"
#include "garble/utf8.hpp"

namespace garble {

namespace {

struct CharSampler {
  std::vector<char32_t> chars;
  std::vector<double> probs;

  bool empty() const { return chars.empty(); }
  char32_t draw(Rng& rng) const { return chars[rng.categorical(probs)]; }
};

CharSampler sampler_from(const CharDistribution& dist) {
  CharSampler s;
  s.chars.reserve(dist.size());
  s.probs.reserve(dist.size());
  for (const auto& [cp, p] : dist) {
    s.chars.push_back(cp);
    s.probs.push_back(p);
  }
  return s;
}

CharSampler uniform_sampler(const std::set<char32_t>& vocabulary) {
  CharSampler s;
  if (vocabulary.empty()) return s;
  const double p = 1.0 / static_cast<double>(vocabulary.size());
  for (char32_t cp : vocabulary) {
    s.chars.push_back(cp);
    s.probs.push_back(p);
  }
  return s;
}

// Table flattened for sampling: per-character state rows plus character
// samplers, with uniform-over-vocabulary fallbacks for characters whose
// renormalized row allows a state never seen in training.
class Prepared {
 public:
  explicit Prepared(const ConditionalProbTable& table) : table_(table) {
    for (const auto& [cp, row] : table.per_char) check_insert_terminates(row);
    check_insert_terminates(table.default_state);
    vocab_fallback_ = uniform_sampler(table.vocabulary);
    for (const auto& [cp, dist] : table.substitution_dist) {
      substitution_[cp] = sampler_from(dist);
    }
    for (const auto& [cp, dist] : table.insertion_dist) {
      insertion_[cp] = sampler_from(dist);
    }
  }

  const StateDistribution& row(char32_t cp) const { return table_.state_for(cp); }

  // Replacement for cp: its learned distribution, else uniform over the
  // vocabulary excluding cp itself. A vocabulary with no alternative leaves
  // the character unchanged.
  char32_t draw_substitution(char32_t cp, Rng& rng) const {
    if (const auto it = substitution_.find(cp); it != substitution_.end()) {
      return it->second.draw(rng);
    }
    if (vocab_fallback_.empty()) return cp;
    const bool in_vocab = table_.vocabulary.count(cp) > 0;
    if (in_vocab && table_.vocabulary.size() == 1) return cp;
    char32_t draw = vocab_fallback_.draw(rng);
    while (draw == cp) draw = vocab_fallback_.draw(rng);
    return draw;
  }

  // Inserted character after cp; nothing is emitted if the table gives no
  // insertable characters at all.
  bool draw_insertion(char32_t cp, Rng& rng, char32_t& out) const {
    if (const auto it = insertion_.find(cp); it != insertion_.end()) {
      out = it->second.draw(rng);
      return true;
    }
    if (vocab_fallback_.empty()) return false;
    out = vocab_fallback_.draw(rng);
    return true;
  }

 private:
  static void check_insert_terminates(const StateDistribution& row) {
    if (row.p_insert >= 1.0) {
      throw Error("p_insert of 1 would insert forever; refusing to corrupt");
    }
  }

  const ConditionalProbTable& table_;
  CharSampler vocab_fallback_;
  std::map<char32_t, CharSampler> substitution_;
  std::map<char32_t, CharSampler> insertion_;
};

// One pass of the corruption network over a code point sequence.
void corrupt_code_points(std::u32string_view text, const Prepared& prepared,
                         Rng& rng, std::string& out, EventCounts& events) {
  for (const char32_t cp : text) {
    const StateDistribution& row = prepared.row(cp);
    const double probs[4] = {row.p_correct, row.p_substitute, row.p_delete,
                             row.p_insert};
    bool base_emitted = true;
    switch (rng.categorical(probs)) {
      case 0:  // correct
        utf8::append(out, cp);
        ++events.correct;
        break;
      case 1: {  // substitute
        const char32_t replacement = prepared.draw_substitution(cp, rng);
        utf8::append(out, replacement);
        if (replacement == cp) {
          ++events.correct;  // vocabulary offered no alternative
        } else {
          ++events.substituted;
        }
        break;
      }
      case 2:  // delete; the network finishes here, no insertion run
        ++events.deleted;
        base_emitted = false;
        break;
      case 3:  // insert: the character itself passes through unaltered
        utf8::append(out, cp);
        ++events.correct;
        break;
    }
    if (!base_emitted) continue;
    // Geometric self-loop: keep inserting while the continuation fires.
    while (rng.bernoulli(row.p_insert)) {
      char32_t inserted;
      if (prepared.draw_insertion(cp, rng, inserted)) {
        utf8::append(out, inserted);
        ++events.inserted;
      }
    }
  }
}

CorruptionResult finish_result(std::string_view original, std::string&& corrupted,
                               double effective_cer, bool saturated,
                               const EventCounts& events) {
  CorruptionResult result;
  result.corrupted = std::move(corrupted);
  result.cer = cer(original, result.corrupted);
  result.wer = wer(original, result.corrupted);
  result.effective_cer = effective_cer;
  result.saturated = saturated;
  result.events = events;
  return result;
}

CorruptionResult identity_result(std::string_view text) {
  EventCounts events;
  return finish_result(text, std::string(text), 0.0, false, events);
}

CorruptionResult corrupt_impl(std::string_view text, const ConditionalProbTable& table,
                              double target_cer, Rng& rng) {
  if (text.empty()) throw Error("cannot corrupt empty text");
  const ConditionalProbTable renormalized = renormalize_to_cer(table, target_cer);
  const Prepared prepared(renormalized);
  const std::u32string decoded = utf8::decode(text);
  std::string corrupted;
  corrupted.reserve(text.size() + text.size() / 4);
  EventCounts events;
  corrupt_code_points(decoded, prepared, rng, corrupted, events);
  return finish_result(text, std::move(corrupted), target_cer, false, events);
}

CorruptionResult corrupt_cer_wer_impl(std::string_view text,
                                      const ConditionalProbTable& table,
                                      double target_cer, double target_wer,
                                      Rng& rng) {
  if (text.empty()) throw Error("cannot corrupt empty text");
  if (!(target_wer > 0.0 && target_wer <= 1.0)) {
    throw Error("target WER must be in (0, 1], got " + std::to_string(target_wer));
  }
  if (!(target_cer >= 0.0 && target_cer < 1.0)) {
    throw Error("target CER must be in [0, 1), got " + std::to_string(target_cer));
  }
  if (target_wer == 1.0) {
    // Every word selected: identical to plain character-level corruption.
    return corrupt_impl(text, table, target_cer, rng);
  }

  double effective = target_cer / target_wer;
  bool saturated = false;
  if (effective > kEffectiveCerCap) {
    effective = kEffectiveCerCap;
    saturated = true;
  }
  // The effective rate may exceed the [0, 1) range of a CER target; the
  // correct-state floor is what a probability row can express.
  const double row_target = std::min(effective, 1.0 - 1e-12);
  const ConditionalProbTable renormalized = renormalize_to_cer(table, row_target);
  const Prepared prepared(renormalized);

  std::string corrupted;
  corrupted.reserve(text.size() + text.size() / 4);
  EventCounts events;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (is_ascii_space(text[pos])) {
      corrupted.push_back(text[pos]);  // whitespace is never selected
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !is_ascii_space(text[end])) ++end;
    const std::string_view word = text.substr(pos, end - pos);
    if (rng.bernoulli(target_wer)) {
      corrupt_code_points(utf8::decode(word), prepared, rng, corrupted, events);
    } else {
      corrupted.append(word);
    }
    pos = end;
  }
  return finish_result(text, std::move(corrupted), effective, saturated, events);
}

}  // namespace

void CorruptionSpec::validate() const {
  if (!(target_cer >= 0.0 && target_cer < 1.0)) {
    throw Error("spec target_cer must be in [0, 1)");
  }
  if (target_wer && !(*target_wer > 0.0 && *target_wer <= 1.0)) {
    throw Error("spec target_wer must be in (0, 1]");
  }
  if (mode != CorruptionMode::kMixture) return;

  if (buckets.empty()) throw Error("mixture spec has no buckets");
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const CorruptionBucket& b = buckets[i];
    if (!(b.weight >= 0.0)) throw Error("bucket " + std::to_string(i) + ": negative weight");
    if (!(b.cer_low >= 0.0) || !(b.cer_high >= b.cer_low) || !(b.cer_high <= 1.0)) {
      throw Error("bucket " + std::to_string(i) + ": invalid CER range");
    }
    if (b.cer_high > 0.0 && b.cer_low >= 1.0) {
      throw Error("bucket " + std::to_string(i) + ": CER target of 1 is not reachable");
    }
    if (b.wer_sampling == WerSampling::kFixed &&
        !(b.fixed_wer > 0.0 && b.fixed_wer <= 1.0)) {
      throw Error("bucket " + std::to_string(i) + ": fixed_wer must be in (0, 1]");
    }
    weight_sum += b.weight;
  }
  if (std::abs(weight_sum - 1.0) > kProbabilitySumTolerance) {
    throw Error("bucket weights sum to " + std::to_string(weight_sum) + ", not 1");
  }
  std::vector<CorruptionBucket> sorted = buckets;
  std::sort(sorted.begin(), sorted.end(),
            [](const CorruptionBucket& a, const CorruptionBucket& b) {
              return a.cer_low < b.cer_low;
            });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].cer_low < sorted[i - 1].cer_high) {
      throw Error("mixture bucket CER ranges overlap");
    }
  }
}

CorruptionResult corrupt(std::string_view text, const ConditionalProbTable& table,
                         double target_cer, std::uint64_t seed) {
  Rng rng(seed);
  return corrupt_impl(text, table, target_cer, rng);
}

CorruptionResult corrupt_cer_wer(std::string_view text,
                                 const ConditionalProbTable& table,
                                 double target_cer, double target_wer,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return corrupt_cer_wer_impl(text, table, target_cer, target_wer, rng);
}

std::vector<CorruptionResult> corrupt_mixture(
    std::span<const std::string> records, const ConditionalProbTable& table,
    const CorruptionSpec& spec,
    std::span<const std::pair<double, double>> empirical_cer_wer,
    std::uint64_t seed) {
  if (spec.mode != CorruptionMode::kMixture) {
    throw Error("corrupt_mixture requires a mixture-mode spec");
  }
  spec.validate();

  std::vector<double> weights;
  weights.reserve(spec.buckets.size());
  for (const CorruptionBucket& b : spec.buckets) weights.push_back(b.weight);

  // WER pools per empirical bucket: observations whose CER falls in the
  // bucket range (closed point for degenerate ranges).
  std::vector<std::vector<double>> wer_pools(spec.buckets.size());
  for (std::size_t b = 0; b < spec.buckets.size(); ++b) {
    const CorruptionBucket& bucket = spec.buckets[b];
    if (bucket.cer_high <= 0.0 || bucket.wer_sampling != WerSampling::kEmpirical) {
      continue;
    }
    for (const auto& [cer_obs, wer_obs] : empirical_cer_wer) {
      const bool in_range = bucket.cer_low == bucket.cer_high
                                ? cer_obs == bucket.cer_low
                                : cer_obs >= bucket.cer_low && cer_obs < bucket.cer_high;
      if (in_range) wer_pools[b].push_back(wer_obs);
    }
    if (wer_pools[b].empty()) {
      throw Error("mixture bucket [" + std::to_string(bucket.cer_low) + ", " +
                  std::to_string(bucket.cer_high) +
                  ") uses empirical WER sampling but no observation falls in it");
    }
  }

  std::vector<CorruptionResult> results;
  results.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    Rng rng(derive_stream_seed(seed, i));
    const std::size_t b = rng.categorical(weights);
    const CorruptionBucket& bucket = spec.buckets[b];
    if (bucket.cer_high <= 0.0) {
      results.push_back(identity_result(records[i]));
      continue;
    }
    const double record_cer = bucket.cer_low == bucket.cer_high
                                  ? bucket.cer_low
                                  : rng.uniform_real(bucket.cer_low, bucket.cer_high);
    double record_wer = bucket.wer_sampling == WerSampling::kEmpirical
                            ? wer_pools[b][rng.uniform_index(wer_pools[b].size())]
                            : bucket.fixed_wer;
    if (record_wer > 1.0) record_wer = 1.0;  // empirical WER can exceed 1
    if (record_wer <= 0.0 || record_cer <= 0.0) {
      results.push_back(identity_result(records[i]));
      continue;
    }
    results.push_back(
        corrupt_cer_wer_impl(records[i], table, record_cer, record_wer, rng));
  }
  return results;
}

std::vector<std::size_t> mixture_bucket_assignment(std::size_t record_count,
                                                   const CorruptionSpec& spec,
                                                   std::uint64_t seed) {
  spec.validate();
  std::vector<double> weights;
  weights.reserve(spec.buckets.size());
  for (const CorruptionBucket& b : spec.buckets) weights.push_back(b.weight);
  std::vector<std::size_t> assignment(record_count);
  for (std::size_t i = 0; i < record_count; ++i) {
    Rng rng(derive_stream_seed(seed, i));
    assignment[i] = rng.categorical(weights);
  }
  return assignment;
}

}  // namespace garble
