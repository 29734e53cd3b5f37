#include "garble/metrics.hpp"

#include <algorithm>
#include <fstream>

#include "garble/edit_distance.hpp"
#include "garble/error.hpp"
#include "garble/tokenizer.hpp"
#include "garble/utf8.hpp"
#include "json.hpp"

namespace garble {

namespace {

template <typename T>
ErrorBreakdown breakdown_from_script(std::span<const T> ref, std::span<const T> hyp) {
  ErrorBreakdown out;
  if (ref.size() == hyp.size() && std::equal(ref.begin(), ref.end(), hyp.begin())) {
    out.correct = ref.size();
    return out;
  }
  for (EditOp op : min_edit_script<T>(ref, hyp)) {
    switch (op) {
      case EditOp::kMatch: ++out.correct; break;
      case EditOp::kSubstitute: ++out.substitutions; break;
      case EditOp::kDelete: ++out.deletions; break;
      case EditOp::kInsert: ++out.insertions; break;
    }
  }
  return out;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Median with the usual midpoint-of-two rule for even counts.
double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string format_rate(const std::optional<double>& rate) {
  if (!rate) return "NA";
  nlohmann::json j = *rate;
  return j.dump();
}

nlohmann::json rate_or_null(const std::optional<double>& rate) {
  if (!rate) return nullptr;
  return *rate;
}

}  // namespace

ErrorBreakdown cer(std::string_view reference, std::string_view hypothesis) {
  const std::u32string ref = utf8::decode(reference);
  const std::u32string hyp = utf8::decode(hypothesis);
  return breakdown_from_script<char32_t>(ref, hyp);
}

ErrorBreakdown wer(std::string_view reference, std::string_view hypothesis) {
  const auto ref = split_words(reference);
  const auto hyp = split_words(hypothesis);
  return breakdown_from_script<std::string_view>(ref, hyp);
}

CorpusScore score_corpus(std::span<const ScoreInput> records) {
  CorpusScore score;
  score.per_record.reserve(records.size());
  for (const ScoreInput& record : records) {
    RecordScore rs;
    rs.id = record.id;
    rs.cer = cer(record.reference, record.hypothesis);
    rs.wer = wer(record.reference, record.hypothesis);
    score.per_record.push_back(std::move(rs));
  }
  recompute_aggregates(score);
  return score;
}

void recompute_aggregates(CorpusScore& score) {
  std::vector<double> cers, wers;
  score.skipped_cer = score.skipped_wer = 0;
  for (const RecordScore& rs : score.per_record) {
    if (auto r = rs.cer.rate()) {
      cers.push_back(*r);
    } else {
      ++score.skipped_cer;
    }
    if (auto r = rs.wer.rate()) {
      wers.push_back(*r);
    } else {
      ++score.skipped_wer;
    }
  }
  score.mean_cer = cers.empty() ? std::nullopt : std::optional(mean_of(cers));
  score.median_cer = cers.empty() ? std::nullopt : std::optional(median_of(cers));
  score.mean_wer = wers.empty() ? std::nullopt : std::optional(mean_of(wers));
  score.median_wer = wers.empty() ? std::nullopt : std::optional(median_of(wers));
}

std::pair<CorpusScore, CorpusScore> median_split(const CorpusScore& score,
                                                 double threshold) {
  if (!(threshold >= 0.0)) {
    throw Error("median_split threshold must be finite and >= 0");
  }
  CorpusScore low, high;
  for (const RecordScore& rs : score.per_record) {
    const auto rate = rs.cer.rate();
    if (!rate) continue;  // undefined CER: counted via recompute below
    if (*rate <= threshold) {
      low.per_record.push_back(rs);
    } else {
      high.per_record.push_back(rs);
    }
  }
  recompute_aggregates(low);
  recompute_aggregates(high);
  const std::size_t undefined = score.per_record.size() -
                                (low.per_record.size() + high.per_record.size());
  low.skipped_cer += undefined;
  high.skipped_cer += undefined;
  return {std::move(low), std::move(high)};
}

void write_score_report(const CorpusScore& score, const std::filesystem::path& tsv_path) {
  std::ofstream out(tsv_path);
  if (!out) throw Error("cannot open report file " + tsv_path.string());
  out << "id\tcer_substitutions\tcer_deletions\tcer_insertions\tcer_correct\tcer_rate"
         "\twer_substitutions\twer_deletions\twer_insertions\twer_correct\twer_rate\n";
  for (const RecordScore& rs : score.per_record) {
    out << rs.id << '\t' << rs.cer.substitutions << '\t' << rs.cer.deletions << '\t'
        << rs.cer.insertions << '\t' << rs.cer.correct << '\t'
        << format_rate(rs.cer.rate()) << '\t' << rs.wer.substitutions << '\t'
        << rs.wer.deletions << '\t' << rs.wer.insertions << '\t' << rs.wer.correct
        << '\t' << format_rate(rs.wer.rate()) << '\n';
  }
  if (!out) throw Error("failed writing report file " + tsv_path.string());
}

void write_score_summary(const CorpusScore& score, const std::filesystem::path& json_path) {
  nlohmann::json j;
  j["records"] = score.per_record.size();
  j["skipped_cer"] = score.skipped_cer;
  j["skipped_wer"] = score.skipped_wer;
  j["mean_cer"] = rate_or_null(score.mean_cer);
  j["median_cer"] = rate_or_null(score.median_cer);
  j["mean_wer"] = rate_or_null(score.mean_wer);
  j["median_wer"] = rate_or_null(score.median_wer);
  std::ofstream out(json_path);
  if (!out) throw Error("cannot open summary file " + json_path.string());
  out << j.dump(2) << '\n';
}

}  // namespace garble
