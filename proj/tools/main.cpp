#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "garble/align.hpp"
#include "garble/build.hpp"
#include "garble/corpus_io.hpp"
#include "garble/dataset.hpp"
#include "garble/engine.hpp"
#include "garble/error.hpp"
#include "garble/metrics.hpp"
#include "garble/prob_table.hpp"
#include "garble/prompts.hpp"
#include "garble/rng.hpp"
#include "garble/tokenizer.hpp"
#include "garble/version.hpp"
#include "json.hpp"

namespace {

struct LearnArgs {
  std::string gt_path, ocr_path, tsv_path, out_path;
  std::uint32_t gap_code_point = static_cast<std::uint32_t>(garble::kDefaultGapSymbol);
  std::size_t max_record_length = garble::kDefaultMaxRecordLength;
};

int run_learn(const LearnArgs& args) {
  const bool line_pairs = !args.gt_path.empty() || !args.ocr_path.empty();
  const bool two_column = !args.tsv_path.empty();
  if (line_pairs == two_column) {
    throw garble::Error("provide either --gt and --ocr, or --tsv");
  }
  if (line_pairs && (args.gt_path.empty() || args.ocr_path.empty())) {
    throw garble::Error("--gt and --ocr must be given together");
  }

  const garble::ParallelCorpus corpus =
      two_column ? garble::read_two_column(args.tsv_path)
                 : garble::read_line_pairs(args.gt_path, args.ocr_path);
  if (corpus.records.empty()) {
    throw garble::Error("no usable records in " + corpus.source);
  }

  std::vector<std::pair<std::string, std::string>> records;
  records.reserve(corpus.records.size());
  for (const auto& r : corpus.records) records.emplace_back(r.gt, r.ocr);
  const auto aligned = garble::align_corpus(
      records, static_cast<char32_t>(args.gap_code_point), args.max_record_length);
  const garble::ConditionalProbTable table = garble::learn(aligned);
  garble::save_table(table, args.out_path);

  std::cerr << "learned from " << corpus.records.size() << " records ("
            << corpus.dropped_empty_gt << " dropped for empty ground truth)\n"
            << "vocabulary size: " << table.vocabulary.size() << '\n'
            << "global P(correct): " << table.default_state.p_correct << '\n'
            << "table written to " << args.out_path << '\n';
  return 0;
}

struct CorruptArgs {
  std::string in_path, table_path, out_path;
  double cer = 0.0;
  std::optional<double> wer;
  std::uint64_t seed = 0;
};

int run_corrupt(const CorruptArgs& args) {
  const garble::ConditionalProbTable table = garble::load_table(args.table_path);
  if (!(args.cer >= 0.0 && args.cer < 1.0)) {
    throw garble::Error("--cer must be in [0, 1)");
  }
  if (args.wer && !(*args.wer > 0.0 && *args.wer <= 1.0)) {
    throw garble::Error("--wer must be in (0, 1]");
  }
  const auto lines = garble::read_lines(args.in_path);

  const bool to_stdout = args.out_path == "-";
  std::ofstream file_out;
  if (!to_stdout) {
    file_out.open(args.out_path, std::ios::binary);
    if (!file_out) {
      throw garble::Error("cannot open " + args.out_path + " for writing");
    }
  }
  std::ostream& out = to_stdout ? std::cout : file_out;

  const garble::WhitespaceTokenizer tokenizer;
  std::size_t skipped_empty = 0, emitted = 0;
  double cer_sum = 0.0, wer_sum = 0.0;
  std::size_t cer_count = 0, wer_count = 0;
  bool any_saturated = false;
  double effective = args.cer;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      ++skipped_empty;
      continue;
    }
    const std::uint64_t record_seed = garble::derive_stream_seed(args.seed, i);
    garble::CorruptionResult result =
        args.wer ? garble::corrupt_cer_wer(lines[i], table, args.cer, *args.wer,
                                           record_seed)
                 : garble::corrupt(lines[i], table, args.cer, record_seed);
    effective = result.effective_cer;
    any_saturated = any_saturated || result.saturated;

    garble::Observation obs;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06zu", i);
    obs.id = std::string("rec-") + buf;
    obs.source = args.in_path + ":" + std::to_string(i + 1);
    obs.clean_text = lines[i];
    obs.token_count = tokenizer.count_tokens(lines[i]);
    obs.corrupted_text = std::move(result.corrupted);
    obs.target_cer = args.cer;
    obs.target_wer = args.wer;
    obs.effective_cer = result.effective_cer;
    obs.saturated = result.saturated;
    obs.observed_cer = result.cer.rate();
    obs.observed_wer = result.wer.rate();
    obs.events = result.events;
    if (obs.observed_cer) {
      cer_sum += *obs.observed_cer;
      ++cer_count;
    }
    if (obs.observed_wer) {
      wer_sum += *obs.observed_wer;
      ++wer_count;
    }
    out << garble::observation_to_json(obs) << '\n';
    ++emitted;
  }
  if (!out) throw garble::Error("failed writing corrupted records");

  if (!to_stdout) {
    nlohmann::json manifest;
    manifest["format_version"] = garble::kDatasetFormatVersion;
    manifest["toolkit_version"] = garble::kToolkitVersion;
    manifest["records"] = emitted;
    manifest["skipped_empty"] = skipped_empty;
    manifest["seed"] = args.seed;
    manifest["table"] = args.table_path;
    manifest["target_cer"] = args.cer;
    manifest["target_wer"] = args.wer ? nlohmann::json(*args.wer) : nlohmann::json(nullptr);
    manifest["effective_cer"] = effective;
    manifest["saturated"] = any_saturated;
    manifest["mean_observed_cer"] =
        cer_count ? nlohmann::json(cer_sum / cer_count) : nlohmann::json(nullptr);
    manifest["mean_observed_wer"] =
        wer_count ? nlohmann::json(wer_sum / wer_count) : nlohmann::json(nullptr);
    std::ofstream mout(args.out_path + ".manifest.json", std::ios::binary);
    if (!mout) {
      throw garble::Error("cannot open " + args.out_path + ".manifest.json");
    }
    mout << manifest.dump(2) << '\n';
  }

  std::cerr << "corrupted " << emitted << " records (" << skipped_empty
            << " empty lines skipped)";
  if (cer_count) std::cerr << ", mean observed CER " << cer_sum / cer_count;
  std::cerr << '\n';
  return 0;
}

struct ScoreArgs {
  std::string gt_path, hyp_path, out_path, summary_path;
  std::optional<double> split_at;
  bool split_at_median = false;
};

int run_score(const ScoreArgs& args) {
  const auto gt_lines = garble::read_lines(args.gt_path);
  const auto hyp_lines = garble::read_lines(args.hyp_path);
  if (gt_lines.size() != hyp_lines.size()) {
    throw garble::Error("record count mismatch: " + args.gt_path + " has " +
                        std::to_string(gt_lines.size()) + " lines, " + args.hyp_path +
                        " has " + std::to_string(hyp_lines.size()));
  }
  std::vector<garble::ScoreInput> inputs;
  inputs.reserve(gt_lines.size());
  for (std::size_t i = 0; i < gt_lines.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06zu", i + 1);
    inputs.push_back({std::string("line-") + buf, gt_lines[i], hyp_lines[i]});
  }
  const garble::CorpusScore score = garble::score_corpus(inputs);
  garble::write_score_report(score, args.out_path);

  const std::string summary_path =
      args.summary_path.empty() ? args.out_path + ".summary.json" : args.summary_path;
  garble::write_score_summary(score, summary_path);

  if (args.split_at || args.split_at_median) {
    std::optional<double> threshold = args.split_at;
    if (args.split_at_median) threshold = score.median_cer;
    if (!threshold) {
      throw garble::Error("cannot split at the median: no record has a defined CER");
    }
    const auto [low, high] = garble::median_split(score, *threshold);
    garble::write_score_report(low, args.out_path + ".low.tsv");
    garble::write_score_report(high, args.out_path + ".high.tsv");
    nlohmann::json split;
    split["threshold"] = *threshold;
    split["low_records"] = low.per_record.size();
    split["high_records"] = high.per_record.size();
    split["low_median_cer"] =
        low.median_cer ? nlohmann::json(*low.median_cer) : nlohmann::json(nullptr);
    split["high_median_cer"] =
        high.median_cer ? nlohmann::json(*high.median_cer) : nlohmann::json(nullptr);
    std::ofstream sout(args.out_path + ".split.json", std::ios::binary);
    if (!sout) throw garble::Error("cannot open " + args.out_path + ".split.json");
    sout << split.dump(2) << '\n';
    std::cerr << "split at CER " << *threshold << ": " << low.per_record.size()
              << " low / " << high.per_record.size() << " high\n";
  }

  std::cerr << "scored " << score.per_record.size() << " records";
  if (score.mean_cer) std::cerr << ", mean CER " << *score.mean_cer;
  if (score.mean_wer) std::cerr << ", mean WER " << *score.mean_wer;
  std::cerr << '\n';
  return 0;
}

struct BuildArgs {
  std::string config_path, out_dir;
  unsigned threads = 0;
};

int run_build_cmd(const BuildArgs& args) {
  garble::BuildConfig config = garble::parse_build_config(args.config_path);
  if (args.threads != 0) config.threads = args.threads;
  const auto ids = garble::run_build(config, args.out_dir);
  std::cerr << "built " << ids.size() << " dataset(s) under " << args.out_dir << '\n';
  for (const auto& id : ids) std::cerr << "  " << id << '\n';
  return 0;
}

struct PromptsArgs {
  std::string events_path, out_path;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

int run_prompts(const PromptsArgs& args) {
  std::vector<std::string> events;
  for (std::string& line : garble::read_lines(args.events_path)) {
    if (!line.empty()) events.push_back(std::move(line));
  }
  const auto prompts = garble::render_prompts(events, args.count, args.seed);
  garble::write_prompts(prompts, args.out_path);
  std::cerr << "rendered " << prompts.size() << " prompts ("
            << garble::style_combination_count() << " possible style combinations)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"garble: learns OCR-style corruption models, corrupts text to "
               "target CER/WER profiles, scores texts and builds training datasets"};
  app.set_version_flag("--version",
                       std::string("garble ") + garble::kToolkitVersion +
                           " (table format " + std::to_string(garble::kTableFormatVersion) +
                           ", dataset format " +
                           std::to_string(garble::kDatasetFormatVersion) + ")");
  app.require_subcommand(1);

  LearnArgs learn_args;
  auto* learn_cmd =
      app.add_subcommand("learn", "learn a corruption table from parallel texts");
  learn_cmd->add_option("--gt", learn_args.gt_path, "ground-truth file, one record per line");
  learn_cmd->add_option("--ocr", learn_args.ocr_path, "OCR file, line-aligned with --gt");
  learn_cmd->add_option("--tsv", learn_args.tsv_path, "two-column file: gt<TAB>ocr");
  learn_cmd->add_option("-o,--out", learn_args.out_path, "output table file")->required();
  learn_cmd->add_option("--gap-codepoint", learn_args.gap_code_point,
                        "alignment gap symbol (code point number)");
  learn_cmd->add_option("--max-record-length", learn_args.max_record_length,
                        "reject records longer than this many characters");

  CorruptArgs corrupt_args;
  auto* corrupt_cmd =
      app.add_subcommand("corrupt", "corrupt text records to a target CER (and WER)");
  corrupt_cmd->add_option("-i,--in", corrupt_args.in_path, "input file, one record per line")
      ->required();
  corrupt_cmd->add_option("-t,--table", corrupt_args.table_path, "probability table file")
      ->required();
  corrupt_cmd->add_option("--cer", corrupt_args.cer, "target character error rate")
      ->required();
  double wer_value = 0.0;
  auto* wer_opt = corrupt_cmd->add_option("--wer", wer_value, "target word error rate");
  corrupt_cmd->add_option("--seed", corrupt_args.seed, "random seed (default 0)");
  corrupt_cmd->add_option("-o,--out", corrupt_args.out_path,
                          "output records file, or - for stdout")
      ->required();

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "score hypothesis text against ground truth");
  score_cmd->add_option("--gt", score_args.gt_path, "reference file, one record per line")
      ->required();
  score_cmd->add_option("--hyp", score_args.hyp_path, "hypothesis file, line-aligned")
      ->required();
  score_cmd->add_option("-o,--out", score_args.out_path, "report TSV path")->required();
  score_cmd->add_option("--summary", score_args.summary_path,
                        "summary JSON path (default: <out>.summary.json)");
  double split_value = 0.0;
  auto* split_opt =
      score_cmd->add_option("--split-at", split_value, "partition records at this CER");
  score_cmd->add_flag("--split-at-median", score_args.split_at_median,
                      "partition records at the median CER");

  BuildArgs build_args;
  auto* build_cmd = app.add_subcommand("build", "build datasets from a config file");
  build_cmd->add_option("-c,--config", build_args.config_path, "build config JSON")
      ->required();
  build_cmd->add_option("-o,--out-dir", build_args.out_dir, "output directory")->required();
  build_cmd->add_option("--threads", build_args.threads,
                        "worker threads (0 = hardware concurrency)");

  PromptsArgs prompts_args;
  auto* prompts_cmd =
      app.add_subcommand("prompts", "render synthetic-text generation prompts");
  prompts_cmd->add_option("--events", prompts_args.events_path,
                          "seed event file, one event per line")
      ->required();
  prompts_cmd->add_option("-n,--count", prompts_args.count, "number of prompts")
      ->required();
  prompts_cmd->add_option("--seed", prompts_args.seed, "random seed (default 0)");
  prompts_cmd->add_option("-o,--out", prompts_args.out_path, "output JSONL file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn_cmd->parsed()) return run_learn(learn_args);
    if (corrupt_cmd->parsed()) {
      if (wer_opt->count() > 0) corrupt_args.wer = wer_value;
      return run_corrupt(corrupt_args);
    }
    if (score_cmd->parsed()) {
      if (split_opt->count() > 0) score_args.split_at = split_value;
      if (score_args.split_at && score_args.split_at_median) {
        throw garble::Error("--split-at and --split-at-median are mutually exclusive");
      }
      return run_score(score_args);
    }
    if (build_cmd->parsed()) return run_build_cmd(build_args);
    if (prompts_cmd->parsed()) return run_prompts(prompts_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
