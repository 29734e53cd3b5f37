#include "garble/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "garble/error.hpp"
#include "garble/metrics.hpp"
#include "garble/rng.hpp"
#include "garble/version.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace garble {

namespace {

const WhitespaceTokenizer kDefaultTokenizer;

const Tokenizer& tokenizer_of(const BuildOptions& options) {
  return options.tokenizer ? *options.tokenizer : kDefaultTokenizer;
}

std::string format_number(double v) { return nlohmann::json(v).dump(); }

std::string observation_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return std::string("obs-") + buf;
}

// Seed scheme (see docs/formats.md): the build root R derives a shared
// slicing stream derive(R, 0) and per-dataset roots D_d = derive(R, d + 1);
// record j of a dataset corrupts with stream derive(D_d, j + 1), slot 0
// being reserved for per-dataset slicing (token grid cells).
struct DatasetSeeds {
  std::uint64_t root;
  std::uint64_t shared_slice() const { return derive_stream_seed(root, 0); }
  std::uint64_t dataset_root(std::uint64_t d) const {
    return derive_stream_seed(root, d + 1);
  }
};

void apply_result(Observation& obs, CorruptionResult&& result, double target_cer,
                  std::optional<double> target_wer) {
  obs.corrupted_text = std::move(result.corrupted);
  obs.target_cer = target_cer;
  obs.target_wer = target_wer;
  obs.effective_cer = result.effective_cer;
  obs.saturated = result.saturated;
  obs.observed_cer = result.cer.rate();
  obs.observed_wer = result.wer.rate();
  obs.events = result.events;
}

// Corrupts each observation in place from its own derived stream.
void corrupt_all(std::vector<Observation>& observations,
                 const ConditionalProbTable& table, double target_cer,
                 std::optional<double> target_wer, std::uint64_t dataset_root,
                 unsigned threads) {
  detail::parallel_for(observations.size(), threads, [&](std::size_t j) {
    Observation& obs = observations[j];
    const std::uint64_t seed = derive_stream_seed(dataset_root, j + 1);
    CorruptionResult result =
        target_wer ? corrupt_cer_wer(obs.clean_text, table, target_cer, *target_wer, seed)
                   : corrupt(obs.clean_text, table, target_cer, seed);
    apply_result(obs, std::move(result), target_cer, target_wer);
  });
}

DatasetStats compute_stats(const std::vector<Observation>& observations) {
  std::vector<double> cers, wers;
  cers.reserve(observations.size());
  wers.reserve(observations.size());
  for (const Observation& obs : observations) {
    if (obs.observed_cer) cers.push_back(*obs.observed_cer);
    if (obs.observed_wer) wers.push_back(*obs.observed_wer);
  }
  const auto mean = [](const std::vector<double>& v) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };
  const auto median = [](std::vector<double> v) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  DatasetStats stats;
  stats.mean_observed_cer = mean(cers);
  stats.median_observed_cer = median(std::move(cers));
  stats.mean_observed_wer = mean(wers);
  stats.median_observed_wer = median(std::move(wers));
  return stats;
}

DatasetManifest base_manifest(const BuildOptions& options, const std::string& id,
                              const std::string& kind, std::uint64_t dataset_index,
                              const SliceResult& slices) {
  DatasetManifest m;
  m.dataset_id = id;
  m.kind = kind;
  m.seed = options.seed;
  m.dataset_index = dataset_index;
  m.record_count = slices.observations.size();
  m.tokenizer_name = tokenizer_of(options).name();
  m.source_corpus = options.source_corpus_ids;
  m.table_source = options.table_source;
  m.skipped_short_sources = slices.skipped_short_sources;
  std::uint64_t total = 0;
  for (const Observation& obs : slices.observations) total += obs.token_count;
  m.total_tokens = total;
  return m;
}

}  // namespace

SliceResult slice_observations(std::span<const SourceDocument> corpus,
                               const Tokenizer& tokenizer,
                               std::size_t tokens_per_obs, std::size_t n_obs,
                               std::uint64_t seed) {
  if (tokens_per_obs == 0) throw Error("tokens per observation must be at least 1");
  if (corpus.empty()) throw Error("corpus is empty");

  std::vector<std::vector<TokenSpan>> spans(corpus.size());
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    spans[i] = tokenizer.tokenize(corpus[i].text);
    if (spans[i].size() >= tokens_per_obs) eligible.push_back(i);
  }
  SliceResult result;
  result.skipped_short_sources = corpus.size() - eligible.size();
  if (n_obs == 0) return result;
  if (eligible.empty()) {
    throw Error("no source document has at least " + std::to_string(tokens_per_obs) +
                " tokens");
  }

  Rng rng(seed);
  std::vector<std::size_t> order = eligible;
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }

  result.observations.reserve(n_obs);
  for (std::size_t t = 0; t < n_obs; ++t) {
    const std::size_t src = t < order.size()
                                ? order[t]
                                : eligible[rng.uniform_index(eligible.size())];
    const auto& doc_spans = spans[src];
    const std::size_t max_start = doc_spans.size() - tokens_per_obs;
    const std::size_t start = rng.uniform_index(max_start + 1);
    const std::size_t begin = doc_spans[start].begin;
    const std::size_t end = doc_spans[start + tokens_per_obs - 1].end;

    Observation obs;
    obs.id = observation_id(t);
    obs.source = corpus[src].id + "@" + std::to_string(start);
    obs.clean_text = corpus[src].text.substr(begin, end - begin);
    obs.token_count = tokens_per_obs;
    result.observations.push_back(std::move(obs));
  }
  return result;
}

std::vector<BuiltDataset> build_uniform_cer_suite(
    std::span<const SourceDocument> corpus, const ConditionalProbTable& table,
    std::span<const double> cer_levels, const BuildOptions& options) {
  const DatasetSeeds seeds{options.seed};
  const SliceResult slices =
      slice_observations(corpus, tokenizer_of(options), options.tokens_per_observation,
                         options.observations, seeds.shared_slice());
  std::vector<BuiltDataset> datasets;
  datasets.reserve(cer_levels.size());
  for (std::size_t d = 0; d < cer_levels.size(); ++d) {
    const double level = cer_levels[d];
    BuiltDataset built;
    built.observations = slices.observations;
    corrupt_all(built.observations, table, level, std::nullopt,
                seeds.dataset_root(d), options.threads);
    built.manifest = base_manifest(options, "cer-" + format_number(level),
                                   "uniform_cer", d, slices);
    built.manifest.target_cer = level;
    built.manifest.effective_cer = level;
    built.manifest.stats = compute_stats(built.observations);
    datasets.push_back(std::move(built));
  }
  return datasets;
}

std::vector<BuiltDataset> build_cer_wer_grid(std::span<const SourceDocument> corpus,
                                             const ConditionalProbTable& table,
                                             std::span<const double> cer_values,
                                             std::span<const double> wer_values,
                                             const BuildOptions& options) {
  const DatasetSeeds seeds{options.seed};
  const SliceResult slices =
      slice_observations(corpus, tokenizer_of(options), options.tokens_per_observation,
                         options.observations, seeds.shared_slice());
  std::vector<BuiltDataset> datasets;
  datasets.reserve(cer_values.size() * wer_values.size());
  std::uint64_t d = 0;
  for (const double cer_target : cer_values) {
    for (const double wer_target : wer_values) {
      BuiltDataset built;
      built.observations = slices.observations;
      corrupt_all(built.observations, table, cer_target, wer_target,
                  seeds.dataset_root(d), options.threads);
      built.manifest = base_manifest(
          options,
          "cer-" + format_number(cer_target) + "-wer-" + format_number(wer_target),
          "cer_wer_grid", d, slices);
      built.manifest.target_cer = cer_target;
      built.manifest.target_wer = wer_target;
      const double effective = cer_target / wer_target;
      built.manifest.saturated = effective > kEffectiveCerCap;
      built.manifest.effective_cer = std::min(effective, kEffectiveCerCap);
      built.manifest.stats = compute_stats(built.observations);
      datasets.push_back(std::move(built));
      ++d;
    }
  }
  return datasets;
}

std::vector<BuiltDataset> build_token_grid(std::span<const SourceDocument> corpus,
                                           const ConditionalProbTable& table,
                                           std::span<const TokenGridCell> cells,
                                           double target_cer, double target_wer,
                                           const BuildOptions& options) {
  const DatasetSeeds seeds{options.seed};
  std::vector<BuiltDataset> datasets;
  datasets.reserve(cells.size());
  for (std::size_t d = 0; d < cells.size(); ++d) {
    const TokenGridCell& cell = cells[d];
    if (cell.tokens_per_observation == 0 ||
        cell.total_tokens % cell.tokens_per_observation != 0) {
      throw Error("token grid cell " + std::to_string(cell.total_tokens) + "/" +
                  std::to_string(cell.tokens_per_observation) +
                  " does not divide evenly");
    }
    const std::size_t n_obs =
        static_cast<std::size_t>(cell.total_tokens / cell.tokens_per_observation);
    const std::uint64_t dataset_root = seeds.dataset_root(d);
    SliceResult slices = slice_observations(
        corpus, tokenizer_of(options), cell.tokens_per_observation, n_obs,
        derive_stream_seed(dataset_root, 0));
    corrupt_all(slices.observations, table, target_cer, target_wer, dataset_root,
                options.threads);

    BuiltDataset built;
    built.manifest = base_manifest(
        options,
        "tokens-" + std::to_string(cell.total_tokens) + "-per-" +
            std::to_string(cell.tokens_per_observation),
        "token_grid", d, slices);
    built.manifest.tokens_per_observation = cell.tokens_per_observation;
    built.manifest.target_cer = target_cer;
    built.manifest.target_wer = target_wer;
    const double effective = target_cer / target_wer;
    built.manifest.saturated = effective > kEffectiveCerCap;
    built.manifest.effective_cer = std::min(effective, kEffectiveCerCap);
    built.observations = std::move(slices.observations);
    built.manifest.stats = compute_stats(built.observations);
    datasets.push_back(std::move(built));
  }
  return datasets;
}

BuiltDataset build_mixture(std::span<const SourceDocument> corpus,
                           const ConditionalProbTable& table,
                           const CorruptionSpec& spec,
                           std::span<const std::pair<double, double>> empirical,
                           const BuildOptions& options,
                           const std::string& dataset_id) {
  spec.validate();
  const DatasetSeeds seeds{options.seed};
  SliceResult slices =
      slice_observations(corpus, tokenizer_of(options), options.tokens_per_observation,
                         options.observations, seeds.shared_slice());

  std::vector<std::string> records;
  records.reserve(slices.observations.size());
  for (const Observation& obs : slices.observations) records.push_back(obs.clean_text);

  const std::uint64_t engine_seed = seeds.dataset_root(0);
  std::vector<CorruptionResult> results =
      corrupt_mixture(records, table, spec, empirical, engine_seed);
  const std::vector<std::size_t> assignment =
      mixture_bucket_assignment(records.size(), spec, engine_seed);

  for (std::size_t j = 0; j < slices.observations.size(); ++j) {
    Observation& obs = slices.observations[j];
    CorruptionResult& result = results[j];
    const CorruptionBucket& bucket = spec.buckets[assignment[j]];
    obs.corrupted_text = std::move(result.corrupted);
    // Targets are drawn per record inside the engine; the bucket is the
    // reproducible fact, so it goes into the provenance string.
    obs.target_cer = std::nullopt;
    obs.target_wer = std::nullopt;
    obs.effective_cer = result.effective_cer;
    obs.saturated = result.saturated;
    obs.observed_cer = result.cer.rate();
    obs.observed_wer = result.wer.rate();
    obs.events = result.events;
    obs.source += ";bucket=" + format_number(bucket.cer_low) + "-" +
                  format_number(bucket.cer_high);
  }

  BuiltDataset built;
  built.manifest = base_manifest(options, dataset_id, "mixture", 0, slices);
  built.manifest.buckets.assign(spec.buckets.begin(), spec.buckets.end());
  built.manifest.bucket_counts.assign(spec.buckets.size(), 0);
  for (std::size_t b : assignment) ++built.manifest.bucket_counts[b];
  built.observations = std::move(slices.observations);
  built.manifest.stats = compute_stats(built.observations);
  return built;
}

EmpiricalCerWer empirical_cer_wer(std::span<const ParallelRecord> records) {
  if (records.empty()) throw Error("cannot compute empirical CER/WER of an empty corpus");
  EmpiricalCerWer out;
  out.pairs.reserve(records.size());
  for (const ParallelRecord& record : records) {
    const auto cer_rate = cer(record.gt, record.ocr).rate();
    const auto wer_rate = wer(record.gt, record.ocr).rate();
    if (!cer_rate || !wer_rate) {
      ++out.skipped;
      continue;
    }
    out.pairs.emplace_back(*cer_rate, *wer_rate);
  }
  return out;
}

std::string observation_to_json(const Observation& obs) {
  nlohmann::json j;
  j["id"] = obs.id;
  j["source"] = obs.source;
  j["clean_text"] = obs.clean_text;
  j["corrupted_text"] = obs.corrupted_text;
  j["token_count"] = obs.token_count;
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["target_cer"] = opt(obs.target_cer);
  j["target_wer"] = opt(obs.target_wer);
  j["effective_cer"] = opt(obs.effective_cer);
  j["observed_cer"] = opt(obs.observed_cer);
  j["observed_wer"] = opt(obs.observed_wer);
  j["saturated"] = obs.saturated;
  if (obs.events) {
    j["events"] = {{"correct", obs.events->correct},
                   {"substituted", obs.events->substituted},
                   {"deleted", obs.events->deleted},
                   {"inserted", obs.events->inserted}};
  } else {
    j["events"] = nullptr;
  }
  return j.dump();
}

std::string manifest_to_json(const DatasetManifest& m) {
  nlohmann::json j;
  j["format_version"] = kDatasetFormatVersion;
  j["toolkit_version"] = kToolkitVersion;
  j["dataset_id"] = m.dataset_id;
  j["kind"] = m.kind;
  j["seed"] = m.seed;
  j["dataset_index"] = m.dataset_index;
  j["rng_scheme"] = "splitmix64-derive/xoshiro256++ v1";
  j["record_count"] = m.record_count;
  j["tokens_per_observation"] = m.tokens_per_observation;
  j["total_tokens"] = m.total_tokens;
  j["tokenizer"] = m.tokenizer_name;
  j["source"] = {{"corpus", m.source_corpus}, {"table", m.table_source}};
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["target_cer"] = opt(m.target_cer);
  j["target_wer"] = opt(m.target_wer);
  j["effective_cer"] = opt(m.effective_cer);
  j["saturated"] = m.saturated;
  j["skipped_short_sources"] = m.skipped_short_sources;
  j["stats"] = {{"mean_observed_cer", opt(m.stats.mean_observed_cer)},
                {"median_observed_cer", opt(m.stats.median_observed_cer)},
                {"mean_observed_wer", opt(m.stats.mean_observed_wer)},
                {"median_observed_wer", opt(m.stats.median_observed_wer)}};
  if (!m.buckets.empty()) {
    auto buckets = nlohmann::json::array();
    for (std::size_t b = 0; b < m.buckets.size(); ++b) {
      const CorruptionBucket& bucket = m.buckets[b];
      buckets.push_back(
          {{"cer_low", bucket.cer_low},
           {"cer_high", bucket.cer_high},
           {"weight", bucket.weight},
           {"wer_sampling",
            bucket.wer_sampling == WerSampling::kEmpirical ? "empirical" : "fixed"},
           {"fixed_wer", bucket.fixed_wer},
           {"records", m.bucket_counts[b]}});
    }
    j["buckets"] = buckets;
  }
  return j.dump(2);
}

void write_dataset(const BuiltDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "data.jsonl", std::ios::binary);
    if (!out) throw Error("cannot open " + (dir / "data.jsonl").string());
    for (const Observation& obs : dataset.observations) {
      out << observation_to_json(obs) << '\n';
    }
    if (!out) throw Error("failed writing " + (dir / "data.jsonl").string());
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot open " + (dir / "manifest.json").string());
  out << manifest_to_json(dataset.manifest) << '\n';
  if (!out) throw Error("failed writing " + (dir / "manifest.json").string());
}

std::vector<Observation> read_observations(const std::filesystem::path& jsonl_path) {
  std::ifstream in(jsonl_path, std::ios::binary);
  if (!in) throw Error("cannot open " + jsonl_path.string());
  std::vector<Observation> observations;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      Observation obs;
      obs.id = j.at("id").get<std::string>();
      obs.source = j.at("source").get<std::string>();
      obs.clean_text = j.at("clean_text").get<std::string>();
      obs.corrupted_text = j.at("corrupted_text").get<std::string>();
      obs.token_count = j.at("token_count").get<std::size_t>();
      const auto opt = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<double>();
      };
      obs.target_cer = opt("target_cer");
      obs.target_wer = opt("target_wer");
      obs.effective_cer = opt("effective_cer");
      obs.observed_cer = opt("observed_cer");
      obs.observed_wer = opt("observed_wer");
      obs.saturated = j.value("saturated", false);
      if (j.contains("events") && !j.at("events").is_null()) {
        EventCounts events;
        events.correct = j.at("events").at("correct").get<std::uint64_t>();
        events.substituted = j.at("events").at("substituted").get<std::uint64_t>();
        events.deleted = j.at("events").at("deleted").get<std::uint64_t>();
        events.inserted = j.at("events").at("inserted").get<std::uint64_t>();
        obs.events = events;
      }
      observations.push_back(std::move(obs));
    } catch (const nlohmann::json::exception& e) {
      throw Error(jsonl_path.string() + ":" + std::to_string(line_no) +
                  ": bad observation record: " + e.what());
    }
  }
  return observations;
}

}  // namespace garble
