#include "garble/build.hpp"

#include <fstream>
#include <sstream>

#include "garble/error.hpp"
#include "garble/prompts.hpp"
#include "garble/rng.hpp"
#include "garble/version.hpp"
#include "json.hpp"

namespace garble {

namespace {

const std::vector<std::string> kKnownKinds = {"uniform_suite", "cer_wer_grid",
                                              "mixture", "token_grid", "prompts"};

struct Violations {
  std::vector<std::string> messages;
  void add(const std::string& message) { messages.push_back(message); }
  void raise_if_any(const std::string& origin) const {
    if (messages.empty()) return;
    std::string joined = origin + ": invalid build config:";
    for (const auto& m : messages) joined += "\n  - " + m;
    throw Error(joined);
  }
};

std::vector<CorruptionBucket> parse_buckets(const nlohmann::json& src,
                                            Violations& violations) {
  std::vector<CorruptionBucket> buckets;
  if (!src.is_array() || src.empty()) {
    violations.add("\"buckets\" must be a non-empty array");
    return buckets;
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto& b = src[i];
    CorruptionBucket bucket;
    try {
      bucket.cer_low = b.at("cer_low").get<double>();
      bucket.cer_high = b.at("cer_high").get<double>();
      bucket.weight = b.at("weight").get<double>();
      const std::string sampling = b.value("wer_sampling", "empirical");
      if (sampling == "empirical") {
        bucket.wer_sampling = WerSampling::kEmpirical;
      } else if (sampling == "fixed") {
        bucket.wer_sampling = WerSampling::kFixed;
        bucket.fixed_wer = b.value("fixed_wer", 1.0);
      } else {
        violations.add("bucket " + std::to_string(i) +
                       ": wer_sampling must be \"empirical\" or \"fixed\"");
      }
    } catch (const nlohmann::json::exception& e) {
      violations.add("bucket " + std::to_string(i) + ": " + e.what());
    }
    buckets.push_back(bucket);
  }
  return buckets;
}

}  // namespace

BuildConfig parse_build_config_json(std::string_view json_text,
                                    const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(origin + ": malformed JSON: " + e.what());
  }

  Violations violations;
  BuildConfig config;

  if (!j.is_object()) {
    violations.add("config must be a JSON object");
    violations.raise_if_any(origin);
  }

  config.kind = j.value("kind", "");
  if (std::find(kKnownKinds.begin(), kKnownKinds.end(), config.kind) ==
      kKnownKinds.end()) {
    violations.add("\"kind\" must be one of uniform_suite, cer_wer_grid, mixture, "
                   "token_grid, prompts");
  }
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    violations.add("\"seed\" is required and must be a non-negative integer");
  } else {
    config.seed = j["seed"].get<std::uint64_t>();
  }
  config.name = j.value("name", "");
  config.threads = j.value("threads", 0u);

  const bool needs_corpus = config.kind != "prompts" && !config.kind.empty();
  if (needs_corpus) {
    if (!j.contains("corpus") || !j["corpus"].is_array() || j["corpus"].empty()) {
      violations.add("\"corpus\" must be a non-empty array of paths");
    } else {
      for (const auto& p : j["corpus"]) {
        config.corpus.emplace_back(p.get<std::string>());
      }
    }
    if (!j.contains("table") || !j["table"].is_string()) {
      violations.add("\"table\" must be a path to a probability table file");
    } else {
      config.table_path = j["table"].get<std::string>();
    }
  }

  config.tokens_per_observation = j.value("tokens_per_observation", std::size_t{200});
  if (config.tokens_per_observation == 0) {
    violations.add("\"tokens_per_observation\" must be at least 1");
  }
  config.observations = j.value("observations", std::size_t{0});
  const bool needs_observations = config.kind == "uniform_suite" ||
                                  config.kind == "cer_wer_grid" ||
                                  config.kind == "mixture";
  if (needs_observations && config.observations == 0) {
    violations.add("\"observations\" must be at least 1");
  }

  const auto rates = [&](const char* key, bool allow_one) {
    std::vector<double> values;
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
      violations.add(std::string("\"") + key + "\" must be a non-empty array");
      return values;
    }
    for (const auto& v : j[key]) {
      if (!v.is_number()) {
        violations.add(std::string("\"") + key + "\" entries must be numbers");
        return values;
      }
      const double rate = v.get<double>();
      const double hi = allow_one ? 1.0 + 1e-12 : 1.0;
      if (!(rate >= 0.0 && rate < hi) || (allow_one && rate <= 0.0)) {
        violations.add(std::string("\"") + key + "\" entry " +
                       nlohmann::json(rate).dump() + " is out of range");
      }
      values.push_back(rate);
    }
    return values;
  };

  if (config.kind == "uniform_suite") {
    config.cer_levels = rates("cer_levels", false);
  } else if (config.kind == "cer_wer_grid") {
    config.cer_values = rates("cer_values", false);
    config.wer_values = rates("wer_values", true);
  } else if (config.kind == "mixture") {
    config.buckets = parse_buckets(j.value("buckets", nlohmann::json::array()), violations);
    if (j.contains("empirical") && j["empirical"].is_object()) {
      const auto& e = j["empirical"];
      if (e.contains("tsv")) {
        config.empirical_tsv = e["tsv"].get<std::string>();
      } else if (e.contains("gt") && e.contains("ocr")) {
        config.empirical_gt = e["gt"].get<std::string>();
        config.empirical_ocr = e["ocr"].get<std::string>();
      } else {
        violations.add("\"empirical\" must provide either \"tsv\" or \"gt\"+\"ocr\"");
      }
    } else {
      bool any_empirical = false;
      for (const auto& b : config.buckets) {
        if (b.cer_high > 0.0 && b.wer_sampling == WerSampling::kEmpirical) {
          any_empirical = true;
        }
      }
      if (any_empirical) {
        violations.add("mixture with empirical buckets requires an \"empirical\" corpus");
      }
    }
  } else if (config.kind == "token_grid") {
    if (!j.contains("cells") || !j["cells"].is_array() || j["cells"].empty()) {
      violations.add("\"cells\" must be a non-empty array");
    } else {
      for (std::size_t i = 0; i < j["cells"].size(); ++i) {
        const auto& c = j["cells"][i];
        try {
          TokenGridCell cell;
          cell.total_tokens = c.at("total_tokens").get<std::uint64_t>();
          cell.tokens_per_observation = c.at("tokens_per_observation").get<std::size_t>();
          if (cell.tokens_per_observation == 0 ||
              cell.total_tokens % cell.tokens_per_observation != 0) {
            violations.add("cell " + std::to_string(i) +
                           ": total_tokens must divide evenly by tokens_per_observation");
          }
          config.cells.push_back(cell);
        } catch (const nlohmann::json::exception& e) {
          violations.add("cell " + std::to_string(i) + ": " + e.what());
        }
      }
    }
    if (!j.contains("corruption") || !j["corruption"].is_object()) {
      violations.add("\"corruption\" must be an object with \"cer\" and \"wer\"");
    } else {
      config.corruption_cer = j["corruption"].value("cer", 0.0);
      config.corruption_wer = j["corruption"].value("wer", 1.0);
      if (!(config.corruption_cer >= 0.0 && config.corruption_cer < 1.0)) {
        violations.add("corruption.cer must be in [0, 1)");
      }
      if (!(config.corruption_wer > 0.0 && config.corruption_wer <= 1.0)) {
        violations.add("corruption.wer must be in (0, 1]");
      }
    }
  } else if (config.kind == "prompts") {
    if (!j.contains("events") || !j["events"].is_string()) {
      violations.add("\"events\" must be a path to a seed-event text file");
    } else {
      config.events_path = j["events"].get<std::string>();
    }
    config.prompt_count = j.value("count", std::size_t{0});
    if (config.prompt_count == 0) {
      violations.add("\"count\" must be at least 1");
    }
  }

  violations.raise_if_any(origin);
  return config;
}

BuildConfig parse_build_config(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw Error("cannot open config file " + config_path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_build_config_json(buffer.str(), config_path.string());
}

std::vector<std::string> run_build(const BuildConfig& config,
                                   const std::filesystem::path& out_dir) {
  // Prompts need no corpus or table.
  if (config.kind == "prompts") {
    std::vector<std::string> events;
    for (std::string& line : read_lines(config.events_path)) {
      if (!line.empty()) events.push_back(std::move(line));
    }
    const auto prompts = render_prompts(events, config.prompt_count, config.seed);
    const std::string id = config.name.empty() ? "prompts" : config.name;
    const auto dir = out_dir / id;
    std::filesystem::create_directories(dir);
    write_prompts(prompts, dir / "prompts.jsonl");
    nlohmann::json manifest;
    manifest["format_version"] = kDatasetFormatVersion;
    manifest["toolkit_version"] = kToolkitVersion;
    manifest["dataset_id"] = id;
    manifest["kind"] = "prompts";
    manifest["seed"] = config.seed;
    manifest["record_count"] = prompts.size();
    manifest["source"] = {{"events", config.events_path.string()}};
    manifest["style_combinations"] = style_combination_count();
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error("cannot open " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';

    std::ofstream build_out(out_dir / "build_manifest.json", std::ios::binary);
    build_out << nlohmann::json({{"kind", config.kind},
                                 {"seed", config.seed},
                                 {"toolkit_version", kToolkitVersion},
                                 {"datasets", {id}}})
                     .dump(2)
              << '\n';
    return {id};
  }

  // Load and validate every input before writing anything.
  const auto corpus = read_documents(config.corpus);
  const ConditionalProbTable table = load_table(config.table_path);

  BuildOptions options;
  options.tokens_per_observation = config.tokens_per_observation;
  options.observations = config.observations;
  options.seed = config.seed;
  options.threads = config.threads;
  options.table_source = config.table_path.string();
  for (const auto& p : config.corpus) options.source_corpus_ids.push_back(p.string());

  std::vector<BuiltDataset> datasets;
  if (config.kind == "uniform_suite") {
    datasets = build_uniform_cer_suite(corpus, table, config.cer_levels, options);
  } else if (config.kind == "cer_wer_grid") {
    datasets = build_cer_wer_grid(corpus, table, config.cer_values,
                                  config.wer_values, options);
  } else if (config.kind == "token_grid") {
    datasets = build_token_grid(corpus, table, config.cells, config.corruption_cer,
                                config.corruption_wer, options);
  } else if (config.kind == "mixture") {
    EmpiricalCerWer empirical;
    if (!config.empirical_tsv.empty()) {
      empirical = empirical_cer_wer(read_two_column(config.empirical_tsv).records);
    } else {
      empirical = empirical_cer_wer(
          read_line_pairs(config.empirical_gt, config.empirical_ocr).records);
    }
    CorruptionSpec spec;
    spec.mode = CorruptionMode::kMixture;
    spec.buckets = config.buckets;
    spec.seed = config.seed;
    const std::string id = config.name.empty() ? "mixture" : config.name;
    datasets.push_back(build_mixture(corpus, table, spec, empirical.pairs, options, id));
  } else {
    throw Error("unknown build kind " + config.kind);
  }

  std::vector<std::string> ids;
  for (const BuiltDataset& dataset : datasets) {
    write_dataset(dataset, out_dir / dataset.manifest.dataset_id);
    ids.push_back(dataset.manifest.dataset_id);
  }
  std::ofstream build_out(out_dir / "build_manifest.json", std::ios::binary);
  if (!build_out) {
    throw Error("cannot open " + (out_dir / "build_manifest.json").string());
  }
  build_out << nlohmann::json({{"kind", config.kind},
                               {"seed", config.seed},
                               {"toolkit_version", kToolkitVersion},
                               {"datasets", ids}})
                   .dump(2)
            << '\n';
  return ids;
}

}  // namespace garble
