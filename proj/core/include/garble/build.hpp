#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "garble/dataset.hpp"

namespace garble {

// Declarative description of one build run; parsed from a JSON config file
// (schema in docs/formats.md). The seed is always explicit: grids are too
// large for flags and silent time-based seeding would break reproducibility.
struct BuildConfig {
  std::string kind;  // uniform_suite | cer_wer_grid | mixture | token_grid | prompts
  std::uint64_t seed = 0;
  std::string name;  // optional dataset id override (mixture, prompts)
  unsigned threads = 0;

  std::vector<std::filesystem::path> corpus;
  std::filesystem::path table_path;
  std::size_t tokens_per_observation = 200;
  std::size_t observations = 0;

  std::vector<double> cer_levels;                    // uniform_suite
  std::vector<double> cer_values, wer_values;        // cer_wer_grid
  std::vector<CorruptionBucket> buckets;             // mixture
  std::filesystem::path empirical_tsv;               // mixture
  std::filesystem::path empirical_gt, empirical_ocr; // mixture, alternative
  std::vector<TokenGridCell> cells;                  // token_grid
  double corruption_cer = 0.0;                       // token_grid
  double corruption_wer = 1.0;                       // token_grid
  std::filesystem::path events_path;                 // prompts
  std::size_t prompt_count = 0;                      // prompts
};

// Throws garble::Error listing every schema violation at once.
BuildConfig parse_build_config(const std::filesystem::path& config_path);
BuildConfig parse_build_config_json(std::string_view json_text,
                                    const std::string& origin);

// Runs the build into out_dir: one subdirectory per dataset plus a top-level
// build_manifest.json. All inputs are loaded and validated before anything
// is written. Returns the dataset ids in emission order.
std::vector<std::string> run_build(const BuildConfig& config,
                                   const std::filesystem::path& out_dir);

}  // namespace garble
