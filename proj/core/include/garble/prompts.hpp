#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace garble {

// One sampled configuration of the synthetic-text generation prompt.
struct PromptSpec {
  int year = 1800;
  int word_count = 200;
  std::string writing_style;
  std::string text_type;
  std::string sentiment;
  std::string persona;
  std::string complexity;
  std::string seed_event;
};

struct RenderedPrompt {
  std::string id;
  PromptSpec spec;
  std::string text;
};

// Fixed option lists for the five style variables (6 x 8 x 9 x 3 x 3 = 3888
// combinations).
std::span<const std::string> text_type_options();
std::span<const std::string> writing_style_options();
std::span<const std::string> persona_options();
std::span<const std::string> sentiment_options();
std::span<const std::string> complexity_options();

std::size_t style_combination_count();

// Years and word counts are not style variables; they are drawn from these.
inline constexpr int kYearMin = 1800;
inline constexpr int kYearMax = 1899;
std::span<const int> word_count_options();

// Renders n prompts; every categorical field is sampled uniformly from its
// option list (with replacement) and the seed event uniformly from events.
// The template's triple-# delimiters around the event text are preserved.
std::vector<RenderedPrompt> render_prompts(std::span<const std::string> events,
                                           std::size_t n, std::uint64_t seed);

std::string render_prompt_text(const PromptSpec& spec);

// One JSON record per line; see docs/formats.md.
void write_prompts(std::span<const RenderedPrompt> prompts,
                   const std::filesystem::path& path);

}  // namespace garble
