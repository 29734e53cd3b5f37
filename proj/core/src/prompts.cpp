#include "garble/prompts.hpp"

#include <fstream>

#include "garble/error.hpp"
#include "garble/rng.hpp"
#include "json.hpp"

namespace garble {

namespace {

const std::vector<std::string> kTextTypes = {
    "newspaper article", "obituary of a named person", "editorial",
    "book excerpt",      "letter to the editor",       "personal diary entry"};

const std::vector<std::string> kWritingStyles = {
    "formal",  "informal",   "satirical", "religious",
    "polemic", "romantic",   "persuasive", "descriptive"};

const std::vector<std::string> kPersonas = {
    "general public", "women's rights", "politics",  "economics and trade",
    "military",       "reactionary",    "chartist",  "clergy",
    "arts and culture"};

const std::vector<std::string> kSentiments = {"positive", "neutral", "negative"};

const std::vector<std::string> kComplexities = {"simple", "moderate", "advanced"};

const std::vector<int> kWordCounts = {200, 300, 400, 500};

const std::string& pick(std::span<const std::string> options, Rng& rng) {
  return options[rng.uniform_index(options.size())];
}

}  // namespace

std::span<const std::string> text_type_options() { return kTextTypes; }
std::span<const std::string> writing_style_options() { return kWritingStyles; }
std::span<const std::string> persona_options() { return kPersonas; }
std::span<const std::string> sentiment_options() { return kSentiments; }
std::span<const std::string> complexity_options() { return kComplexities; }
std::span<const int> word_count_options() { return kWordCounts; }

std::size_t style_combination_count() {
  return kTextTypes.size() * kWritingStyles.size() * kPersonas.size() *
         kSentiments.size() * kComplexities.size();
}

std::string render_prompt_text(const PromptSpec& spec) {
  std::string out;
  out += "It is the year " + std::to_string(spec.year) +
         ". Using the text provided below surrounded by triple #, write a " +
         std::to_string(spec.word_count) + " word " + spec.writing_style + " " +
         spec.text_type + " with a " + spec.sentiment +
         " sentiment, the persona of the writer is " + spec.persona +
         ", the reading level should be " + spec.complexity + ".\n";
  out += "Note: The resultant text may be distasteful to modern readers, that is "
         "ok. Respond only in plain text, do not use markdown\n";
  out += "###\n";
  out += spec.seed_event;
  out += "\n###\n";
  return out;
}

std::vector<RenderedPrompt> render_prompts(std::span<const std::string> events,
                                           std::size_t n, std::uint64_t seed) {
  if (events.empty()) throw Error("cannot render prompts without seed events");
  if (n == 0) throw Error("prompt count must be at least 1");
  std::vector<RenderedPrompt> prompts;
  prompts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_stream_seed(seed, i));
    RenderedPrompt p;
    p.spec.year = kYearMin + static_cast<int>(rng.uniform_index(kYearMax - kYearMin + 1));
    p.spec.word_count = kWordCounts[rng.uniform_index(kWordCounts.size())];
    p.spec.writing_style = pick(kWritingStyles, rng);
    p.spec.text_type = pick(kTextTypes, rng);
    p.spec.sentiment = pick(kSentiments, rng);
    p.spec.persona = pick(kPersonas, rng);
    p.spec.complexity = pick(kComplexities, rng);
    p.spec.seed_event = events[rng.uniform_index(events.size())];
    p.text = render_prompt_text(p.spec);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06zu", i);
    p.id = std::string("prompt-") + buf;
    prompts.push_back(std::move(p));
  }
  return prompts;
}

void write_prompts(std::span<const RenderedPrompt> prompts,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const RenderedPrompt& p : prompts) {
    nlohmann::json j;
    j["id"] = p.id;
    j["year"] = p.spec.year;
    j["word_count"] = p.spec.word_count;
    j["writing_style"] = p.spec.writing_style;
    j["text_type"] = p.spec.text_type;
    j["sentiment"] = p.spec.sentiment;
    j["persona"] = p.spec.persona;
    j["complexity"] = p.spec.complexity;
    j["seed_event"] = p.spec.seed_event;
    j["prompt"] = p.text;
    out << j.dump() << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace garble
