#pragma once

// Shared fixtures: deterministic synthetic corpora, hand-built tables and a
// scratch-directory guard, used by both the unit and acceptance suites.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "garble/corpus_io.hpp"
#include "garble/prob_table.hpp"
#include "garble/rng.hpp"

namespace testsupport {

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("garble-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Random lowercase words; mean word length ~4 characters.
inline std::string random_words_text(garble::Rng& rng, std::size_t n_words,
                                     std::size_t min_word = 2, std::size_t max_word = 7) {
  std::string text;
  for (std::size_t w = 0; w < n_words; ++w) {
    if (w) text.push_back(' ');
    const std::size_t len = min_word + rng.uniform_index(max_word - min_word + 1);
    for (std::size_t i = 0; i < len; ++i) {
      text.push_back(static_cast<char>('a' + rng.uniform_index(26)));
    }
  }
  return text;
}

// Hand-rolled OCR-style noiser for producing training corpora; independent
// of the library's corruption engine. Substitutions stay inside a-z,
// deletion and insertion rates are equal by construction.
inline std::string noisy_copy(const std::string& clean, garble::Rng& rng,
                              double sub_rate = 0.08, double del_rate = 0.04,
                              double ins_rate = 0.04) {
  std::string out;
  out.reserve(clean.size() + 8);
  for (char c : clean) {
    const double u = rng.next_double();
    if (u < del_rate) continue;
    if (u < del_rate + sub_rate) {
      char replacement = static_cast<char>('a' + rng.uniform_index(26));
      while (replacement == c) {
        replacement = static_cast<char>('a' + rng.uniform_index(26));
      }
      out.push_back(replacement);
    } else {
      out.push_back(c);
    }
    if (rng.next_double() < ins_rate) {
      out.push_back(static_cast<char>('a' + rng.uniform_index(26)));
    }
  }
  return out;
}

// Line-aligned parallel corpus of n records, words_per_record words each.
inline std::vector<garble::ParallelRecord> synthetic_parallel_corpus(
    std::size_t n_records, std::size_t words_per_record, std::uint64_t seed) {
  garble::Rng rng(seed);
  std::vector<garble::ParallelRecord> records;
  records.reserve(n_records);
  for (std::size_t i = 0; i < n_records; ++i) {
    garble::ParallelRecord record;
    record.gt = random_words_text(rng, words_per_record);
    record.ocr = noisy_copy(record.gt, rng);
    records.push_back(std::move(record));
  }
  return records;
}

// Uniform four-state table over the given ground-truth alphabet, with
// substitutions and insertions drawn from a separate noise alphabet so that
// alignment can recover sampled events unambiguously.
inline garble::ConditionalProbTable uniform_table(
    const std::u32string& gt_alphabet, const std::u32string& noise_alphabet,
    const garble::StateDistribution& row) {
  garble::ConditionalProbTable table;
  garble::CharDistribution noise;
  for (char32_t cp : noise_alphabet) {
    noise[cp] = 1.0 / static_cast<double>(noise_alphabet.size());
  }
  for (char32_t cp : gt_alphabet) {
    table.per_char[cp] = row;
    table.vocabulary.insert(cp);
    table.substitution_dist[cp] = noise;
    table.insertion_dist[cp] = noise;
  }
  table.default_state = row;
  table.validate();
  return table;
}

}  // namespace testsupport
