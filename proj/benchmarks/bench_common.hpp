#pragma once

#include <string>

#include "garble/prob_table.hpp"
#include "garble/rng.hpp"

namespace garble::bench {

// Pseudo-English: random lowercase words of 2-9 letters.
inline std::string random_text(std::size_t chars, std::uint64_t seed) {
  Rng rng(seed);
  std::string text;
  text.reserve(chars + 10);
  while (text.size() < chars) {
    const std::size_t len = 2 + rng.uniform_index(8);
    for (std::size_t i = 0; i < len; ++i) {
      text.push_back(static_cast<char>('a' + rng.uniform_index(26)));
    }
    text.push_back(' ');
  }
  text.resize(chars);
  return text;
}

// Hand-built table over a-z and space with mild OCR-like noise.
inline ConditionalProbTable bench_table() {
  ConditionalProbTable table;
  for (char c = 'a'; c <= 'z'; ++c) {
    const char32_t cp = static_cast<char32_t>(c);
    table.per_char[cp] = {0.9, 0.05, 0.03, 0.02};
    const char32_t other = c == 'z' ? U'a' : static_cast<char32_t>(c + 1);
    table.substitution_dist[cp] = {{other, 1.0}};
    table.insertion_dist[cp] = {{U'.', 1.0}};
    table.vocabulary.insert(cp);
  }
  table.per_char[U' '] = {0.95, 0.02, 0.02, 0.01};
  table.substitution_dist[U' '] = {{U'.', 1.0}};
  table.insertion_dist[U' '] = {{U' ', 1.0}};
  table.vocabulary.insert(U' ');
  table.default_state = {0.9, 0.05, 0.03, 0.02};
  table.validate();
  return table;
}

}  // namespace garble::bench
