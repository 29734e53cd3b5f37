#pragma once

// Independent reference implementations used to freeze expected values.
// These deliberately share no code with the library: distance-only DP with
// no traceback, plus an exhaustive recursion for tiny inputs that validates
// the DP itself.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "garble/rng.hpp"

namespace oracle {

template <typename Seq>
std::size_t dp_distance(const Seq& a, const Seq& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    prev.swap(cur);
  }
  return prev[m];
}

template <typename Seq>
std::size_t exhaustive_distance_impl(const Seq& a, const Seq& b, std::size_t i,
                                     std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  const std::size_t diag = exhaustive_distance_impl(a, b, i + 1, j + 1) +
                           (a[i] == b[j] ? 0 : 1);
  const std::size_t del = exhaustive_distance_impl(a, b, i + 1, j) + 1;
  const std::size_t ins = exhaustive_distance_impl(a, b, i, j + 1) + 1;
  return std::min({diag, del, ins});
}

// Plain recursion over all edit scripts; only usable for lengths <= ~8.
template <typename Seq>
std::size_t exhaustive_distance(const Seq& a, const Seq& b) {
  return exhaustive_distance_impl(a, b, 0, 0);
}

inline std::string random_string(garble::Rng& rng, std::size_t max_len,
                                 const std::string& alphabet) {
  const std::size_t len = rng.uniform_index(max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(alphabet[rng.uniform_index(alphabet.size())]);
  }
  return s;
}

inline std::vector<std::string> random_words(garble::Rng& rng, std::size_t max_len,
                                             const std::vector<std::string>& vocab) {
  const std::size_t len = rng.uniform_index(max_len + 1);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < len; ++i) {
    words.push_back(vocab[rng.uniform_index(vocab.size())]);
  }
  return words;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) s.push_back(' ');
    s += words[i];
  }
  return s;
}

}  // namespace oracle
