#include "garble/tokenizer.hpp"

namespace garble {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<TokenSpan> WhitespaceTokenizer::tokenize(std::string_view text) const {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    if (i >= text.size()) break;
    const std::size_t begin = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    spans.push_back({begin, i});
  }
  return spans;
}

std::vector<std::string_view> split_words(std::string_view text) {
  static const WhitespaceTokenizer tokenizer;
  std::vector<std::string_view> words;
  for (const TokenSpan& span : tokenizer.tokenize(text)) {
    words.push_back(text.substr(span.begin, span.end - span.begin));
  }
  return words;
}

}  // namespace garble
