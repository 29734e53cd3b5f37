#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace garble {

// Byte range [begin, end) of one token inside the text it was cut from.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Token counts recorded in manifests depend on the tokenizer, so it is
// pluggable; the default splits on runs of ASCII whitespace, which is safe
// on UTF-8 bytes and keeps punctuation attached to words.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<TokenSpan> tokenize(std::string_view text) const = 0;
  virtual std::string name() const = 0;

  std::size_t count_tokens(std::string_view text) const { return tokenize(text).size(); }
};

class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::vector<TokenSpan> tokenize(std::string_view text) const override;
  std::string name() const override { return "whitespace"; }
};

bool is_ascii_space(char c);

// Token texts (not spans); convenience for word-level scoring.
std::vector<std::string_view> split_words(std::string_view text);

}  // namespace garble
