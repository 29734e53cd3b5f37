#include "garble/utf8.hpp"

#include <cstdint>

#include "garble/error.hpp"

namespace garble::utf8 {

namespace {

// Decodes one code point starting at text[pos]. Returns false on invalid
// input, otherwise advances pos past the sequence.
bool decode_one(std::string_view text, std::size_t& pos, char32_t& out) {
  const auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(text[i]); };
  const std::uint8_t b0 = byte(pos);
  if (b0 < 0x80) {
    out = b0;
    pos += 1;
    return true;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return false;
  }
  if (pos + len > text.size()) return false;
  for (int i = 1; i < len; ++i) {
    const std::uint8_t b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMinForLen[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLen[len]) return false;               // overlong
  if (cp >= 0xD800 && cp <= 0xDFFF) return false;       // surrogate
  if (cp > 0x10FFFF) return false;
  out = cp;
  pos += len;
  return true;
}

}  // namespace

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp;
    if (!decode_one(text, pos, cp)) {
      throw Error("invalid UTF-8 at byte offset " + std::to_string(pos));
    }
    out.push_back(cp);
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t cp : code_points) append(out, cp);
  return out;
}

bool is_valid(std::string_view text) {
  std::size_t pos = 0;
  char32_t cp;
  while (pos < text.size()) {
    if (!decode_one(text, pos, cp)) return false;
  }
  return true;
}

std::size_t length(std::string_view text) {
  std::size_t pos = 0, n = 0;
  char32_t cp;
  while (pos < text.size()) {
    if (!decode_one(text, pos, cp)) {
      throw Error("invalid UTF-8 at byte offset " + std::to_string(pos));
    }
    ++n;
  }
  return n;
}

}  // namespace garble::utf8
