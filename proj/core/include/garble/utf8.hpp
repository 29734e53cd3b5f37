#pragma once

#include <string>
#include <string_view>

namespace garble::utf8 {

// Strict UTF-8 decoding to code points. Rejects truncated sequences,
// overlong encodings, surrogates and values above U+10FFFF.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view code_points);

void append(std::string& out, char32_t cp);

bool is_valid(std::string_view text);

// Number of code points in valid UTF-8 text.
std::size_t length(std::string_view text);

}  // namespace garble::utf8
