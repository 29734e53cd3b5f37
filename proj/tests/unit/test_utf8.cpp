#include "doctest.h"
#include "garble/error.hpp"
#include "garble/utf8.hpp"

using namespace garble;

TEST_CASE("utf8 round trip") {
  const std::string text = "na\xC3\xAFve caf\xC3\xA9 \xE2\x82\xAC \xF0\x9F\x82\xA1";
  const std::u32string decoded = utf8::decode(text);
  CHECK(decoded.size() == 14);
  CHECK(utf8::encode(decoded) == text);
  CHECK(utf8::length(text) == 14);
}

TEST_CASE("utf8 ascii") {
  CHECK(utf8::decode("abc") == U"abc");
  CHECK(utf8::decode("").empty());
  CHECK(utf8::is_valid("plain ascii"));
}

TEST_CASE("utf8 rejects invalid input") {
  CHECK_THROWS_AS(utf8::decode("\xFF"), Error);
  CHECK_THROWS_AS(utf8::decode("\xC3"), Error);             // truncated
  CHECK_THROWS_AS(utf8::decode("\xC0\xAF"), Error);         // overlong
  CHECK_THROWS_AS(utf8::decode("\xED\xA0\x80"), Error);     // surrogate
  CHECK_THROWS_AS(utf8::decode("\xF4\x90\x80\x80"), Error); // > U+10FFFF
  CHECK_FALSE(utf8::is_valid("\x80"));
}

TEST_CASE("utf8 appends all widths") {
  std::string out;
  utf8::append(out, U'a');
  utf8::append(out, U'é');
  utf8::append(out, U'€');
  utf8::append(out, U'\U0001F0A1');
  CHECK(utf8::decode(out) == U"aé€\U0001F0A1");
}
