#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace garble {

// Default gap marker: first code point of the Unicode private use area, so
// real corpus text cannot collide with it.
inline constexpr char32_t kDefaultGapSymbol = U'';

// Records longer than this are rejected rather than silently truncated; the
// alignment DP is quadratic and meant for per-line records.
inline constexpr std::size_t kDefaultMaxRecordLength = 10000;

// Gap-padded character alignment of a (ground truth, OCR) pair. Both sides
// have equal length and no position is a gap on both sides; stripping gaps
// recovers the original texts.
struct AlignedPair {
  std::u32string gt_aligned;
  std::u32string ocr_aligned;
  char32_t gap_symbol = kDefaultGapSymbol;

  // Original texts, gaps stripped, re-encoded as UTF-8.
  std::string gt_text() const;
  std::string ocr_text() const;
};

// Minimum-edit-cost character alignment (unit costs, zero for matches).
// Ties resolve match/substitute over deletion over insertion, so output is
// deterministic for fixed inputs. Throws garble::Error if the gap symbol
// occurs in either input or a side exceeds max_record_length code points.
AlignedPair align(std::string_view gt, std::string_view ocr,
                  char32_t gap_symbol = kDefaultGapSymbol,
                  std::size_t max_record_length = kDefaultMaxRecordLength);

// Element-wise align(); errors are rethrown with the record index attached.
std::vector<AlignedPair> align_corpus(
    std::span<const std::pair<std::string, std::string>> records,
    char32_t gap_symbol = kDefaultGapSymbol,
    std::size_t max_record_length = kDefaultMaxRecordLength);

}  // namespace garble
