#include "garble/align.hpp"

#include "garble/edit_distance.hpp"
#include "garble/error.hpp"
#include "garble/utf8.hpp"

namespace garble {

namespace {

std::string strip_gaps(const std::u32string& aligned, char32_t gap) {
  std::u32string plain;
  plain.reserve(aligned.size());
  for (char32_t cp : aligned) {
    if (cp != gap) plain.push_back(cp);
  }
  return utf8::encode(plain);
}

}  // namespace

std::string AlignedPair::gt_text() const { return strip_gaps(gt_aligned, gap_symbol); }

std::string AlignedPair::ocr_text() const { return strip_gaps(ocr_aligned, gap_symbol); }

AlignedPair align(std::string_view gt, std::string_view ocr, char32_t gap_symbol,
                  std::size_t max_record_length) {
  const std::u32string gt32 = utf8::decode(gt);
  const std::u32string ocr32 = utf8::decode(ocr);

  if (gt32.find(gap_symbol) != std::u32string::npos) {
    throw Error("gap symbol U+" + std::to_string(static_cast<std::uint32_t>(gap_symbol)) +
                " occurs in the ground-truth text; choose another gap symbol");
  }
  if (ocr32.find(gap_symbol) != std::u32string::npos) {
    throw Error("gap symbol U+" + std::to_string(static_cast<std::uint32_t>(gap_symbol)) +
                " occurs in the OCR text; choose another gap symbol");
  }
  if (gt32.size() > max_record_length || ocr32.size() > max_record_length) {
    throw Error("record of " + std::to_string(std::max(gt32.size(), ocr32.size())) +
                " characters exceeds the alignment cap of " +
                std::to_string(max_record_length) + "; align per line instead");
  }

  const auto script = min_edit_script<char32_t>(gt32, ocr32);

  AlignedPair out;
  out.gap_symbol = gap_symbol;
  out.gt_aligned.reserve(script.size());
  out.ocr_aligned.reserve(script.size());
  std::size_t i = 0, j = 0;
  for (EditOp op : script) {
    switch (op) {
      case EditOp::kMatch:
      case EditOp::kSubstitute:
        out.gt_aligned.push_back(gt32[i++]);
        out.ocr_aligned.push_back(ocr32[j++]);
        break;
      case EditOp::kDelete:
        out.gt_aligned.push_back(gt32[i++]);
        out.ocr_aligned.push_back(gap_symbol);
        break;
      case EditOp::kInsert:
        out.gt_aligned.push_back(gap_symbol);
        out.ocr_aligned.push_back(ocr32[j++]);
        break;
    }
  }
  return out;
}

std::vector<AlignedPair> align_corpus(
    std::span<const std::pair<std::string, std::string>> records,
    char32_t gap_symbol, std::size_t max_record_length) {
  std::vector<AlignedPair> out;
  out.reserve(records.size());
  for (std::size_t idx = 0; idx < records.size(); ++idx) {
    try {
      out.push_back(align(records[idx].first, records[idx].second, gap_symbol,
                          max_record_length));
    } catch (const Error& e) {
      throw Error("record " + std::to_string(idx) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace garble
