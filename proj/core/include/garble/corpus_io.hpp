#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace garble {

struct ParallelRecord {
  std::string gt;
  std::string ocr;
};

struct ParallelCorpus {
  std::vector<ParallelRecord> records;
  // Records whose ground truth was empty; dropped on ingest.
  std::size_t dropped_empty_gt = 0;
  std::string source;
};

// Two plain-text files aligned by line number (the line-aligned corpus
// format). Mismatched line counts are an error.
ParallelCorpus read_line_pairs(const std::filesystem::path& gt_path,
                               const std::filesystem::path& ocr_path);

// Tab-separated UTF-8 file, one record per line, columns gt/ocr. The split
// is at the first tab; lines without a tab are an error with line number.
ParallelCorpus read_two_column(const std::filesystem::path& path);

// Inverse of read_two_column. Texts containing tabs or newlines cannot be
// represented and are rejected.
void write_two_column(std::span<const ParallelRecord> records,
                      const std::filesystem::path& path);

// A source document for dataset building.
struct SourceDocument {
  std::string id;
  std::string text;
};

// Loads corpus documents: a .jsonl path yields one document per line from
// records {"id", "text"}; any other path is read whole as one document with
// the filename as id.
std::vector<SourceDocument> read_documents(std::span<const std::filesystem::path> paths);

// Plain text records, one per line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace garble
