#include "garble/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include "garble/error.hpp"
#include "json.hpp"

namespace garble {

namespace {

std::vector<std::string> read_all_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string read_whole_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

ParallelCorpus read_line_pairs(const std::filesystem::path& gt_path,
                               const std::filesystem::path& ocr_path) {
  const auto gt_lines = read_all_lines(gt_path);
  const auto ocr_lines = read_all_lines(ocr_path);
  if (gt_lines.size() != ocr_lines.size()) {
    throw Error("line count mismatch: " + gt_path.string() + " has " +
                std::to_string(gt_lines.size()) + " lines, " + ocr_path.string() +
                " has " + std::to_string(ocr_lines.size()));
  }
  ParallelCorpus corpus;
  corpus.source = gt_path.string() + " + " + ocr_path.string();
  for (std::size_t i = 0; i < gt_lines.size(); ++i) {
    if (gt_lines[i].empty()) {
      ++corpus.dropped_empty_gt;
      continue;
    }
    corpus.records.push_back({gt_lines[i], ocr_lines[i]});
  }
  return corpus;
}

ParallelCorpus read_two_column(const std::filesystem::path& path) {
  const auto lines = read_all_lines(path);
  ParallelCorpus corpus;
  corpus.source = path.string();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      ++corpus.dropped_empty_gt;
      continue;
    }
    const std::size_t tab = lines[i].find('\t');
    if (tab == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(i + 1) +
                  ": expected two tab-separated columns");
    }
    std::string gt = lines[i].substr(0, tab);
    std::string ocr = lines[i].substr(tab + 1);
    if (gt.empty()) {
      ++corpus.dropped_empty_gt;
      continue;
    }
    corpus.records.push_back({std::move(gt), std::move(ocr)});
  }
  return corpus;
}

void write_two_column(std::span<const ParallelRecord> records,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ParallelRecord& r = records[i];
    if (r.gt.find_first_of("\t\n") != std::string::npos ||
        r.ocr.find_first_of("\t\n") != std::string::npos) {
      throw Error("record " + std::to_string(i) +
                  " contains a tab or newline and cannot be written as two columns");
    }
    out << r.gt << '\t' << r.ocr << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<SourceDocument> read_documents(
    std::span<const std::filesystem::path> paths) {
  std::vector<SourceDocument> docs;
  for (const auto& path : paths) {
    if (path.extension() == ".jsonl") {
      const auto lines = read_all_lines(path);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(lines[i]);
          SourceDocument doc;
          doc.id = j.contains("id") ? j.at("id").get<std::string>()
                                    : path.filename().string() + ":" + std::to_string(i + 1);
          doc.text = j.at("text").get<std::string>();
          docs.push_back(std::move(doc));
        } catch (const nlohmann::json::exception& e) {
          throw Error(path.string() + ":" + std::to_string(i + 1) +
                      ": bad document record: " + e.what());
        }
      }
    } else {
      docs.push_back({path.filename().string(), read_whole_file(path)});
    }
  }
  return docs;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  return read_all_lines(path);
}

}  // namespace garble
