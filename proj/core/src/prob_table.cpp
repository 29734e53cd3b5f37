#include "garble/prob_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "garble/error.hpp"
#include "garble/utf8.hpp"
#include "garble/version.hpp"
#include "json.hpp"

namespace garble {

namespace {

std::string cp_to_string(char32_t cp) {
  std::string s;
  utf8::append(s, cp);
  return s;
}

char32_t single_code_point(const std::string& s, const std::string& origin) {
  const std::u32string decoded = utf8::decode(s);
  if (decoded.size() != 1) {
    throw Error(origin + ": key \"" + s + "\" is not a single code point");
  }
  return decoded[0];
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(what + " is not a probability: " + std::to_string(p));
  }
}

void check_row(const StateDistribution& row, const std::string& what) {
  check_probability(row.p_correct, what + " p_correct");
  check_probability(row.p_substitute, what + " p_substitute");
  check_probability(row.p_delete, what + " p_delete");
  check_probability(row.p_insert, what + " p_insert");
  if (std::abs(row.sum() - 1.0) > kProbabilitySumTolerance) {
    throw Error(what + " states sum to " + std::to_string(row.sum()) + ", not 1");
  }
}

void check_char_distribution(const CharDistribution& dist, const std::string& what) {
  if (dist.empty()) throw Error(what + " is empty");
  double sum = 0.0;
  for (const auto& [cp, p] : dist) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw Error(what + " entry \"" + cp_to_string(cp) +
                  "\" has nonpositive or invalid probability " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw Error(what + " sums to " + std::to_string(sum) + ", not 1");
  }
}

CharDistribution normalized(const std::map<char32_t, std::uint64_t>& counts) {
  CharDistribution dist;
  std::uint64_t total = 0;
  for (const auto& [cp, n] : counts) total += n;
  for (const auto& [cp, n] : counts) {
    if (n > 0) dist[cp] = static_cast<double>(n) / static_cast<double>(total);
  }
  return dist;
}

}  // namespace

double StateDistribution::state(CorruptionState s) const {
  switch (s) {
    case CorruptionState::kCorrect: return p_correct;
    case CorruptionState::kSubstitute: return p_substitute;
    case CorruptionState::kDelete: return p_delete;
    case CorruptionState::kInsert: return p_insert;
  }
  return 0.0;
}

void StateDistribution::set_state(CorruptionState s, double value) {
  switch (s) {
    case CorruptionState::kCorrect: p_correct = value; break;
    case CorruptionState::kSubstitute: p_substitute = value; break;
    case CorruptionState::kDelete: p_delete = value; break;
    case CorruptionState::kInsert: p_insert = value; break;
  }
}

const StateDistribution& ConditionalProbTable::state_for(char32_t c) const {
  const auto it = per_char.find(c);
  return it == per_char.end() ? default_state : it->second;
}

void ConditionalProbTable::validate() const {
  for (const auto& [cp, row] : per_char) {
    check_row(row, "state row \"" + cp_to_string(cp) + "\"");
  }
  check_row(default_state, "default_state");
  std::set<char32_t> row_chars;
  for (const auto& [cp, row] : per_char) row_chars.insert(cp);
  if (row_chars != vocabulary) {
    throw Error("vocabulary does not match the set of state rows");
  }
  for (const auto& [cp, dist] : substitution_dist) {
    if (!vocabulary.count(cp)) {
      throw Error("substitution distribution for \"" + cp_to_string(cp) +
                  "\" has no state row");
    }
    check_char_distribution(dist, "substitution distribution \"" + cp_to_string(cp) + "\"");
    if (dist.count(cp)) {
      throw Error("substitution distribution \"" + cp_to_string(cp) +
                  "\" assigns mass to the character itself");
    }
  }
  for (const auto& [cp, dist] : insertion_dist) {
    if (!vocabulary.count(cp)) {
      throw Error("insertion distribution for \"" + cp_to_string(cp) +
                  "\" has no state row");
    }
    check_char_distribution(dist, "insertion distribution \"" + cp_to_string(cp) + "\"");
  }
}

void CorruptionCounts::add(const AlignedPair& pair) {
  if (pair.gt_aligned.size() != pair.ocr_aligned.size()) {
    throw Error("aligned pair has unequal lengths");
  }
  const char32_t gap = pair.gap_symbol;
  bool have_prev = false;
  char32_t prev = 0;
  for (std::size_t i = 0; i < pair.gt_aligned.size(); ++i) {
    const char32_t g = pair.gt_aligned[i];
    const char32_t o = pair.ocr_aligned[i];
    if (g == gap && o == gap) {
      throw Error("aligned pair has a gap on both sides at position " +
                  std::to_string(i));
    }
    if (g == gap) {
      if (!have_prev) {
        ++leading_insertions_;
        continue;
      }
      CharCounts& cc = counts_[prev];
      ++cc.inserted;
      ++cc.insertion_chars[o];
      continue;
    }
    CharCounts& cc = counts_[g];
    ++base_events_;
    have_prev = true;
    prev = g;
    if (o == gap) {
      ++cc.deleted;
    } else if (o == g) {
      ++cc.matched;
    } else {
      ++cc.substituted;
      ++cc.substitution_chars[o];
    }
  }
}

void CorruptionCounts::merge(const CorruptionCounts& other) {
  for (const auto& [cp, theirs] : other.counts_) {
    CharCounts& mine = counts_[cp];
    mine.matched += theirs.matched;
    mine.substituted += theirs.substituted;
    mine.deleted += theirs.deleted;
    mine.inserted += theirs.inserted;
    for (const auto& [c, n] : theirs.substitution_chars) mine.substitution_chars[c] += n;
    for (const auto& [c, n] : theirs.insertion_chars) mine.insertion_chars[c] += n;
  }
  base_events_ += other.base_events_;
  leading_insertions_ += other.leading_insertions_;
}

ConditionalProbTable CorruptionCounts::finalize() const {
  if (counts_.empty()) {
    throw Error("cannot learn a corruption model from zero alignment events");
  }
  ConditionalProbTable table;
  double weighted_correct = 0.0, weighted_substitute = 0.0;
  double weighted_delete = 0.0, weighted_insert = 0.0;

  for (const auto& [cp, cc] : counts_) {
    const double occurrences =
        static_cast<double>(cc.matched + cc.substituted + cc.deleted);
    // A character can only accumulate insertion credit as the predecessor of
    // a gap, which requires at least one base event of its own.
    const double stops = static_cast<double>(cc.matched + cc.substituted);
    const double inserted = static_cast<double>(cc.inserted);

    StateDistribution row;
    // Geometric continuation estimate: one "success" per inserted character,
    // one "stop" per non-deleted base emission, so the expected run length
    // p/(1-p) matches the observed mean run length.
    row.p_insert = inserted > 0.0 ? inserted / (inserted + stops) : 0.0;
    // The insert state also passes the character through unaltered, so its
    // mass is part of the observed match share and must come out of it.
    row.p_correct = static_cast<double>(cc.matched) / occurrences - row.p_insert;
    row.p_substitute = static_cast<double>(cc.substituted) / occurrences;
    row.p_delete = static_cast<double>(cc.deleted) / occurrences;
    if (row.p_correct < 0.0) {
      row.p_correct = 0.0;
      const double sum = row.sum();
      row.p_substitute /= sum;
      row.p_delete /= sum;
      row.p_insert /= sum;
    }

    table.per_char[cp] = row;
    table.vocabulary.insert(cp);

    const double weight = occurrences / static_cast<double>(base_events_);
    weighted_correct += weight * row.p_correct;
    weighted_substitute += weight * row.p_substitute;
    weighted_delete += weight * row.p_delete;
    weighted_insert += weight * row.p_insert;

    if (!cc.substitution_chars.empty()) {
      table.substitution_dist[cp] = normalized(cc.substitution_chars);
    }
    if (!cc.insertion_chars.empty()) {
      table.insertion_dist[cp] = normalized(cc.insertion_chars);
    }
  }

  table.default_state.p_correct = weighted_correct;
  table.default_state.p_substitute = weighted_substitute;
  table.default_state.p_delete = weighted_delete;
  table.default_state.p_insert = weighted_insert;

  table.validate();
  return table;
}

ConditionalProbTable learn(std::span<const AlignedPair> pairs) {
  if (pairs.empty()) {
    throw Error("cannot learn a corruption model from an empty corpus");
  }
  CorruptionCounts counts;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      counts.add(pairs[i]);
    } catch (const Error& e) {
      throw Error("pair " + std::to_string(i) + ": " + e.what());
    }
  }
  return counts.finalize();
}

ConditionalProbTable renormalize_to_cer(const ConditionalProbTable& table,
                                        double target_cer) {
  if (!(target_cer >= 0.0 && target_cer < 1.0)) {
    throw Error("target CER must be in [0, 1), got " + std::to_string(target_cer));
  }
  ConditionalProbTable out = table;
  const auto renorm_row = [target_cer](StateDistribution& row) {
    const double corruption = row.p_substitute + row.p_delete + row.p_insert;
    row.p_correct = 1.0 - target_cer;
    if (corruption <= 0.0) {
      // Degenerate row: no learned ratios to scale, split the mass evenly.
      const double share = target_cer / 3.0;
      row.p_substitute = row.p_delete = row.p_insert = share;
    } else {
      const double f = target_cer / corruption;  // (1 - p'_c) / (1 - p_c)
      row.p_substitute *= f;
      row.p_delete *= f;
      row.p_insert *= f;
    }
  };
  for (auto& [cp, row] : out.per_char) renorm_row(row);
  renorm_row(out.default_state);
  out.validate();
  return out;
}

ConditionalProbTable rescale_state(const ConditionalProbTable& table,
                                   CorruptionState k, double target) {
  if (!(target >= 0.0 && target < 1.0)) {
    throw Error("rescale target must be in [0, 1), got " + std::to_string(target));
  }
  ConditionalProbTable out = table;
  const auto adjust = [&](StateDistribution& row) {
    const double current = row.state(k);
    const double off_mass = 1.0 - current;
    if (off_mass <= 0.0) {
      // All mass already on k; nothing to rescale, fall back to uniform.
      row.set_state(k, target);
      const double share = (1.0 - target) / 3.0;
      for (CorruptionState s : {CorruptionState::kCorrect, CorruptionState::kSubstitute,
                                CorruptionState::kDelete, CorruptionState::kInsert}) {
        if (s != k) row.set_state(s, share);
      }
      return;
    }
    const double f = (1.0 - target) / off_mass;
    for (CorruptionState s : {CorruptionState::kCorrect, CorruptionState::kSubstitute,
                              CorruptionState::kDelete, CorruptionState::kInsert}) {
      if (s != k) row.set_state(s, row.state(s) * f);
    }
    const double sum = row.sum();
    for (CorruptionState s : {CorruptionState::kCorrect, CorruptionState::kSubstitute,
                              CorruptionState::kDelete, CorruptionState::kInsert}) {
      row.set_state(s, row.state(s) / sum);
    }
  };
  for (auto& [cp, row] : out.per_char) adjust(row);
  adjust(out.default_state);
  out.validate();
  return out;
}

std::optional<double> expected_cer(const ConditionalProbTable& table,
                                   std::string_view text) {
  const std::u32string decoded = utf8::decode(text);
  if (decoded.empty()) return std::nullopt;
  double correct_mass = 0.0;
  for (char32_t cp : decoded) correct_mass += table.state_for(cp).p_correct;
  return 1.0 - correct_mass / static_cast<double>(decoded.size());
}

std::string table_to_json(const ConditionalProbTable& table) {
  nlohmann::json j;
  j["version"] = kTableFormatVersion;
  auto vocab = nlohmann::json::array();
  for (char32_t cp : table.vocabulary) vocab.push_back(cp_to_string(cp));
  j["vocabulary"] = vocab;

  const auto row_to_json = [](const StateDistribution& row) {
    nlohmann::json r;
    r["correct"] = row.p_correct;
    r["substitute"] = row.p_substitute;
    r["delete"] = row.p_delete;
    r["insert"] = row.p_insert;
    return r;
  };
  nlohmann::json states = nlohmann::json::object();
  for (const auto& [cp, row] : table.per_char) states[cp_to_string(cp)] = row_to_json(row);
  j["states"] = states;
  j["default_state"] = row_to_json(table.default_state);

  const auto dists_to_json = [](const std::map<char32_t, CharDistribution>& dists) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [cp, dist] : dists) {
      nlohmann::json d = nlohmann::json::object();
      for (const auto& [c, p] : dist) d[cp_to_string(c)] = p;
      out[cp_to_string(cp)] = d;
    }
    return out;
  };
  j["substitutions"] = dists_to_json(table.substitution_dist);
  j["insertions"] = dists_to_json(table.insertion_dist);
  return j.dump(2);
}

ConditionalProbTable parse_table_json(std::string_view json_text,
                                      const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(origin + ": malformed JSON: " + e.what());
  }

  try {
    if (!j.is_object() || !j.contains("version") ||
        !j["version"].is_number_integer()) {
      throw Error(origin + ": missing integer \"version\" field");
    }
    const int version = j["version"].get<int>();
    if (version > kTableFormatVersion) {
      throw Error(origin + ": table format version " + std::to_string(version) +
                  " is newer than supported version " +
                  std::to_string(kTableFormatVersion));
    }
    if (version < 1) {
      throw Error(origin + ": invalid table format version " + std::to_string(version));
    }

    const auto row_from_json = [&](const nlohmann::json& r, const std::string& what) {
      if (!r.is_object()) throw Error(origin + ": " + what + " is not an object");
      StateDistribution row;
      row.p_correct = r.at("correct").get<double>();
      row.p_substitute = r.at("substitute").get<double>();
      row.p_delete = r.at("delete").get<double>();
      row.p_insert = r.at("insert").get<double>();
      return row;
    };

    ConditionalProbTable table;
    for (const auto& entry : j.at("vocabulary")) {
      table.vocabulary.insert(single_code_point(entry.get<std::string>(), origin));
    }
    for (const auto& [key, value] : j.at("states").items()) {
      table.per_char[single_code_point(key, origin)] =
          row_from_json(value, "state row \"" + key + "\"");
    }
    table.default_state = row_from_json(j.at("default_state"), "default_state");

    const auto dists_from_json = [&](const nlohmann::json& src) {
      std::map<char32_t, CharDistribution> dists;
      for (const auto& [key, value] : src.items()) {
        CharDistribution dist;
        for (const auto& [c, p] : value.items()) {
          dist[single_code_point(c, origin)] = p.get<double>();
        }
        dists[single_code_point(key, origin)] = std::move(dist);
      }
      return dists;
    };
    table.substitution_dist = dists_from_json(j.at("substitutions"));
    table.insertion_dist = dists_from_json(j.at("insertions"));

    table.validate();
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw Error(origin + ": malformed table file: " + e.what());
  }
}

void save_table(const ConditionalProbTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open table file " + path.string() + " for writing");
  out << table_to_json(table) << '\n';
  if (!out) throw Error("failed writing table file " + path.string());
}

ConditionalProbTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open table file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_table_json(buffer.str(), path.string());
}

}  // namespace garble
