// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Canonical data model: corpus records, the line-delimited corpus format,
// deterministic dedup and seeded train/val/test splitting.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "medsumm/error.hpp"
#include "medsumm/util.hpp"

namespace medsumm {

using json = nlohmann::ordered_json;

enum class Category { ENT, EYE, LIMB, SKIN };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::ENT: return "ENT";
    case Category::EYE: return "EYE";
    case Category::LIMB: return "LIMB";
    case Category::SKIN: return "SKIN";
  }
  return "?";
}

inline Category category_from_string(const std::string& s) {
  if (s == "ENT") return Category::ENT;
  if (s == "EYE") return Category::EYE;
  if (s == "LIMB") return Category::LIMB;
  if (s == "SKIN") return Category::SKIN;
  throw InputError("unknown category \"" + s + "\" (expected ENT, EYE, LIMB or SKIN)");
}

inline const std::vector<Category>& all_categories() {
  static const std::vector<Category> cats = {Category::ENT, Category::EYE,
                                             Category::LIMB, Category::SKIN};
  return cats;
}

/// One corpus sample: the code-mixed patient query, optional precomputed
/// vision feature, the reference (golden) summary and its fact annotations.
struct DatasetRecord {
  std::string id;
  std::string query_codemixed;
  std::optional<std::string> query_english;
  std::optional<std::string> image_ref;
  std::optional<std::vector<double>> image_feature;
  std::string golden_summary;
  std::optional<std::string> disorder_phrase;
  std::vector<std::string> gold_facts;
  std::optional<Category> category;
};

/// Decoded model output: Y split into the symptom note T and the summary S.
/// When `raw` does not follow the serialization contract, both fields are
/// empty and parse_failed is set.
struct GenerationOutput {
  std::string symptom_note;
  std::string summary;
  std::string raw;
  bool parse_failed = false;
};

/// Seeded three-way partition of corpus ids.
struct CorpusSplit {
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{0.8, 0.05, 0.15};
};

// ---------------------------------------------------------------------------
// Corpus serialization (UTF-8 JSON lines, fixed field order)
// ---------------------------------------------------------------------------

inline json record_to_json(const DatasetRecord& r) {
  json j;
  j["id"] = r.id;
  j["query_codemixed"] = r.query_codemixed;
  if (r.query_english) j["query_english"] = *r.query_english;
  if (r.image_ref) j["image_ref"] = *r.image_ref;
  if (r.image_feature) j["image_feature"] = *r.image_feature;
  j["golden_summary"] = r.golden_summary;
  if (r.disorder_phrase) j["disorder_phrase"] = *r.disorder_phrase;
  j["gold_facts"] = r.gold_facts;
  if (r.category) j["category"] = to_string(*r.category);
  return j;
}

inline DatasetRecord record_from_json(const json& j) {
  DatasetRecord r;
  if (!j.is_object()) throw InputError("record is not an object");
  if (!j.contains("id") || !j["id"].is_string()) {
    throw InputError("record is missing string field \"id\"");
  }
  r.id = j["id"].get<std::string>();
  if (!j.contains("query_codemixed") || !j["query_codemixed"].is_string()) {
    throw InputError("record is missing string field \"query_codemixed\"");
  }
  r.query_codemixed = j["query_codemixed"].get<std::string>();
  if (r.query_codemixed.empty()) {
    throw InputError("query_codemixed must be non-empty");
  }
  if (j.contains("query_english") && !j["query_english"].is_null()) {
    r.query_english = j["query_english"].get<std::string>();
  }
  if (j.contains("image_ref") && !j["image_ref"].is_null()) {
    r.image_ref = j["image_ref"].get<std::string>();
  }
  if (j.contains("image_feature") && !j["image_feature"].is_null()) {
    r.image_feature = j["image_feature"].get<std::vector<double>>();
  }
  if (j.contains("golden_summary") && j["golden_summary"].is_string()) {
    r.golden_summary = j["golden_summary"].get<std::string>();
  }
  if (j.contains("disorder_phrase") && !j["disorder_phrase"].is_null()) {
    r.disorder_phrase = j["disorder_phrase"].get<std::string>();
  }
  if (j.contains("gold_facts") && !j["gold_facts"].is_null()) {
    r.gold_facts = j["gold_facts"].get<std::vector<std::string>>();
  }
  if (j.contains("category") && !j["category"].is_null()) {
    r.category = category_from_string(j["category"].get<std::string>());
  }
  return r;
}

/// Loads a line-delimited corpus. Blank lines are ignored. `expected_dim`
/// pins the vision-feature length; 0 infers it from the first feature seen
/// and then enforces consistency.
inline std::vector<DatasetRecord> load_corpus(const std::string& path,
                                              std::size_t expected_dim = 0) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path);
  std::vector<DatasetRecord> records;
  std::unordered_map<std::string, std::size_t> seen_ids;  // id -> line number
  std::size_t inferred_dim = expected_dim;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed record: " + e.what());
    }
    DatasetRecord r;
    try {
      r = record_from_json(j);
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed record: " + e.what());
    }
    auto it = seen_ids.find(r.id);
    if (it != seen_ids.end()) {
      throw InputError(path + ": duplicate id \"" + r.id + "\" on lines " +
                       std::to_string(it->second) + " and " +
                       std::to_string(lineno));
    }
    seen_ids.emplace(r.id, lineno);
    if (r.image_feature) {
      if (inferred_dim == 0) {
        inferred_dim = r.image_feature->size();
        if (inferred_dim == 0) {
          throw InputError(path + ":" + std::to_string(lineno) +
                           ": image_feature must be non-empty");
        }
      } else if (r.image_feature->size() != inferred_dim) {
        throw InputError(path + ":" + std::to_string(lineno) +
                         ": image_feature length " +
                         std::to_string(r.image_feature->size()) +
                         " does not match expected " +
                         std::to_string(inferred_dim));
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline void write_corpus(const std::vector<DatasetRecord>& records,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write corpus file: " + path);
  for (const auto& r : records) {
    out << record_to_json(r).dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Dedup
// ---------------------------------------------------------------------------

struct DedupResult {
  std::vector<DatasetRecord> kept;
  std::size_t removed_count = 0;
};

/// Removes records whose normalized query (lowercased, whitespace-collapsed)
/// already occurred. First occurrence wins; input order is preserved.
inline DedupResult dedup(const std::vector<DatasetRecord>& records) {
  DedupResult out;
  std::unordered_map<std::string, bool> seen;
  for (const auto& r : records) {
    std::string key = normalize_ws_lower(r.query_codemixed);
    if (seen.emplace(std::move(key), true).second) {
      out.kept.push_back(r);
    } else {
      ++out.removed_count;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Split
// ---------------------------------------------------------------------------

namespace detail {

inline void check_ratios(const std::array<double, 3>& ratios) {
  for (double r : ratios) {
    if (r < 0.0) throw InputError("split ratios must be non-negative");
  }
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "split ratios must sum to 1 (got " << sum << ")";
    throw InputError(os.str());
  }
}

/// Shuffles ids with the seeded generator, then cuts floor(N*r_train) /
/// floor(N*r_val) / remainder.
inline void split_ids(std::vector<std::string> ids,
                      const std::array<double, 3>& ratios, Rng& rng,
                      CorpusSplit& out) {
  rng.shuffle(ids);
  const std::size_t n = ids.size();
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * ratios[0]));
  const auto n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * ratios[1]));
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) {
      out.train_ids.push_back(std::move(ids[i]));
    } else if (i < n_train + n_val) {
      out.val_ids.push_back(std::move(ids[i]));
    } else {
      out.test_ids.push_back(std::move(ids[i]));
    }
  }
}

}  // namespace detail

/// Seeded deterministic split. With `stratify`, the floor/floor/remainder
/// rule is applied within each category bucket (records without a category
/// form their own bucket) so per-category ratios are preserved.
inline CorpusSplit split(const std::vector<DatasetRecord>& records,
                         const std::array<double, 3>& ratios,
                         std::uint64_t seed, bool stratify = false) {
  detail::check_ratios(ratios);
  CorpusSplit out;
  out.seed = seed;
  out.ratios = ratios;
  Rng rng(seed);
  if (!stratify) {
    std::vector<std::string> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.id);
    detail::split_ids(std::move(ids), ratios, rng, out);
    return out;
  }
  // Buckets in fixed order: ENT, EYE, LIMB, SKIN, then uncategorized.
  std::vector<std::vector<std::string>> buckets(5);
  for (const auto& r : records) {
    std::size_t b = r.category ? static_cast<std::size_t>(*r.category) : 4;
    buckets[b].push_back(r.id);
  }
  for (auto& bucket : buckets) {
    detail::split_ids(std::move(bucket), ratios, rng, out);
  }
  return out;
}

inline json split_to_json(const CorpusSplit& s) {
  json j;
  j["train_ids"] = s.train_ids;
  j["val_ids"] = s.val_ids;
  j["test_ids"] = s.test_ids;
  j["seed"] = s.seed;
  j["ratios"] = s.ratios;
  return j;
}

inline void write_split(const CorpusSplit& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write split file: " + path);
  out << split_to_json(s).dump(2) << '\n';
}

inline CorpusSplit load_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open split file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed split file: " + std::string(e.what()));
  }
  CorpusSplit s;
  s.train_ids = j.at("train_ids").get<std::vector<std::string>>();
  s.val_ids = j.at("val_ids").get<std::vector<std::string>>();
  s.test_ids = j.at("test_ids").get<std::vector<std::string>>();
  s.seed = j.at("seed").get<std::uint64_t>();
  auto r = j.at("ratios").get<std::vector<double>>();
  if (r.size() != 3) throw InputError(path + ": ratios must have 3 entries");
  s.ratios = {r[0], r[1], r[2]};
  return s;
}

}  // namespace medsumm
