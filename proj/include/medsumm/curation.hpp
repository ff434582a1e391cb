// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Symptom-taxonomy keyword matching and corpus curation: a token trie with
// whole-word, longest-match-wins, non-overlapping left-to-right semantics,
// corpus filtering and visual-cue sentence injection.

#pragma once

#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "medsumm/core_data.hpp"
#include "medsumm/error.hpp"
#include "medsumm/textnorm.hpp"

namespace medsumm {

/// One symptom: a canonical name plus surface variants. The canonical name
/// itself is always matchable.
struct SymptomTerm {
  std::string canonical;
  std::vector<std::string> variants;
};

/// Category -> symptom terms. Canonical names must be unique across the
/// whole taxonomy.
struct SymptomTaxonomy {
  std::map<Category, std::vector<SymptomTerm>> categories;

  void validate() const {
    if (categories.empty()) {
      throw InputError("taxonomy must contain at least one category");
    }
    std::unordered_map<std::string, bool> canon;
    for (const auto& [cat, terms] : categories) {
      if (terms.empty()) {
        throw InputError(std::string("taxonomy category ") + to_string(cat) +
                         " has no terms");
      }
      for (const auto& term : terms) {
        if (term.canonical.empty()) {
          throw InputError("taxonomy term with empty canonical name");
        }
        if (!canon.emplace(normalize_ws_lower(term.canonical), true).second) {
          throw InputError("duplicate canonical name \"" + term.canonical +
                           "\" in taxonomy");
        }
      }
    }
  }
};

/// Taxonomy file: {"ENT": [{"canonical": "...", "variants": ["..."]}], ...}
inline SymptomTaxonomy load_taxonomy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open taxonomy file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": malformed taxonomy: " + std::string(e.what()));
  }
  SymptomTaxonomy tax;
  try {
    for (const auto& [key, terms] : j.items()) {
      Category cat = category_from_string(key);
      for (const auto& t : terms) {
        SymptomTerm term;
        term.canonical = t.at("canonical").get<std::string>();
        if (t.contains("variants")) {
          term.variants = t["variants"].get<std::vector<std::string>>();
        }
        tax.categories[cat].push_back(std::move(term));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": malformed taxonomy: " + std::string(e.what()));
  }
  tax.validate();
  return tax;
}

struct TermMatch {
  std::string canonical;
  Category category;
  std::size_t begin = 0;  // byte span in the original text
  std::size_t end = 0;
};

struct MatchResult {
  std::vector<TermMatch> matches;  // non-overlapping, increasing spans
  std::map<Category, std::size_t> category_counts;

  bool empty() const { return matches.empty(); }
};

/// Token trie over normalized term tokens; leaves carry (canonical,
/// category). Immutable after build and shareable across threads.
class KeywordTrie {
 public:
  static KeywordTrie build(const SymptomTaxonomy& taxonomy) {
    taxonomy.validate();
    KeywordTrie trie;
    trie.nodes_.emplace_back();
    for (const auto& [cat, terms] : taxonomy.categories) {
      for (const auto& term : terms) {
        trie.insert(term.canonical, term.canonical, cat);
        for (const auto& variant : term.variants) {
          trie.insert(variant, term.canonical, cat);
        }
      }
    }
    return trie;
  }

  /// Longest-match left-to-right scan over whole tokens. Matched spans are
  /// skipped, so matches never overlap.
  MatchResult find_terms(std::string_view text) const {
    TokenSeq seq = tokenize(text);
    MatchResult out;
    std::size_t i = 0;
    while (i < seq.size()) {
      std::size_t node = 0;
      std::size_t best_len = 0;
      int best_payload = -1;
      for (std::size_t k = i; k < seq.size(); ++k) {
        auto it = nodes_[node].next.find(seq.tokens[k]);
        if (it == nodes_[node].next.end()) break;
        node = it->second;
        if (nodes_[node].payload >= 0) {
          best_len = k - i + 1;
          best_payload = nodes_[node].payload;
        }
      }
      if (best_payload >= 0) {
        const auto& p = payloads_[static_cast<std::size_t>(best_payload)];
        TermMatch m;
        m.canonical = p.first;
        m.category = p.second;
        m.begin = seq.spans[i].first;
        m.end = seq.spans[i + best_len - 1].second;
        out.matches.push_back(std::move(m));
        ++out.category_counts[p.second];
        i += best_len;
      } else {
        ++i;
      }
    }
    return out;
  }

 private:
  struct Node {
    std::unordered_map<std::string, std::size_t> next;
    int payload = -1;
  };

  void insert(const std::string& surface, const std::string& canonical,
              Category category) {
    TokenSeq toks = tokenize(surface);
    if (toks.empty()) {
      throw InputError("taxonomy term \"" + surface +
                       "\" has no word tokens");
    }
    std::size_t node = 0;
    for (const auto& tok : toks.tokens) {
      auto it = nodes_[node].next.find(tok);
      if (it == nodes_[node].next.end()) {
        nodes_.emplace_back();
        std::size_t child = nodes_.size() - 1;
        nodes_[node].next.emplace(tok, child);
        node = child;
      } else {
        node = it->second;
      }
    }
    if (nodes_[node].payload >= 0) {
      const auto& existing = payloads_[static_cast<std::size_t>(nodes_[node].payload)];
      if (existing.first != canonical) {
        throw InputError("variant \"" + surface +
                         "\" maps to two canonical names: \"" +
                         existing.first + "\" and \"" + canonical + "\"");
      }
      return;  // same canonical inserted twice is harmless
    }
    payloads_.emplace_back(canonical, category);
    nodes_[node].payload = static_cast<int>(payloads_.size() - 1);
  }

  std::vector<Node> nodes_;
  std::vector<std::pair<std::string, Category>> payloads_;
};

inline KeywordTrie build_trie(const SymptomTaxonomy& taxonomy) {
  return KeywordTrie::build(taxonomy);
}

inline MatchResult find_terms(std::string_view text, const KeywordTrie& trie) {
  return trie.find_terms(text);
}

enum class RequireIn { Query, Summary, Either, Both };

inline RequireIn require_in_from_string(const std::string& s) {
  if (s == "query") return RequireIn::Query;
  if (s == "summary") return RequireIn::Summary;
  if (s == "either") return RequireIn::Either;
  if (s == "both") return RequireIn::Both;
  throw InputError("unknown require-in value \"" + s +
                   "\" (expected query, summary, either or both)");
}

struct FilterResult {
  std::vector<DatasetRecord> kept;
  // One category per kept record: the first match in scan order (query text
  // first, then the summary). Sums exactly to kept.size().
  std::map<Category, std::size_t> histogram;
};

/// Keeps records whose required field(s) contain at least one taxonomy term.
inline FilterResult filter_corpus(const std::vector<DatasetRecord>& records,
                                  const KeywordTrie& trie, RequireIn require_in) {
  FilterResult out;
  for (const auto& r : records) {
    MatchResult in_query = trie.find_terms(r.query_codemixed);
    MatchResult in_summary = trie.find_terms(r.golden_summary);
    bool keep = false;
    switch (require_in) {
      case RequireIn::Query: keep = !in_query.empty(); break;
      case RequireIn::Summary: keep = !in_summary.empty(); break;
      case RequireIn::Either: keep = !in_query.empty() || !in_summary.empty(); break;
      case RequireIn::Both: keep = !in_query.empty() && !in_summary.empty(); break;
    }
    if (!keep) continue;
    const MatchResult& first_source =
        (require_in == RequireIn::Summary || in_query.empty()) ? in_summary
                                                               : in_query;
    ++out.histogram[first_source.matches.front().category];
    out.kept.push_back(r);
  }
  return out;
}

/// Default visual-cue template; {disorder} is replaced with the record's
/// disorder phrase.
inline const char* default_cue_template() {
  return "Please see what happened to my {disorder} in the image below.";
}

/// Appends the rendered cue sentence to the query. Idempotent: a query that
/// already contains the cue (up to whitespace) is returned unchanged.
inline DatasetRecord inject_visual_cue(
    const DatasetRecord& record,
    const std::string& cue_template = default_cue_template()) {
  if (!record.disorder_phrase) {
    throw InputError("inject_visual_cue: record \"" + record.id +
                     "\" has no disorder_phrase");
  }
  if (!record.image_ref) {
    throw InputError("inject_visual_cue: record \"" + record.id +
                     "\" has no image_ref");
  }
  std::string cue = cue_template;
  const std::string placeholder = "{disorder}";
  for (std::size_t pos = cue.find(placeholder); pos != std::string::npos;
       pos = cue.find(placeholder, pos)) {
    cue.replace(pos, placeholder.size(), *record.disorder_phrase);
    pos += record.disorder_phrase->size();
  }
  DatasetRecord out = record;
  std::string query_key = normalize_ws_lower(record.query_codemixed);
  std::string cue_key = normalize_ws_lower(cue);
  if (query_key.find(cue_key) != std::string::npos) {
    return out;  // cue already present
  }
  if (!out.query_codemixed.empty() && out.query_codemixed.back() != ' ') {
    out.query_codemixed.push_back(' ');
  }
  out.query_codemixed += cue;
  return out;
}

}  // namespace medsumm
