// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Token-level language tagging from word lexicons and the code-mixing index
// (CMI) of a tagging: 100 * (1 - max_i w_i / (n - u)), 0 for monolingual
// text, where n is the token count, u the language-independent count and
// w_i the per-language counts.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "medsumm/error.hpp"
#include "medsumm/textnorm.hpp"

namespace medsumm {

enum class LanguageTag { Lang1, Lang2, Independent };

enum class AmbiguityPolicy { PreferLang1, PreferLang2, Independent };

inline AmbiguityPolicy ambiguity_policy_from_string(const std::string& s) {
  if (s == "prefer-lang1") return AmbiguityPolicy::PreferLang1;
  if (s == "prefer-lang2") return AmbiguityPolicy::PreferLang2;
  if (s == "independent") return AmbiguityPolicy::Independent;
  throw InputError("unknown ambiguity policy \"" + s +
                   "\" (expected prefer-lang1, prefer-lang2 or independent)");
}

/// Per-token tags plus the counts the CMI formula consumes.
struct LanguageTagging {
  std::vector<LanguageTag> tags;      // aligned 1:1 with the token sequence
  std::int64_t total = 0;             // n
  std::int64_t independent = 0;       // u
  std::vector<std::int64_t> lang_counts{0, 0};  // w_i

  static LanguageTagging from_counts(std::int64_t n, std::int64_t u,
                                     std::vector<std::int64_t> w) {
    LanguageTagging t;
    t.total = n;
    t.independent = u;
    t.lang_counts = std::move(w);
    std::int64_t sum = t.independent;
    for (std::int64_t c : t.lang_counts) sum += c;
    if (sum != t.total) {
      throw InputError("language tagging counts do not add up: n != u + sum(w)");
    }
    return t;
  }
};

/// Word lists for the two languages. Overlap is allowed; ambiguous tokens
/// are resolved by the tagging policy.
struct Lexicons {
  std::unordered_set<std::string> lang1_words;
  std::unordered_set<std::string> lang2_words;

  void validate() const {
    if (lang1_words.empty() || lang2_words.empty()) {
      throw InputError("both lexicons must be non-empty");
    }
  }
};

/// Lexicon file: one word per line, UTF-8. Words are normalized the same way
/// tokens are (lowercased ASCII).
inline std::unordered_set<std::string> load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = normalize_ws_lower(line);
    if (!w.empty()) words.insert(std::move(w));
  }
  return words;
}

/// Tags each token: numeric tokens and tokens in neither lexicon are
/// INDEPENDENT; tokens in exactly one lexicon get that language; tokens in
/// both follow the policy.
inline LanguageTagging tag_tokens(const TokenSeq& seq, const Lexicons& lexicons,
                                  AmbiguityPolicy policy) {
  lexicons.validate();
  LanguageTagging out;
  out.tags.reserve(seq.size());
  for (const auto& tok : seq.tokens) {
    LanguageTag tag = LanguageTag::Independent;
    if (!is_numeric_token(tok)) {
      bool in1 = lexicons.lang1_words.count(tok) > 0;
      bool in2 = lexicons.lang2_words.count(tok) > 0;
      if (in1 && in2) {
        switch (policy) {
          case AmbiguityPolicy::PreferLang1: tag = LanguageTag::Lang1; break;
          case AmbiguityPolicy::PreferLang2: tag = LanguageTag::Lang2; break;
          case AmbiguityPolicy::Independent: tag = LanguageTag::Independent; break;
        }
      } else if (in1) {
        tag = LanguageTag::Lang1;
      } else if (in2) {
        tag = LanguageTag::Lang2;
      }
    }
    out.tags.push_back(tag);
    ++out.total;
    switch (tag) {
      case LanguageTag::Lang1: ++out.lang_counts[0]; break;
      case LanguageTag::Lang2: ++out.lang_counts[1]; break;
      case LanguageTag::Independent: ++out.independent; break;
    }
  }
  return out;
}

/// CMI in [0, 100]. Monolingual (and all-independent) text scores 0.
inline double cmi(const LanguageTagging& tagging) {
  if (tagging.total < 1) {
    throw InputError("cmi: tagging must cover at least one token");
  }
  if (tagging.total == tagging.independent) return 0.0;
  std::int64_t max_w = 0;
  for (std::int64_t w : tagging.lang_counts) max_w = std::max(max_w, w);
  const double assignable =
      static_cast<double>(tagging.total - tagging.independent);
  return 100.0 * (1.0 - static_cast<double>(max_w) / assignable);
}

struct CorpusCmi {
  double mean = 0.0;
  std::vector<double> per_record;   // NaN-free: only scored records
  std::vector<std::size_t> scored_indices;
  std::size_t skipped_empty = 0;
};

/// Mean per-record CMI over a corpus of token sequences. Empty records are
/// skipped and counted; an all-empty corpus is an error.
inline CorpusCmi corpus_cmi(const std::vector<TokenSeq>& corpus,
                            const Lexicons& lexicons, AmbiguityPolicy policy) {
  if (corpus.empty()) throw InputError("corpus_cmi: empty corpus");
  CorpusCmi out;
  double sum = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].empty()) {
      ++out.skipped_empty;
      continue;
    }
    double value = cmi(tag_tokens(corpus[i], lexicons, policy));
    out.per_record.push_back(value);
    out.scored_indices.push_back(i);
    sum += value;
  }
  if (out.per_record.empty()) {
    throw InputError("corpus_cmi: all records are empty");
  }
  out.mean = sum / static_cast<double>(out.per_record.size());
  return out;
}

}  // namespace medsumm
