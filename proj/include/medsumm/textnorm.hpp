// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tokenization, n-gram extraction and generation post-processing. This is the
// shared substrate for every text metric in the toolkit: a token is a maximal
// run of letters or digits (Latin and Devanagari), punctuation is dropped,
// and ASCII letters are lowercased. Devanagari passes through unchanged.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "medsumm/util.hpp"

namespace medsumm {

/// Token sequence with byte spans back into the source text.
struct TokenSeq {
  std::vector<std::string> tokens;
  // [begin, end) byte offsets of each token in the original text.
  std::vector<std::pair<std::size_t, std::size_t>> spans;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  /// Builds a sequence from bare tokens, synthesizing spans as if the tokens
  /// were joined with single spaces. Used by tests and by callers that start
  /// from word lists rather than raw text.
  static TokenSeq from_tokens(std::vector<std::string> toks) {
    TokenSeq seq;
    std::size_t pos = 0;
    seq.spans.reserve(toks.size());
    for (const auto& t : toks) {
      seq.spans.emplace_back(pos, pos + t.size());
      pos += t.size() + 1;
    }
    seq.tokens = std::move(toks);
    return seq;
  }
};

namespace detail {

/// Decodes one UTF-8 code point starting at `i`; advances `i` past it.
/// Malformed bytes decode as U+FFFD one byte at a time, so tokenization is
/// total on arbitrary input.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) {
    ++i;
    return c0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0) {
    len = 2;
    cp = c0 & 0x1F;
  } else if ((c0 & 0xF0) == 0xE0) {
    len = 3;
    cp = c0 & 0x0F;
  } else if ((c0 & 0xF8) == 0xF0) {
    len = 4;
    cp = c0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char ck = static_cast<unsigned char>(s[i + k]);
    if ((ck & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (ck & 0x3F);
  }
  i += len;
  return cp;
}

/// Word constituents: ASCII alphanumerics, Latin-1/Extended letters, and the
/// Devanagari block (letters, combining signs and digits, so that romanized
/// and native Hindi words stay whole).
inline bool is_word_cp(char32_t cp) {
  if ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
      (cp >= 'A' && cp <= 'Z')) {
    return true;
  }
  if (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) {
    return true;  // Latin-1 supplement + Latin Extended-A/B letters
  }
  if (cp >= 0x0900 && cp <= 0x097F) {
    return true;  // Devanagari
  }
  return false;
}

inline bool is_digit_cp(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 0x0966 && cp <= 0x096F);
}

}  // namespace detail

/// Unicode-aware word tokenization. Empty text yields an empty sequence.
inline TokenSeq tokenize(std::string_view text) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t start = i;
    char32_t cp = detail::decode_utf8(text, i);
    if (!detail::is_word_cp(cp)) continue;
    // Extend the run.
    std::size_t end = i;
    while (i < text.size()) {
      std::size_t probe = i;
      char32_t next = detail::decode_utf8(text, probe);
      if (!detail::is_word_cp(next)) break;
      i = probe;
      end = i;
    }
    std::string tok;
    tok.reserve(end - start);
    for (std::size_t b = start; b < end; ++b) {
      char c = text[b];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      tok.push_back(c);
    }
    seq.tokens.push_back(std::move(tok));
    seq.spans.emplace_back(start, end);
  }
  return seq;
}

/// True when every code point of the token is a (Latin or Devanagari) digit.
inline bool is_numeric_token(std::string_view token) {
  if (token.empty()) return false;
  std::size_t i = 0;
  while (i < token.size()) {
    if (!detail::is_digit_cp(detail::decode_utf8(token, i))) return false;
  }
  return true;
}

/// Multiset of n-grams. Keys are the n tokens joined with a 0x1F separator,
/// which cannot occur inside a token.
struct NgramCounts {
  std::unordered_map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
};

inline NgramCounts ngrams(const TokenSeq& seq, std::size_t n) {
  if (n == 0) throw std::invalid_argument("ngrams: n must be >= 1");
  NgramCounts out;
  if (seq.size() < n) return out;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    std::string key = seq.tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += seq.tokens[i + k];
    }
    ++out.counts[key];
    ++out.total;
  }
  return out;
}

namespace detail {

/// Splits whitespace-collapsed text into sentences. A sentence ends at a
/// maximal run of . ? ! (the run stays with the sentence).
inline std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto is_term = [](char c) { return c == '.' || c == '?' || c == '!'; };
  while (i < text.size()) {
    if (is_term(text[i])) {
      while (i < text.size() && is_term(text[i])) ++i;
      std::string sent = text.substr(start, i - start);
      while (!sent.empty() && sent.front() == ' ') sent.erase(sent.begin());
      if (!sent.empty()) out.push_back(std::move(sent));
      start = i;
    } else {
      ++i;
    }
  }
  if (start < text.size()) {
    std::string tail = text.substr(start);
    while (!tail.empty() && tail.front() == ' ') tail.erase(tail.begin());
    while (!tail.empty() && tail.back() == ' ') tail.pop_back();
    if (!tail.empty()) out.push_back(std::move(tail));
  }
  return out;
}

}  // namespace detail

/// Post-processing applied to generated summaries before scoring: collapse
/// whitespace, then drop every sentence whose normalized form (lowercased,
/// whitespace-collapsed) already appeared. Idempotent.
inline std::string postprocess_generation(std::string_view text) {
  std::string collapsed = collapse_ws(text);
  std::vector<std::string> sentences = detail::split_sentences(collapsed);
  std::vector<std::string> kept;
  std::vector<std::string> seen;
  for (auto& s : sentences) {
    std::string key = normalize_ws_lower(s);
    bool dup = false;
    for (const auto& k : seen) {
      if (k == key) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      seen.push_back(std::move(key));
      kept.push_back(std::move(s));
    }
  }
  std::string out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i) out.push_back(' ');
    out += kept[i];
  }
  return out;
}

}  // namespace medsumm
