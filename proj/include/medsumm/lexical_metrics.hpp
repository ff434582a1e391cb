// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-reference lexical metrics: ROUGE-1/2/L, cumulative BLEU-1..4 and
// exact-match METEOR. All scores are fractions in [0, 1]; percent rendering
// is a presentation concern of the report layer.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "medsumm/textnorm.hpp"

namespace medsumm {

struct PrecisionRecallF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PrecisionRecallF make(double p, double r) {
    PrecisionRecallF s;
    s.precision = p;
    s.recall = r;
    s.f1 = (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
    return s;
  }
};

struct BleuScore {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  double brevity_penalty = 1.0;
  std::array<double, 4> precisions{0.0, 0.0, 0.0, 0.0};

  double cumulative(std::size_t n) const {
    switch (n) {
      case 1: return b1;
      case 2: return b2;
      case 3: return b3;
      case 4: return b4;
    }
    throw std::invalid_argument("BleuScore: n must be in 1..4");
  }
};

// ---------------------------------------------------------------------------
// ROUGE
// ---------------------------------------------------------------------------

/// ROUGE-N for n in {1, 2}: multiset n-gram overlap, recall against the
/// reference, precision against the candidate.
inline PrecisionRecallF rouge_n(const TokenSeq& candidate,
                                const TokenSeq& reference, std::size_t n) {
  if (n < 1 || n > 2) throw std::invalid_argument("rouge_n: n must be 1 or 2");
  NgramCounts cand = ngrams(candidate, n);
  NgramCounts ref = ngrams(reference, n);
  std::int64_t overlap = 0;
  for (const auto& [gram, count] : cand.counts) {
    auto it = ref.counts.find(gram);
    if (it != ref.counts.end()) overlap += std::min(count, it->second);
  }
  double p = cand.total > 0 ? static_cast<double>(overlap) / cand.total : 0.0;
  double r = ref.total > 0 ? static_cast<double>(overlap) / ref.total : 0.0;
  return PrecisionRecallF::make(p, r);
}

/// Longest common subsequence length, quadratic DP.
inline std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  const std::size_t m = a.size(), n = b.size();
  if (m == 0 || n == 0) return 0;
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (a.tokens[i - 1] == b.tokens[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

inline PrecisionRecallF rouge_l(const TokenSeq& candidate,
                                const TokenSeq& reference) {
  std::size_t l = lcs_length(candidate, reference);
  double p = candidate.size() ? static_cast<double>(l) / candidate.size() : 0.0;
  double r = reference.size() ? static_cast<double>(l) / reference.size() : 0.0;
  return PrecisionRecallF::make(p, r);
}

// ---------------------------------------------------------------------------
// BLEU
// ---------------------------------------------------------------------------

/// Cumulative BLEU-1..4 against a single reference: clipped n-gram precisions
/// p1..p4, uniform 1/n weights, brevity penalty exp(1 - r/c) when c <= r.
/// An empty candidate scores 0 everywhere.
inline BleuScore bleu(const TokenSeq& candidate, const TokenSeq& reference) {
  BleuScore score;
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  if (c == 0.0) {
    score.brevity_penalty = 0.0;
    return score;
  }
  score.brevity_penalty = c > r ? 1.0 : std::exp(1.0 - r / c);
  for (std::size_t n = 1; n <= 4; ++n) {
    NgramCounts cand = ngrams(candidate, n);
    NgramCounts ref = ngrams(reference, n);
    std::int64_t clipped = 0;
    for (const auto& [gram, count] : cand.counts) {
      auto it = ref.counts.find(gram);
      if (it != ref.counts.end()) clipped += std::min(count, it->second);
    }
    score.precisions[n - 1] =
        cand.total > 0 ? static_cast<double>(clipped) / cand.total : 0.0;
  }
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    double p = score.precisions[n - 1];
    double value = 0.0;
    if (p > 0.0) {
      log_sum += std::log(p);
      value = score.brevity_penalty * std::exp(log_sum / static_cast<double>(n));
    } else {
      log_sum = -std::numeric_limits<double>::infinity();
    }
    switch (n) {
      case 1: score.b1 = value; break;
      case 2: score.b2 = value; break;
      case 3: score.b3 = value; break;
      case 4: score.b4 = value; break;
    }
  }
  return score;
}

// ---------------------------------------------------------------------------
// METEOR
// ---------------------------------------------------------------------------

namespace detail {

/// Minimal-chunk search for METEOR. The number of matches is fixed at
/// sum_w min(count_cand(w), count_ref(w)); among alignments realizing it we
/// want the fewest chunks (maximal runs that are contiguous in both
/// sequences). Chunk minimization is equivalent to minimum common string
/// partition, which is NP-hard, so the exact memoized search below carries a
/// state budget; past the budget (or 64 reference tokens) the caller falls
/// back to a leftmost-greedy alignment.
class ChunkMinimizer {
 public:
  ChunkMinimizer(const std::vector<std::string>& cand,
                 const std::vector<std::string>& ref)
      : cand_(cand), ref_(ref) {
    std::unordered_map<std::string, int> cand_count, ref_count;
    for (const auto& t : cand) ++cand_count[t];
    for (const auto& t : ref) ++ref_count[t];
    int next_word = 0;
    std::unordered_map<std::string, int> word_id;
    for (const auto& [w, cc] : cand_count) {
      auto it = ref_count.find(w);
      if (it == ref_count.end()) continue;
      word_id[w] = next_word;
      quota_.push_back(std::min(cc, it->second));
      ++next_word;
    }
    cand_word_.assign(cand.size(), -1);
    ref_word_.assign(ref.size(), -1);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      auto it = word_id.find(cand[i]);
      if (it != word_id.end()) cand_word_[i] = it->second;
    }
    for (std::size_t j = 0; j < ref.size(); ++j) {
      auto it = word_id.find(ref[j]);
      if (it != word_id.end()) ref_word_[j] = it->second;
    }
    // Suffix occurrence counts per word, for skip feasibility.
    suffix_.assign(cand.size() + 1, std::vector<int>(quota_.size(), 0));
    for (std::size_t i = cand.size(); i-- > 0;) {
      suffix_[i] = suffix_[i + 1];
      if (cand_word_[i] >= 0) ++suffix_[i][cand_word_[i]];
    }
    total_matches_ = 0;
    for (int q : quota_) total_matches_ += q;
  }

  std::int64_t matches() const { return total_matches_; }

  /// Returns the minimal chunk count, or -1 when the search exceeded its
  /// budget (or the reference is too long for the bitmask).
  int minimal_chunks() {
    if (total_matches_ == 0) return 0;
    if (ref_.size() > 64) return -1;
    states_ = 0;
    memo_.clear();
    int result = search(0, 0ull, 0);
    return states_ > kStateBudget ? -1 : result;
  }

  /// Leftmost-greedy fallback: match each candidate occurrence of a word, in
  /// order, to the first unused reference occurrence while quota remains.
  /// Always realizes the maximal match count; chunk count is an upper bound.
  int greedy_chunks() const {
    std::vector<int> remaining = quota_;
    std::vector<std::vector<std::size_t>> ref_positions(quota_.size());
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      if (ref_word_[j] >= 0) ref_positions[ref_word_[j]].push_back(j);
    }
    std::vector<std::size_t> next_free(quota_.size(), 0);
    std::vector<bool> used(ref_.size(), false);
    int chunks = 0;
    std::int64_t prev_j = -2;
    for (std::size_t i = 0; i < cand_.size(); ++i) {
      int w = cand_word_[i];
      if (w < 0 || remaining[w] == 0) {
        prev_j = -2;
        continue;
      }
      // Prefer continuing the current chunk if that reference slot is free
      // and holds the same word.
      std::int64_t j = -1;
      std::size_t cont = static_cast<std::size_t>(prev_j + 1);
      if (prev_j >= 0 && cont < ref_.size() && !used[cont] &&
          ref_word_[cont] == w) {
        j = static_cast<std::int64_t>(cont);
      } else {
        auto& positions = ref_positions[w];
        while (next_free[w] < positions.size() && used[positions[next_free[w]]]) {
          ++next_free[w];
        }
        if (next_free[w] < positions.size()) {
          j = static_cast<std::int64_t>(positions[next_free[w]]);
        }
      }
      if (j < 0) {
        prev_j = -2;
        continue;
      }
      used[static_cast<std::size_t>(j)] = true;
      --remaining[w];
      if (j != prev_j + 1 || prev_j == -2) ++chunks;
      prev_j = j;
    }
    return chunks;
  }

 private:
  static constexpr std::size_t kStateBudget = 1 << 18;

  // State: candidate index, mask of used reference positions, and cont =
  // (previous candidate position matched to j) ? j + 1 : 0. Quotas are
  // derivable from the mask.
  int search(std::size_t i, std::uint64_t mask, std::uint64_t cont) {
    if (++states_ > kStateBudget) return 0;  // result discarded by caller
    // Remaining quota per word from the mask.
    std::vector<int> remaining = quota_;
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      if ((mask >> j) & 1ull) --remaining[ref_word_[j]];
    }
    bool done = true;
    for (int q : remaining) {
      if (q > 0) {
        done = false;
        break;
      }
    }
    if (done) return 0;
    if (i >= cand_.size()) return kInfeasible;
    std::uint64_t key = (static_cast<std::uint64_t>(i) << 7) | cont;
    auto memo_it = memo_.find(mask);
    if (memo_it != memo_.end()) {
      auto it2 = memo_it->second.find(key);
      if (it2 != memo_it->second.end()) return it2->second;
    }
    int w = cand_word_[i];
    int best = kInfeasible;
    // Skip this candidate position if later occurrences can still fill quota.
    bool can_skip =
        w < 0 || remaining[w] <= 0 || suffix_[i + 1][w] >= remaining[w];
    if (can_skip) {
      int sub = search(i + 1, mask, 0);
      if (sub != kInfeasible) best = std::min(best, sub);
    }
    if (w >= 0 && remaining[w] > 0) {
      for (std::size_t j = 0; j < ref_.size(); ++j) {
        if (ref_word_[j] != w || ((mask >> j) & 1ull)) continue;
        bool continues = (cont != 0 && j == cont);
        int cost = continues ? 0 : 1;
        int sub = search(i + 1, mask | (1ull << j),
                         static_cast<std::uint64_t>(j + 1));
        if (sub != kInfeasible) best = std::min(best, cost + sub);
      }
    }
    memo_[mask][key] = best;
    return best;
  }

  static constexpr int kInfeasible = 1 << 20;

  const std::vector<std::string>& cand_;
  const std::vector<std::string>& ref_;
  std::vector<int> quota_;          // per matched word
  std::vector<int> cand_word_;      // -1 when unmatched
  std::vector<int> ref_word_;
  std::vector<std::vector<int>> suffix_;
  std::int64_t total_matches_ = 0;
  std::size_t states_ = 0;
  std::unordered_map<std::uint64_t, std::unordered_map<std::uint64_t, int>> memo_;
};

}  // namespace detail

struct MeteorScore {
  double score = 0.0;
  std::int64_t matches = 0;
  int chunks = 0;
  double f_mean = 0.0;
  double penalty = 0.0;
};

/// Exact-unigram METEOR with alpha = 0.9, beta = 3, gamma = 0.5. Matches are
/// maximal; chunks are minimized exactly within a search budget, with a
/// leftmost-greedy fallback on very long or adversarial inputs.
inline MeteorScore meteor_detailed(const TokenSeq& candidate,
                                   const TokenSeq& reference) {
  constexpr double kAlpha = 0.9;
  constexpr double kBeta = 3.0;
  constexpr double kGamma = 0.5;
  MeteorScore out;
  if (candidate.empty() || reference.empty()) return out;
  detail::ChunkMinimizer minimizer(candidate.tokens, reference.tokens);
  out.matches = minimizer.matches();
  if (out.matches == 0) return out;
  int chunks = minimizer.minimal_chunks();
  if (chunks < 0) chunks = minimizer.greedy_chunks();
  out.chunks = chunks;
  const double m = static_cast<double>(out.matches);
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  out.f_mean = p * r / (kAlpha * p + (1.0 - kAlpha) * r);
  out.penalty = kGamma * std::pow(static_cast<double>(chunks) / m, kBeta);
  out.score = out.f_mean * (1.0 - out.penalty);
  return out;
}

inline double meteor(const TokenSeq& candidate, const TokenSeq& reference) {
  return meteor_detailed(candidate, reference).score;
}

}  // namespace medsumm
