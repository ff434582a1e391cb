// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0

#include "medsumm/codemix.hpp"

#include <algorithm>
#include <random>

#include "gtest/gtest.h"

namespace medsumm {
namespace {

Lexicons toy_lexicons() {
  Lexicons lex;
  lex.lang1_words = {"mujhe", "hai", "se", "din", "aur", "kaafi", "dard", "to"};
  lex.lang2_words = {"fever", "doctor", "rash", "skin", "days", "to"};
  return lex;
}

TEST(TagTokens, AllLang1) {
  TokenSeq seq = TokenSeq::from_tokens({"mujhe", "dard", "hai"});
  LanguageTagging t = tag_tokens(seq, toy_lexicons(), AmbiguityPolicy::Independent);
  EXPECT_EQ(t.total, 3);
  EXPECT_EQ(t.independent, 0);
  EXPECT_EQ(t.lang_counts[0], 3);
  EXPECT_EQ(t.lang_counts[1], 0);
}

TEST(TagTokens, MixedWithNumeric) {
  TokenSeq seq = TokenSeq::from_tokens({"hai", "fever", "3"});
  LanguageTagging t = tag_tokens(seq, toy_lexicons(), AmbiguityPolicy::Independent);
  ASSERT_EQ(t.tags.size(), 3u);
  EXPECT_EQ(t.tags[0], LanguageTag::Lang1);
  EXPECT_EQ(t.tags[1], LanguageTag::Lang2);
  EXPECT_EQ(t.tags[2], LanguageTag::Independent);
}

TEST(TagTokens, AmbiguityPolicies) {
  TokenSeq seq = TokenSeq::from_tokens({"to"});  // in both lexicons
  auto lex = toy_lexicons();
  EXPECT_EQ(tag_tokens(seq, lex, AmbiguityPolicy::PreferLang1).tags[0],
            LanguageTag::Lang1);
  EXPECT_EQ(tag_tokens(seq, lex, AmbiguityPolicy::PreferLang2).tags[0],
            LanguageTag::Lang2);
  EXPECT_EQ(tag_tokens(seq, lex, AmbiguityPolicy::Independent).tags[0],
            LanguageTag::Independent);
}

TEST(TagTokens, UnknownTokenIsIndependent) {
  TokenSeq seq = TokenSeq::from_tokens({"xyzzy"});
  LanguageTagging t = tag_tokens(seq, toy_lexicons(), AmbiguityPolicy::Independent);
  EXPECT_EQ(t.independent, 1);
}

TEST(TagTokens, CountsAddUp) {
  std::mt19937 gen(9);
  std::vector<std::string> pool = {"mujhe", "fever", "3", "xyzzy", "hai",
                                   "rash", "to", "42"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<std::size_t> len(1, 20);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> toks;
    std::size_t n = len(gen);
    for (std::size_t i = 0; i < n; ++i) toks.push_back(pool[pick(gen)]);
    LanguageTagging t = tag_tokens(TokenSeq::from_tokens(toks), toy_lexicons(),
                                   AmbiguityPolicy::PreferLang2);
    EXPECT_EQ(t.total, t.independent + t.lang_counts[0] + t.lang_counts[1]);
    EXPECT_EQ(t.tags.size(), toks.size());
  }
}

TEST(Cmi, MonolingualIsZero) {
  EXPECT_DOUBLE_EQ(cmi(LanguageTagging::from_counts(10, 0, {10, 0})), 0.0);
}

TEST(Cmi, HandComputedCase) {
  EXPECT_DOUBLE_EQ(cmi(LanguageTagging::from_counts(10, 2, {5, 3})), 37.5);
}

TEST(Cmi, BalancedBilingualIsFifty) {
  EXPECT_DOUBLE_EQ(cmi(LanguageTagging::from_counts(8, 0, {4, 4})), 50.0);
  EXPECT_DOUBLE_EQ(cmi(LanguageTagging::from_counts(14, 0, {7, 7})), 50.0);
}

TEST(Cmi, AllIndependentIsZero) {
  EXPECT_DOUBLE_EQ(cmi(LanguageTagging::from_counts(5, 5, {0, 0})), 0.0);
}

TEST(Cmi, EmptyTaggingThrows) {
  EXPECT_THROW(cmi(LanguageTagging::from_counts(0, 0, {0, 0})), InputError);
}

TEST(Cmi, BoundsAndInvariances) {
  std::mt19937 gen(13);
  std::uniform_int_distribution<std::int64_t> part(0, 20);
  for (int iter = 0; iter < 1000; ++iter) {
    std::int64_t w1 = part(gen), w2 = part(gen), u = part(gen);
    std::int64_t n = w1 + w2 + u;
    if (n == 0) continue;
    double v = cmi(LanguageTagging::from_counts(n, u, {w1, w2}));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 50.0);  // two languages
    // Label swap invariance.
    EXPECT_DOUBLE_EQ(v, cmi(LanguageTagging::from_counts(n, u, {w2, w1})));
    // Zero iff all assignable tokens share one language.
    if (w1 + w2 > 0 && std::min(w1, w2) == 0) {
      EXPECT_DOUBLE_EQ(v, 0.0);
    } else if (std::min(w1, w2) > 0) {
      EXPECT_GT(v, 0.0);
    }
  }
}

TEST(Cmi, PermutationInvariantThroughTagging) {
  std::mt19937 gen(14);
  std::vector<std::string> toks = {"mujhe", "fever", "hai", "rash",
                                   "3",     "skin",  "se",  "doctor"};
  double base = cmi(tag_tokens(TokenSeq::from_tokens(toks), toy_lexicons(),
                               AmbiguityPolicy::Independent));
  for (int iter = 0; iter < 50; ++iter) {
    std::shuffle(toks.begin(), toks.end(), gen);
    double v = cmi(tag_tokens(TokenSeq::from_tokens(toks), toy_lexicons(),
                              AmbiguityPolicy::Independent));
    EXPECT_DOUBLE_EQ(v, base);
  }
}

TEST(CorpusCmi, MeanOverRecords) {
  // Two records engineered to CMI 20 and 40.
  // CMI 20: w = (8, 2), u = 0 -> 100 * (1 - 8/10) = 20.
  // CMI 40: w = (6, 4), u = 0 -> 100 * (1 - 6/10) = 40.
  Lexicons lex;
  lex.lang1_words = {"h"};
  lex.lang2_words = {"e"};
  auto record = [&](int h, int e) {
    std::vector<std::string> toks;
    for (int i = 0; i < h; ++i) toks.push_back("h");
    for (int i = 0; i < e; ++i) toks.push_back("e");
    return TokenSeq::from_tokens(toks);
  };
  CorpusCmi out = corpus_cmi({record(8, 2), record(6, 4)}, lex,
                             AmbiguityPolicy::Independent);
  ASSERT_EQ(out.per_record.size(), 2u);
  EXPECT_DOUBLE_EQ(out.per_record[0], 20.0);
  EXPECT_DOUBLE_EQ(out.per_record[1], 40.0);
  EXPECT_DOUBLE_EQ(out.mean, 30.0);
}

TEST(CorpusCmi, SingleMonolingualRecord) {
  Lexicons lex;
  lex.lang1_words = {"h"};
  lex.lang2_words = {"e"};
  CorpusCmi out = corpus_cmi({TokenSeq::from_tokens({"h", "h"})}, lex,
                             AmbiguityPolicy::Independent);
  EXPECT_DOUBLE_EQ(out.mean, 0.0);
}

TEST(CorpusCmi, EngineeredCountsGiveExactMean) {
  // Records with n = 200, u = 0, max w = 139 score
  // 100 * (1 - 139/200) = 30.5 exactly.
  EXPECT_DOUBLE_EQ(cmi(LanguageTagging::from_counts(200, 0, {139, 61})), 30.5);
  Lexicons lex;
  lex.lang1_words = {"h"};
  lex.lang2_words = {"e"};
  std::vector<TokenSeq> corpus;
  for (int rec = 0; rec < 3; ++rec) {
    std::vector<std::string> toks;
    for (int i = 0; i < 139; ++i) toks.push_back("h");
    for (int i = 0; i < 61; ++i) toks.push_back("e");
    corpus.push_back(TokenSeq::from_tokens(toks));
  }
  CorpusCmi out = corpus_cmi(corpus, lex, AmbiguityPolicy::Independent);
  EXPECT_DOUBLE_EQ(out.mean, 30.5);
}

TEST(CorpusCmi, SkipsEmptyRecordsAndErrorsWhenAllEmpty) {
  Lexicons lex;
  lex.lang1_words = {"h"};
  lex.lang2_words = {"e"};
  CorpusCmi out = corpus_cmi({TokenSeq{}, TokenSeq::from_tokens({"h", "e"})},
                             lex, AmbiguityPolicy::Independent);
  EXPECT_EQ(out.skipped_empty, 1u);
  ASSERT_EQ(out.per_record.size(), 1u);
  EXPECT_DOUBLE_EQ(out.mean, 50.0);
  EXPECT_THROW(corpus_cmi({TokenSeq{}}, lex, AmbiguityPolicy::Independent),
               InputError);
  EXPECT_THROW(corpus_cmi({}, lex, AmbiguityPolicy::Independent), InputError);
}

}  // namespace
}  // namespace medsumm
