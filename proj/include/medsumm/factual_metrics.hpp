// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Fact-based human-evaluation metrics: the MMFCM fact-capture score, factual
// and omission recall, hallucination rate, rating aggregation and Cohen's
// kappa agreement.

#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "medsumm/error.hpp"
#include "medsumm/util.hpp"

namespace medsumm {

/// Annotator verdict on the disorder phrase in a generated summary. Absent
/// means no disorder phrase appeared at all.
enum class DisorderJudgment { FullyCorrect, PartiallyCorrect, Incorrect, Absent };

inline const char* to_string(DisorderJudgment j) {
  switch (j) {
    case DisorderJudgment::FullyCorrect: return "fully_correct";
    case DisorderJudgment::PartiallyCorrect: return "partially_correct";
    case DisorderJudgment::Incorrect: return "incorrect";
    case DisorderJudgment::Absent: return "absent";
  }
  return "?";
}

inline DisorderJudgment disorder_judgment_from_string(const std::string& s) {
  if (s == "fully_correct") return DisorderJudgment::FullyCorrect;
  if (s == "partially_correct") return DisorderJudgment::PartiallyCorrect;
  if (s == "incorrect") return DisorderJudgment::Incorrect;
  if (s == "absent") return DisorderJudgment::Absent;
  throw InputError("unknown disorder judgment \"" + s +
                   "\" (expected fully_correct, partially_correct, incorrect "
                   "or absent)");
}

/// Gold and generated fact sets for one sample. Fact strings are normalized
/// (lowercased, whitespace-collapsed) on insertion.
struct FactAnnotation {
  std::set<std::string> gold_facts;
  std::set<std::string> generated_facts;
  DisorderJudgment disorder_judgment = DisorderJudgment::Absent;

  static FactAnnotation make(const std::vector<std::string>& gold,
                             const std::vector<std::string>& generated,
                             DisorderJudgment judgment) {
    FactAnnotation a;
    a.disorder_judgment = judgment;
    for (const auto& f : gold) {
      std::string key = normalize_ws_lower(f);
      if (key.empty()) throw InputError("fact strings must be non-empty");
      a.gold_facts.insert(std::move(key));
    }
    for (const auto& f : generated) {
      std::string key = normalize_ws_lower(f);
      if (key.empty()) throw InputError("fact strings must be non-empty");
      a.generated_facts.insert(std::move(key));
    }
    return a;
  }
};

namespace detail {

inline std::size_t intersection_size(const std::set<std::string>& a,
                                     const std::set<std::string>& b) {
  std::size_t n = 0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& x : small) n += large.count(x);
  return n;
}

inline void require_gold(const FactAnnotation& a, const char* op) {
  if (a.gold_facts.empty()) {
    throw InputError(std::string(op) +
                     ": gold fact set is empty (score is undefined)");
  }
}

}  // namespace detail

/// Fact-capture score: tanh of (correct facts + disorder bonus) over the
/// gold fact count. The bonus is +2 fully correct, +1 partially correct,
/// -1 incorrect, 0 absent.
inline double mmfcm(const FactAnnotation& a) {
  detail::require_gold(a, "mmfcm");
  double correct =
      static_cast<double>(detail::intersection_size(a.gold_facts, a.generated_facts));
  switch (a.disorder_judgment) {
    case DisorderJudgment::FullyCorrect: correct += 2.0; break;
    case DisorderJudgment::PartiallyCorrect: correct += 1.0; break;
    case DisorderJudgment::Incorrect: correct -= 1.0; break;
    case DisorderJudgment::Absent: break;
  }
  return std::tanh(correct / static_cast<double>(a.gold_facts.size()));
}

/// Fraction of gold facts present in the generated summary.
inline double factual_recall(const FactAnnotation& a) {
  detail::require_gold(a, "factual_recall");
  double overlap =
      static_cast<double>(detail::intersection_size(a.gold_facts, a.generated_facts));
  return overlap / static_cast<double>(a.gold_facts.size());
}

struct OmissionHallucination {
  double omission_recall = 0.0;
  double hallucination_rate = 0.0;
};

/// Omission recall = missing gold facts / gold; hallucination rate =
/// generated facts outside the gold set / generated (0 when nothing was
/// generated: an empty summary invents nothing).
inline OmissionHallucination omission_and_hallucination(const FactAnnotation& a) {
  detail::require_gold(a, "omission_and_hallucination");
  const double overlap =
      static_cast<double>(detail::intersection_size(a.gold_facts, a.generated_facts));
  OmissionHallucination out;
  out.omission_recall =
      (static_cast<double>(a.gold_facts.size()) - overlap) /
      static_cast<double>(a.gold_facts.size());
  if (a.generated_facts.empty()) {
    out.hallucination_rate = 0.0;
  } else {
    out.hallucination_rate =
        (static_cast<double>(a.generated_facts.size()) - overlap) /
        static_cast<double>(a.generated_facts.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rating aggregation
// ---------------------------------------------------------------------------

inline const std::set<std::string>& known_criteria() {
  static const std::set<std::string> names = {
      "clinical_eval", "fluency", "adequacy", "informativeness",
      "persuasiveness"};
  return names;
}

/// 1-5 ratings pooled per criterion over samples and annotators.
struct HumanRatings {
  std::map<std::string, std::vector<int>> by_criterion;

  void add(const std::string& criterion, int rating) {
    if (!known_criteria().count(criterion)) {
      throw InputError("unknown rating criterion \"" + criterion + "\"");
    }
    if (rating < 1 || rating > 5) {
      throw InputError("ratings must be integers in 1..5 (got " +
                       std::to_string(rating) + ")");
    }
    by_criterion[criterion].push_back(rating);
  }
};

struct RatingAggregate {
  std::map<std::string, double> means;
  std::vector<std::string> skipped;  // criteria present but with no ratings
};

/// Arithmetic mean per criterion; criteria with zero ratings are excluded
/// and reported in `skipped`.
inline RatingAggregate aggregate_ratings(const HumanRatings& ratings) {
  RatingAggregate out;
  for (const auto& [criterion, values] : ratings.by_criterion) {
    if (values.empty()) {
      out.skipped.push_back(criterion);
      continue;
    }
    double sum = 0.0;
    for (int v : values) sum += v;
    out.means[criterion] = sum / static_cast<double>(values.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

/// Cohen's kappa over two equal-length label lists.
inline double cohen_kappa(const std::vector<std::string>& labels_a,
                          const std::vector<std::string>& labels_b) {
  if (labels_a.size() != labels_b.size()) {
    throw InputError("cohen_kappa: label lists must have equal length");
  }
  if (labels_a.empty()) {
    throw InputError("cohen_kappa: label lists must be non-empty");
  }
  const double n = static_cast<double>(labels_a.size());
  std::map<std::string, double> count_a, count_b;
  double agree = 0.0;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    ++count_a[labels_a[i]];
    ++count_b[labels_b[i]];
    if (labels_a[i] == labels_b[i]) agree += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, ca] : count_a) {
    auto it = count_b.find(label);
    if (it != count_b.end()) p_e += (ca / n) * (it->second / n);
  }
  if (1.0 - p_e < 1e-12) {
    if (p_o >= 1.0 - 1e-12) return 1.0;
    throw InputError(
        "cohen_kappa: degenerate marginals (chance agreement = 1) with "
        "observed disagreement");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

/// Mean pairwise Cohen's kappa over two or more annotators.
inline double multi_annotator_kappa(
    const std::vector<std::vector<std::string>>& label_lists) {
  if (label_lists.size() < 2) {
    throw InputError("multi_annotator_kappa: need at least 2 annotators");
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < label_lists.size(); ++i) {
    for (std::size_t j = i + 1; j < label_lists.size(); ++j) {
      sum += cohen_kappa(label_lists[i], label_lists[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Annotation file
// ---------------------------------------------------------------------------

/// One annotation line joined against a corpus id. `model` groups rows for
/// per-model reporting; `multimodal` marks whether the fact-capture score is
/// applicable (unimodal runs report it as NA).
struct AnnotationRecord {
  std::string id;
  std::string model = "model";
  bool multimodal = true;
  std::vector<std::string> gold_facts;
  std::vector<std::string> generated_facts;
  DisorderJudgment disorder_judgment = DisorderJudgment::Absent;
  std::map<std::string, std::vector<int>> ratings;
};

inline std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open annotation file: " + path);
  std::vector<AnnotationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed annotation: " + e.what());
    }
    try {
      AnnotationRecord r;
      r.id = j.at("id").get<std::string>();
      if (j.contains("model")) r.model = j["model"].get<std::string>();
      if (j.contains("multimodal")) r.multimodal = j["multimodal"].get<bool>();
      r.gold_facts = j.at("gold_facts").get<std::vector<std::string>>();
      r.generated_facts =
          j.at("generated_facts").get<std::vector<std::string>>();
      r.disorder_judgment = disorder_judgment_from_string(
          j.at("disorder_judgment").get<std::string>());
      if (j.contains("ratings")) {
        for (const auto& [criterion, values] : j["ratings"].items()) {
          if (!known_criteria().count(criterion)) {
            throw InputError("unknown rating criterion \"" + criterion + "\"");
          }
          r.ratings[criterion] = values.get<std::vector<int>>();
          for (int v : r.ratings[criterion]) {
            if (v < 1 || v > 5) {
              throw InputError("ratings must be integers in 1..5");
            }
          }
        }
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed annotation: " + e.what());
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace medsumm
