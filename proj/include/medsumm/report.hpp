// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Report assembly: run manifests with input digests, the automatic-metric
// table (columns R1 R2 RL B1 B2 B3 B4 BERTScore METEOR) and the fact-based
// human-evaluation table (Clinical-EvalScore, Factual Recall, Hallucination
// Rate, MMFCM Score). Reports are emitted twice: a human-readable text table
// and a machine-readable JSON document, both deterministic for a fixed
// manifest.

#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "medsumm/core_data.hpp"
#include "medsumm/embedding_metrics.hpp"
#include "medsumm/error.hpp"
#include "medsumm/factual_metrics.hpp"
#include "medsumm/lexical_metrics.hpp"
#include "medsumm/textnorm.hpp"
#include "medsumm/util.hpp"

namespace medsumm {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string command;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  std::string config_hash;                          // fnv1a over option JSON
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> digest
  std::string timestamp;                            // ISO-8601 UTC
};

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return "fnv1a:" + hex64(fnv1a(ss.str()));
}

inline std::string iso8601_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

/// `timestamp_override` (seconds since the epoch, >= 0) pins the manifest
/// timestamp so report bytes are reproducible; -1 uses the current time.
inline RunManifest make_manifest(const std::string& command,
                                 const std::vector<std::string>& input_paths,
                                 const json& options, std::uint64_t seed,
                                 long long timestamp_override = -1) {
  RunManifest m;
  m.command = command;
  m.seed = seed;
  m.config_hash = "fnv1a:" + hex64(fnv1a(options.dump()));
  for (const auto& p : input_paths) m.inputs.emplace_back(p, file_digest(p));
  std::time_t t = timestamp_override >= 0
                      ? static_cast<std::time_t>(timestamp_override)
                      : std::time(nullptr);
  m.timestamp = iso8601_utc(t);
  return m;
}

inline json manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  json inputs;
  for (const auto& [path, digest] : m.inputs) inputs[path] = digest;
  j["inputs"] = inputs;
  j["timestamp"] = m.timestamp;
  return j;
}

inline std::string manifest_header(const RunManifest& m) {
  std::ostringstream os;
  os << "# medsumm " << m.command << " v" << m.tool_version << '\n';
  os << "# seed: " << m.seed << '\n';
  os << "# config: " << m.config_hash << '\n';
  for (const auto& [path, digest] : m.inputs) {
    os << "# input: " << path << " " << digest << '\n';
  }
  os << "# timestamp: " << m.timestamp << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return std::string(buf);
}

/// Renders one aligned text table: first column left-aligned, the rest
/// right-aligned, two spaces between columns.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      if (c == 0) {
        os << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        os << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    os << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return os.str();
}

// ---------------------------------------------------------------------------
// Candidates file
// ---------------------------------------------------------------------------

/// Candidate summaries: one JSON object {id, summary} per line.
inline std::vector<std::pair<std::string, std::string>> load_candidates(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open candidates file: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      std::string id = j.at("id").get<std::string>();
      std::string summary = j.at("summary").get<std::string>();
      auto it = seen.find(id);
      if (it != seen.end()) {
        throw InputError(path + ": duplicate candidate id \"" + id +
                         "\" on lines " + std::to_string(it->second) + " and " +
                         std::to_string(lineno));
      }
      seen.emplace(id, lineno);
      out.emplace_back(std::move(id), std::move(summary));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed candidate: " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// eval-auto
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& eval_auto_columns() {
  static const std::vector<std::string> cols = {
      "R1", "R2", "RL", "B1", "B2", "B3", "B4", "BERTScore", "METEOR"};
  return cols;
}

struct EvalAutoRow {
  std::string id;
  // Column name -> value; BERTScore is absent when no embeddings were given.
  std::map<std::string, double> values;
};

struct EvalAutoReport {
  RunManifest manifest;
  bool percent = false;
  std::vector<EvalAutoRow> rows;
  std::map<std::string, double> means;  // per column; may lack BERTScore
  std::vector<std::string> unmatched_ids;
};

/// Scores candidates against golden summaries. Candidates are post-processed
/// (whitespace collapse + repeated-sentence removal) before scoring; ids
/// without a reference are listed and excluded from the means.
inline EvalAutoReport eval_auto(
    const std::vector<DatasetRecord>& references,
    const std::vector<std::pair<std::string, std::string>>& candidates,
    const std::unordered_map<std::string, EmbeddedText>* cand_embeddings,
    const std::unordered_map<std::string, EmbeddedText>* ref_embeddings) {
  std::unordered_map<std::string, const DatasetRecord*> by_id;
  for (const auto& r : references) by_id.emplace(r.id, &r);

  EvalAutoReport report;
  std::vector<std::optional<EvalAutoRow>> results(candidates.size());
  std::vector<std::string> unmatched(candidates.size());

  parallel_for(candidates.size(), [&](std::size_t i) {
    const auto& [id, raw_candidate] = candidates[i];
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      unmatched[i] = id;
      return;
    }
    const DatasetRecord& ref = *it->second;
    TokenSeq cand_toks = tokenize(postprocess_generation(raw_candidate));
    TokenSeq ref_toks = tokenize(ref.golden_summary);
    EvalAutoRow row;
    row.id = id;
    row.values["R1"] = rouge_n(cand_toks, ref_toks, 1).f1;
    row.values["R2"] = rouge_n(cand_toks, ref_toks, 2).f1;
    row.values["RL"] = rouge_l(cand_toks, ref_toks).f1;
    BleuScore b = bleu(cand_toks, ref_toks);
    row.values["B1"] = b.b1;
    row.values["B2"] = b.b2;
    row.values["B3"] = b.b3;
    row.values["B4"] = b.b4;
    row.values["METEOR"] = meteor(cand_toks, ref_toks);
    if (cand_embeddings && ref_embeddings) {
      auto ce = cand_embeddings->find(id);
      auto re = ref_embeddings->find(id);
      if (ce != cand_embeddings->end() && re != ref_embeddings->end()) {
        row.values["BERTScore"] = embedding_score(ce->second, re->second).f1;
      }
    }
    results[i] = std::move(row);
  });

  std::map<std::string, double> sums;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) {
      if (!unmatched[i].empty()) report.unmatched_ids.push_back(unmatched[i]);
      continue;
    }
    for (const auto& [col, v] : results[i]->values) {
      sums[col] += v;
      ++counts[col];
    }
    report.rows.push_back(std::move(*results[i]));
  }
  for (const auto& [col, total] : sums) {
    report.means[col] = total / static_cast<double>(counts[col]);
  }
  return report;
}

/// Percent mode multiplies by 100 with 2 decimals, except BERTScore which
/// stays a 2-decimal fraction (the customary rendering); fraction mode uses
/// 4 decimals everywhere.
inline std::string format_metric(double v, bool percent, const std::string& col) {
  if (!percent) return format_fixed(v, 4);
  if (col == "BERTScore") return format_fixed(v, 2);
  return format_fixed(100.0 * v, 2);
}

inline std::string eval_auto_table(const EvalAutoReport& r) {
  std::vector<std::string> header;
  header.push_back("id");
  for (const auto& c : eval_auto_columns()) header.push_back(c);
  std::vector<std::vector<std::string>> rows;
  auto emit_row = [&](const std::string& label,
                      const std::map<std::string, double>& values) {
    std::vector<std::string> row;
    row.push_back(label);
    for (const auto& c : eval_auto_columns()) {
      auto it = values.find(c);
      row.push_back(it == values.end() ? "NA"
                                       : format_metric(it->second, r.percent, c));
    }
    rows.push_back(std::move(row));
  };
  for (const auto& row : r.rows) emit_row(row.id, row.values);
  if (!r.rows.empty()) emit_row("MEAN", r.means);
  std::ostringstream os;
  os << manifest_header(r.manifest);
  os << render_table(header, rows);
  for (const auto& id : r.unmatched_ids) {
    os << "unmatched id (excluded from means): " << id << '\n';
  }
  return os.str();
}

inline json eval_auto_to_json(const EvalAutoReport& r) {
  json j;
  j["manifest"] = manifest_to_json(r.manifest);
  j["percent"] = r.percent;
  j["columns"] = eval_auto_columns();
  json rows = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["id"] = row.id;
    for (const auto& c : eval_auto_columns()) {
      auto it = row.values.find(c);
      rj[c] = it == row.values.end() ? json(nullptr) : json(it->second);
    }
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  json means;
  for (const auto& c : eval_auto_columns()) {
    auto it = r.means.find(c);
    means[c] = it == r.means.end() ? json(nullptr) : json(it->second);
  }
  j["mean"] = std::move(means);
  j["unmatched_ids"] = r.unmatched_ids;
  return j;
}

// ---------------------------------------------------------------------------
// eval-facts
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& eval_facts_columns() {
  static const std::vector<std::string> cols = {
      "Clinical-EvalScore", "Factual Recall", "Hallucination Rate",
      "MMFCM Score"};
  return cols;
}

struct EvalFactsRow {
  std::string model;
  std::optional<double> clinical;
  std::optional<double> factual_recall;
  std::optional<double> hallucination_rate;
  std::optional<double> mmfcm;  // absent for unimodal rows (rendered NA)
  // All rating criteria, not just the clinical column; JSON report only.
  std::map<std::string, double> rating_means;
};

struct EvalFactsReport {
  RunManifest manifest;
  std::vector<EvalFactsRow> rows;
  std::vector<std::string> errors;  // per-record problems, e.g. empty gold set
  std::size_t excluded_count = 0;
};

/// Per-model means of the human-evaluation battery. Records with an empty
/// gold fact set are reported as error lines and excluded; models with no
/// multimodal records get NA in the MMFCM column.
inline EvalFactsReport eval_facts(const std::vector<AnnotationRecord>& annotations) {
  if (annotations.empty()) {
    throw InputError("eval-facts: annotation file has no records");
  }
  struct Accum {
    HumanRatings ratings;
    double recall_sum = 0.0;
    double halluc_sum = 0.0;
    std::size_t fact_count = 0;
    double mmfcm_sum = 0.0;
    std::size_t mmfcm_count = 0;
    bool any_multimodal = false;
  };
  std::vector<std::string> model_order;
  std::map<std::string, Accum> by_model;
  EvalFactsReport report;
  for (const auto& a : annotations) {
    if (!by_model.count(a.model)) model_order.push_back(a.model);
    Accum& acc = by_model[a.model];
    acc.any_multimodal = acc.any_multimodal || a.multimodal;
    if (a.gold_facts.empty()) {
      report.errors.push_back("record \"" + a.id +
                              "\": empty gold fact set, excluded");
      ++report.excluded_count;
      continue;
    }
    for (const auto& [criterion, values] : a.ratings) {
      for (int v : values) acc.ratings.add(criterion, v);
    }
    FactAnnotation fa =
        FactAnnotation::make(a.gold_facts, a.generated_facts, a.disorder_judgment);
    acc.recall_sum += factual_recall(fa);
    acc.halluc_sum += omission_and_hallucination(fa).hallucination_rate;
    ++acc.fact_count;
    if (a.multimodal) {
      acc.mmfcm_sum += mmfcm(fa);
      ++acc.mmfcm_count;
    }
  }
  for (const auto& model : model_order) {
    const Accum& acc = by_model[model];
    EvalFactsRow row;
    row.model = model;
    row.rating_means = aggregate_ratings(acc.ratings).means;
    auto clinical = row.rating_means.find("clinical_eval");
    if (clinical != row.rating_means.end()) row.clinical = clinical->second;
    if (acc.fact_count > 0) {
      row.factual_recall = acc.recall_sum / static_cast<double>(acc.fact_count);
      row.hallucination_rate =
          acc.halluc_sum / static_cast<double>(acc.fact_count);
    }
    if (acc.any_multimodal && acc.mmfcm_count > 0) {
      row.mmfcm = acc.mmfcm_sum / static_cast<double>(acc.mmfcm_count);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::string eval_facts_table(const EvalFactsReport& r) {
  std::vector<std::string> header;
  header.push_back("Model");
  for (const auto& c : eval_facts_columns()) header.push_back(c);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : r.rows) {
    auto cell = [](const std::optional<double>& v) {
      return v ? format_fixed(*v, 2) : std::string("NA");
    };
    rows.push_back({row.model, cell(row.clinical), cell(row.factual_recall),
                    cell(row.hallucination_rate), cell(row.mmfcm)});
  }
  std::ostringstream os;
  os << manifest_header(r.manifest);
  os << render_table(header, rows);
  for (const auto& e : r.errors) os << "error: " << e << '\n';
  if (r.excluded_count > 0) {
    os << "excluded records: " << r.excluded_count << '\n';
  }
  return os.str();
}

inline json eval_facts_to_json(const EvalFactsReport& r) {
  json j;
  j["manifest"] = manifest_to_json(r.manifest);
  j["columns"] = eval_facts_columns();
  json rows = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["Model"] = row.model;
    auto put = [&rj](const std::string& key, const std::optional<double>& v) {
      rj[key] = v ? json(*v) : json(nullptr);
    };
    put("Clinical-EvalScore", row.clinical);
    put("Factual Recall", row.factual_recall);
    put("Hallucination Rate", row.hallucination_rate);
    put("MMFCM Score", row.mmfcm);
    json means;
    for (const auto& [criterion, mean] : row.rating_means) means[criterion] = mean;
    rj["rating_means"] = std::move(means);
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  j["errors"] = r.errors;
  j["excluded_count"] = r.excluded_count;
  return j;
}

}  // namespace medsumm
