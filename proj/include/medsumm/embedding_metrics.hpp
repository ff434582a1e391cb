// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// BERTScore-style greedy cosine matching over externally supplied per-token
// embeddings. The encoder itself is out of scope; embeddings arrive as data.

#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "medsumm/error.hpp"
#include "medsumm/lexical_metrics.hpp"

namespace medsumm {

/// Token strings paired with equal-dimension embedding vectors.
struct EmbeddedText {
  std::vector<std::string> tokens;
  std::vector<std::vector<double>> vectors;

  std::size_t size() const { return tokens.size(); }

  /// Enforces the type invariants: aligned lengths, one shared dimension,
  /// strictly positive norms.
  void validate() const {
    if (tokens.size() != vectors.size()) {
      throw InputError("embedded text: tokens and vectors must align 1:1");
    }
    if (vectors.empty()) return;
    std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
      if (v.size() != dim) {
        throw InputError("embedded text: inconsistent embedding dimensions");
      }
      double norm2 = 0.0;
      for (double x : v) norm2 += x * x;
      if (!(norm2 > 0.0)) {
        throw InputError("embedded text: zero-norm embedding vector");
      }
    }
  }
};

/// Greedy max-cosine matching: precision averages row maxima over candidate
/// tokens, recall averages column maxima over reference tokens.
inline PrecisionRecallF embedding_score(const EmbeddedText& candidate,
                                        const EmbeddedText& reference) {
  if (candidate.size() == 0 || reference.size() == 0) {
    throw InputError("embedding_score: both sides must be non-empty");
  }
  candidate.validate();
  reference.validate();
  if (candidate.vectors.front().size() != reference.vectors.front().size()) {
    throw InputError("embedding_score: embedding dimension mismatch");
  }
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  std::vector<double> cand_norm(candidate.size()), ref_norm(reference.size());
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    cand_norm[i] = norm(candidate.vectors[i]);
  }
  for (std::size_t j = 0; j < reference.size(); ++j) {
    ref_norm[j] = norm(reference.vectors[j]);
  }
  std::vector<double> row_max(candidate.size(), -1.0);
  std::vector<double> col_max(reference.size(), -1.0);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      double dot = 0.0;
      const auto& u = candidate.vectors[i];
      const auto& v = reference.vectors[j];
      for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * v[k];
      double sim = dot / (cand_norm[i] * ref_norm[j]);
      row_max[i] = std::max(row_max[i], sim);
      col_max[j] = std::max(col_max[j], sim);
    }
  }
  double p = 0.0, r = 0.0;
  for (double m : row_max) p += m;
  for (double m : col_max) r += m;
  p /= static_cast<double>(candidate.size());
  r /= static_cast<double>(reference.size());
  PrecisionRecallF out;
  out.precision = p;
  out.recall = r;
  out.f1 = (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
  return out;
}

/// Embedding file: one JSON object {id, tokens, vectors} per line; ids join
/// against corpus record ids.
inline std::unordered_map<std::string, EmbeddedText> load_embeddings(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file: " + path);
  std::unordered_map<std::string, EmbeddedText> out;
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
                       ": malformed embedding record: " + e.what());
    }
    try {
      std::string id = j.at("id").get<std::string>();
      EmbeddedText e;
      e.tokens = j.at("tokens").get<std::vector<std::string>>();
      e.vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
      e.validate();
      if (!out.emplace(std::move(id), std::move(e)).second) {
        throw InputError("duplicate id");
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": malformed embedding record: " + e.what());
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace medsumm
