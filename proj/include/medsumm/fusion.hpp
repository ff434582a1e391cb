// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale executable model of the multimodal fusion architecture: a
// trainable linear projection carries the vision feature into the text
// embedding space as one prepended soft token, a frozen 4-bit-quantized
// single-layer causal decoder does next-token prediction, and low-rank
// adapters on the query/value projections plus the vision projection are the
// only trainable parameters. Training is plain full-batch gradient descent
// in 64-bit, which keeps finite-difference gradient checks exact.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "medsumm/core_data.hpp"
#include "medsumm/error.hpp"
#include "medsumm/matrix.hpp"
#include "medsumm/quant.hpp"
#include "medsumm/util.hpp"

namespace medsumm {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct FusionConfig {
  std::size_t vocab_size = 32;
  std::size_t text_dim = 16;     // d_t; 4096 at full scale
  std::size_t vision_dim = 8;    // d_v; 768 at full scale
  std::size_t context_len = 32;  // L
  std::size_t adapter_rank = 4;  // r
  double adapter_scale = 8.0;    // alpha; the adapter adds (alpha/r) * B * A
  std::size_t quant_block = 32;
  std::uint64_t seed = 0;
  bool multimodal = true;

  void validate() const {
    if (vocab_size < 1 || text_dim < 1 || vision_dim < 1 || context_len < 1 ||
        adapter_rank < 1 || quant_block < 1) {
      throw InputError("fusion config: all dimensions must be positive");
    }
    if (!(adapter_scale > 0.0)) {
      throw InputError("fusion config: adapter_scale must be positive");
    }
    if (adapter_rank > text_dim) {
      throw InputError("fusion config: adapter_rank must not exceed text_dim");
    }
  }
};

inline json fusion_config_to_json(const FusionConfig& c) {
  json j;
  j["vocab_size"] = c.vocab_size;
  j["text_dim"] = c.text_dim;
  j["vision_dim"] = c.vision_dim;
  j["context_len"] = c.context_len;
  j["adapter_rank"] = c.adapter_rank;
  j["adapter_scale"] = c.adapter_scale;
  j["quant_block"] = c.quant_block;
  j["seed"] = c.seed;
  j["multimodal"] = c.multimodal;
  return j;
}

inline FusionConfig fusion_config_from_json(const json& j) {
  FusionConfig c;
  if (j.contains("vocab_size")) c.vocab_size = j["vocab_size"].get<std::size_t>();
  if (j.contains("text_dim")) c.text_dim = j["text_dim"].get<std::size_t>();
  if (j.contains("vision_dim")) c.vision_dim = j["vision_dim"].get<std::size_t>();
  if (j.contains("context_len")) c.context_len = j["context_len"].get<std::size_t>();
  if (j.contains("adapter_rank")) c.adapter_rank = j["adapter_rank"].get<std::size_t>();
  if (j.contains("adapter_scale")) c.adapter_scale = j["adapter_scale"].get<double>();
  if (j.contains("quant_block")) c.quant_block = j["quant_block"].get<std::size_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("multimodal")) c.multimodal = j["multimodal"].get<bool>();
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// Trainable low-rank pair: W_eff = dequant(W) + (alpha/r) * up * down,
/// with `up` (B) zero-initialized so a fresh adapter is an exact no-op.
struct LowRankAdapter {
  Matrix down;  // r x d_t  (A, small random init)
  Matrix up;    // d_t x r  (B, zero init)
};

struct FusionModel {
  FusionConfig config;

  // Frozen base, stored quantized and never written after init.
  QuantizedTensor tok_embed;  // V x d_t
  QuantizedTensor pos_embed;  // L x d_t
  QuantizedTensor w_query;    // d_t x d_t
  QuantizedTensor w_key;      // d_t x d_t
  QuantizedTensor w_value;    // d_t x d_t
  QuantizedTensor w_out;      // d_t x d_t
  QuantizedTensor head;       // V x d_t

  // Trainable.
  Matrix vision_proj;  // d_t x d_v
  LowRankAdapter adapter_q;
  LowRankAdapter adapter_v;

  static FusionModel init(const FusionConfig& config) {
    config.validate();
    FusionModel m;
    m.config = config;
    Rng rng(config.seed);
    const double wscale = 1.0 / std::sqrt(static_cast<double>(config.text_dim));
    auto q = [&](std::size_t r, std::size_t c, double s) {
      return quantize(Matrix::random_gaussian(r, c, s, rng), config.quant_block);
    };
    m.tok_embed = q(config.vocab_size, config.text_dim, 0.5);
    m.pos_embed = q(config.context_len, config.text_dim, 0.5);
    m.w_query = q(config.text_dim, config.text_dim, wscale);
    m.w_key = q(config.text_dim, config.text_dim, wscale);
    m.w_value = q(config.text_dim, config.text_dim, wscale);
    m.w_out = q(config.text_dim, config.text_dim, wscale);
    m.head = q(config.vocab_size, config.text_dim, wscale);
    m.vision_proj = Matrix::random_gaussian(config.text_dim, config.vision_dim,
                                            wscale, rng);
    auto make_adapter = [&] {
      LowRankAdapter a;
      a.down = Matrix::random_gaussian(config.adapter_rank, config.text_dim,
                                       wscale, rng);
      a.up = Matrix::zeros(config.text_dim, config.adapter_rank);
      return a;
    };
    m.adapter_q = make_adapter();
    m.adapter_v = make_adapter();
    return m;
  }

  /// Serialized frozen tensors; bit-identical before and after training.
  std::string frozen_base_bytes() const {
    return tok_embed.to_bytes() + pos_embed.to_bytes() + w_query.to_bytes() +
           w_key.to_bytes() + w_value.to_bytes() + w_out.to_bytes() +
           head.to_bytes();
  }
};

namespace detail {

/// y = (dequant(W) + (alpha/r) * up * down) x; the adapter term is skipped
/// entirely when disabled so base logits are reproduced bit-for-bit.
inline Vec apply_effective(const QuantizedTensor& base, const LowRankAdapter& a,
                           double alpha_over_r, bool apply_adapter,
                           const Vec& x) {
  Vec y = quant_matvec(base, x);
  if (apply_adapter) {
    Vec u = a.down.matvec(x);
    Vec bu = a.up.matvec(u);
    axpy(alpha_over_r, bu, y);
  }
  return y;
}

/// y = (dequant(W) + (alpha/r) * up * down)^T x
inline Vec apply_effective_t(const QuantizedTensor& base, const LowRankAdapter& a,
                             double alpha_over_r, bool apply_adapter,
                             const Vec& x) {
  Vec y = quant_matvec_t(base, x);
  if (apply_adapter) {
    Vec bu = a.up.matvec_t(x);
    Vec du = a.down.matvec_t(bu);
    axpy(alpha_over_r, du, y);
  }
  return y;
}

inline Vec softmax_stable(const Vec& logits) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits) mx = std::max(mx, v);
  Vec p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace detail

/// Next-token probability distribution for one logit row.
inline Vec next_token_distribution(const Vec& logits) {
  return detail::softmax_stable(logits);
}

// ---------------------------------------------------------------------------
// Input encoding
// ---------------------------------------------------------------------------

/// Embedding sequence for one example. In multimodal mode the projected
/// vision feature occupies position 0 as a soft token; unimodal mode omits
/// the slot. Position embeddings are added to every slot.
inline std::vector<Vec> encode_inputs(const FusionModel& model,
                                      const std::optional<Vec>& vision_feature,
                                      const std::vector<int>& token_ids) {
  const FusionConfig& cfg = model.config;
  if (cfg.multimodal && !vision_feature) {
    throw InputError("encode_inputs: multimodal model requires a vision feature");
  }
  if (!cfg.multimodal && vision_feature) {
    throw InputError("encode_inputs: unimodal model does not accept a vision feature");
  }
  if (vision_feature && vision_feature->size() != cfg.vision_dim) {
    throw InputError("encode_inputs: vision feature length " +
                     std::to_string(vision_feature->size()) +
                     " does not match vision_dim " +
                     std::to_string(cfg.vision_dim));
  }
  const std::size_t slot = vision_feature ? 1 : 0;
  if (token_ids.size() + slot > cfg.context_len) {
    throw InputError("encode_inputs: sequence does not fit the context length");
  }
  std::vector<Vec> xs;
  xs.reserve(token_ids.size() + slot);
  if (vision_feature) {
    Vec x0 = model.vision_proj.matvec(*vision_feature);
    Vec pos0 = quant_row(model.pos_embed, 0);
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += pos0[i];
    xs.push_back(std::move(x0));
  }
  for (std::size_t k = 0; k < token_ids.size(); ++k) {
    int id = token_ids[k];
    if (id < 0 || static_cast<std::size_t>(id) >= cfg.vocab_size) {
      throw InputError("encode_inputs: token id " + std::to_string(id) +
                       " out of range");
    }
    Vec x = quant_row(model.tok_embed, static_cast<std::size_t>(id));
    Vec pos = quant_row(model.pos_embed, k + slot);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += pos[i];
    xs.push_back(std::move(x));
  }
  if (xs.empty()) {
    throw InputError("encode_inputs: empty input sequence");
  }
  return xs;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

namespace detail {

/// Everything the backward pass needs from one example's forward pass.
struct ForwardCache {
  std::vector<Vec> xs;      // T x d_t inputs
  std::vector<Vec> q, k, v; // T x d_t
  std::vector<Vec> attn;    // attn[t] has t+1 weights
  std::vector<Vec> ctx;     // T x d_t attention outputs (before w_out)
  std::vector<Vec> y;       // T x d_t residual stream
  std::vector<Vec> logits;  // T x V
};

inline ForwardCache forward_cached(const FusionModel& m, const std::vector<Vec>& xs,
                                   bool apply_adapters) {
  const double aor = m.config.adapter_scale /
                     static_cast<double>(m.config.adapter_rank);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(m.config.text_dim));
  const std::size_t T = xs.size();
  ForwardCache c;
  c.xs = xs;
  c.q.resize(T);
  c.k.resize(T);
  c.v.resize(T);
  c.attn.resize(T);
  c.ctx.resize(T);
  c.y.resize(T);
  c.logits.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    c.q[t] = apply_effective(m.w_query, m.adapter_q, aor, apply_adapters, xs[t]);
    c.k[t] = quant_matvec(m.w_key, xs[t]);
    c.v[t] = apply_effective(m.w_value, m.adapter_v, aor, apply_adapters, xs[t]);
  }
  for (std::size_t t = 0; t < T; ++t) {
    Vec scores(t + 1);
    for (std::size_t j = 0; j <= t; ++j) {
      scores[j] = dot(c.q[t], c.k[j]) * inv_sqrt_d;
    }
    c.attn[t] = softmax_stable(scores);
    Vec ctx(m.config.text_dim, 0.0);
    for (std::size_t j = 0; j <= t; ++j) axpy(c.attn[t][j], c.v[j], ctx);
    c.ctx[t] = std::move(ctx);
    Vec o = quant_matvec(m.w_out, c.ctx[t]);
    Vec y = xs[t];
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += o[i];
    c.logits[t] = quant_matvec(m.head, y);
    c.y[t] = std::move(y);
  }
  return c;
}

}  // namespace detail

/// Causal single-layer forward pass: logits for every sequence position.
/// `apply_adapters = false` reproduces the frozen quantized base exactly.
inline std::vector<Vec> forward(const FusionModel& model,
                                const std::vector<Vec>& inputs,
                                bool apply_adapters = true) {
  return detail::forward_cached(model, inputs, apply_adapters).logits;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// One next-token training example. `target_ids` has one entry per sequence
/// position (including the vision slot when present); -1 marks positions
/// that do not contribute to the loss.
struct TrainExample {
  std::optional<Vec> vision_feature;
  std::vector<int> input_ids;
  std::vector<int> target_ids;
};

/// Builds the standard shifted next-token example from a full token sequence
/// (which should already end with the end token): inputs are all tokens but
/// the last; every position, including the vision slot, predicts the next
/// token.
inline TrainExample make_next_token_example(std::optional<Vec> vision,
                                            const std::vector<int>& full_sequence) {
  if (full_sequence.size() < 2) {
    throw InputError("make_next_token_example: need at least 2 tokens");
  }
  TrainExample e;
  e.vision_feature = std::move(vision);
  e.input_ids.assign(full_sequence.begin(), full_sequence.end() - 1);
  if (e.vision_feature) {
    // Slot predicts the first token, each token predicts its successor.
    e.target_ids = full_sequence;
  } else {
    e.target_ids.assign(full_sequence.begin() + 1, full_sequence.end());
  }
  return e;
}

struct FusionGradients {
  Matrix vision_proj;
  Matrix adapter_q_down, adapter_q_up;
  Matrix adapter_v_down, adapter_v_up;

  static FusionGradients zeros_like(const FusionModel& m) {
    FusionGradients g;
    g.vision_proj = Matrix::zeros(m.vision_proj.rows, m.vision_proj.cols);
    g.adapter_q_down = Matrix::zeros(m.adapter_q.down.rows, m.adapter_q.down.cols);
    g.adapter_q_up = Matrix::zeros(m.adapter_q.up.rows, m.adapter_q.up.cols);
    g.adapter_v_down = Matrix::zeros(m.adapter_v.down.rows, m.adapter_v.down.cols);
    g.adapter_v_up = Matrix::zeros(m.adapter_v.up.rows, m.adapter_v.up.cols);
    return g;
  }
};

struct LossAndGradients {
  double loss = 0.0;
  std::size_t target_positions = 0;
  FusionGradients grads;
};

namespace detail {

inline void check_example(const FusionModel& m, const TrainExample& e) {
  const std::size_t slot = e.vision_feature ? 1 : 0;
  if (e.target_ids.size() != e.input_ids.size() + slot) {
    throw InputError(
        "train example: target_ids must cover every sequence position "
        "(inputs plus the vision slot)");
  }
  for (int t : e.target_ids) {
    if (t >= static_cast<int>(m.config.vocab_size)) {
      throw InputError("train example: target id out of range");
    }
  }
}

}  // namespace detail

/// Mean cross-entropy over all counted target positions in the batch, plus
/// gradients for the trainable parameters only. The frozen base is read,
/// never written.
inline LossAndGradients loss_and_gradients(const FusionModel& model,
                                           const std::vector<TrainExample>& batch,
                                           bool want_gradients = true) {
  if (batch.empty()) throw InputError("loss_and_gradients: empty batch");
  const double aor = model.config.adapter_scale /
                     static_cast<double>(model.config.adapter_rank);
  const double inv_sqrt_d =
      1.0 / std::sqrt(static_cast<double>(model.config.text_dim));

  // First pass: count target positions so the per-position gradient scale is
  // known up front.
  std::size_t count = 0;
  for (const auto& e : batch) {
    detail::check_example(model, e);
    for (int t : e.target_ids) {
      if (t >= 0) ++count;
    }
  }
  if (count == 0) {
    throw InputError("loss_and_gradients: batch has no target positions");
  }

  LossAndGradients out;
  out.target_positions = count;
  out.grads = FusionGradients::zeros_like(model);
  double loss_sum = 0.0;

  for (const auto& e : batch) {
    std::vector<Vec> xs = encode_inputs(model, e.vision_feature, e.input_ids);
    detail::ForwardCache c = detail::forward_cached(model, xs, true);
    const std::size_t T = xs.size();
    const std::size_t d = model.config.text_dim;

    // Loss and dlogits.
    std::vector<Vec> dlogits(T);
    bool any = false;
    for (std::size_t t = 0; t < T; ++t) {
      int target = e.target_ids[t];
      if (target < 0) continue;
      Vec p = detail::softmax_stable(c.logits[t]);
      loss_sum += -std::log(std::max(p[static_cast<std::size_t>(target)],
                                     1e-300));
      if (want_gradients) {
        for (double& v : p) v /= static_cast<double>(count);
        p[static_cast<std::size_t>(target)] -=
            1.0 / static_cast<double>(count);
        dlogits[t] = std::move(p);
        any = true;
      }
    }
    if (!want_gradients || !any) continue;

    // Backward. Phase A: through head, residual and attention weights.
    std::vector<Vec> dx(T, Vec(d, 0.0));
    std::vector<Vec> dq(T, Vec(d, 0.0));
    std::vector<Vec> dk(T, Vec(d, 0.0));
    std::vector<Vec> dv(T, Vec(d, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
      if (dlogits[t].empty()) continue;
      Vec dy = quant_matvec_t(model.head, dlogits[t]);
      axpy(1.0, dy, dx[t]);
      Vec dctx = quant_matvec_t(model.w_out, dy);
      // Softmax-weighted context backward.
      Vec da(t + 1);
      double inner = 0.0;
      for (std::size_t j = 0; j <= t; ++j) {
        da[j] = dot(dctx, c.v[j]);
        inner += c.attn[t][j] * da[j];
        axpy(c.attn[t][j], dctx, dv[j]);
      }
      for (std::size_t j = 0; j <= t; ++j) {
        double ds = c.attn[t][j] * (da[j] - inner) * inv_sqrt_d;
        axpy(ds, c.k[j], dq[t]);
        axpy(ds, c.q[t], dk[j]);
      }
    }
    // Phase B: through the projections into dx and the adapter gradients.
    for (std::size_t t = 0; t < T; ++t) {
      // Query path.
      {
        Vec u = model.adapter_q.down.matvec(c.xs[t]);       // r
        Vec bt = model.adapter_q.up.matvec_t(dq[t]);        // r
        out.grads.adapter_q_up.add_outer(dq[t], u, aor);
        out.grads.adapter_q_down.add_outer(bt, c.xs[t], aor);
        Vec back = detail::apply_effective_t(model.w_query, model.adapter_q,
                                             aor, true, dq[t]);
        axpy(1.0, back, dx[t]);
      }
      // Key path (frozen, still propagates into x).
      {
        Vec back = quant_matvec_t(model.w_key, dk[t]);
        axpy(1.0, back, dx[t]);
      }
      // Value path.
      {
        Vec u = model.adapter_v.down.matvec(c.xs[t]);
        Vec bt = model.adapter_v.up.matvec_t(dv[t]);
        out.grads.adapter_v_up.add_outer(dv[t], u, aor);
        out.grads.adapter_v_down.add_outer(bt, c.xs[t], aor);
        Vec back = detail::apply_effective_t(model.w_value, model.adapter_v,
                                             aor, true, dv[t]);
        axpy(1.0, back, dx[t]);
      }
    }
    // Phase C: vision projection.
    if (e.vision_feature) {
      out.grads.vision_proj.add_outer(dx[0], *e.vision_feature, 1.0);
    }
  }

  out.loss = loss_sum / static_cast<double>(count);
  return out;
}

/// One full-batch gradient-descent step on the trainable parameters.
/// Throws CheckError (with diagnostics) on a non-finite loss.
inline double train_step(FusionModel& model, const std::vector<TrainExample>& batch,
                         double learning_rate) {
  LossAndGradients lg = loss_and_gradients(model, batch, learning_rate != 0.0);
  if (!std::isfinite(lg.loss)) {
    std::ostringstream os;
    os << "train_step: non-finite loss " << lg.loss << " over "
       << lg.target_positions << " target positions";
    throw CheckError(os.str());
  }
  if (learning_rate != 0.0) {
    model.vision_proj.add_scaled(lg.grads.vision_proj, -learning_rate);
    model.adapter_q.down.add_scaled(lg.grads.adapter_q_down, -learning_rate);
    model.adapter_q.up.add_scaled(lg.grads.adapter_q_up, -learning_rate);
    model.adapter_v.down.add_scaled(lg.grads.adapter_v_down, -learning_rate);
    model.adapter_v.up.add_scaled(lg.grads.adapter_v_up, -learning_rate);
  }
  return lg.loss;
}

// ---------------------------------------------------------------------------
// Gradient check
// ---------------------------------------------------------------------------

/// Central-difference check of every trainable scalar. Returns the maximum
/// guarded relative error |analytic - numeric| / max(1, |analytic|, |numeric|).
inline double gradient_check(FusionModel& model,
                             const std::vector<TrainExample>& batch,
                             double h = 1e-4) {
  LossAndGradients lg = loss_and_gradients(model, batch, true);
  auto loss_only = [&] {
    return loss_and_gradients(model, batch, false).loss;
  };
  double max_rel = 0.0;
  auto check_matrix = [&](Matrix& param, const Matrix& grad) {
    for (std::size_t i = 0; i < param.data.size(); ++i) {
      const double saved = param.data[i];
      param.data[i] = saved + h;
      const double lp = loss_only();
      param.data[i] = saved - h;
      const double lm = loss_only();
      param.data[i] = saved;
      const double numeric = (lp - lm) / (2.0 * h);
      const double analytic = grad.data[i];
      const double rel = std::fabs(analytic - numeric) /
                         std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
      max_rel = std::max(max_rel, rel);
    }
  };
  check_matrix(model.vision_proj, lg.grads.vision_proj);
  check_matrix(model.adapter_q.down, lg.grads.adapter_q_down);
  check_matrix(model.adapter_q.up, lg.grads.adapter_q_up);
  check_matrix(model.adapter_v.down, lg.grads.adapter_v_down);
  check_matrix(model.adapter_v.up, lg.grads.adapter_v_up);
  return max_rel;
}

/// Gives the adapters non-trivial values so gradient checks exercise both
/// factors (a fresh zero-initialized `up` would hide down-factor errors).
inline void randomize_trainable(FusionModel& model, Rng& rng, double stddev = 0.2) {
  for (auto* m : {&model.vision_proj, &model.adapter_q.down, &model.adapter_q.up,
                  &model.adapter_v.down, &model.adapter_v.up}) {
    for (auto& x : m->data) x = stddev * rng.gaussian();
  }
}

// ---------------------------------------------------------------------------
// Vocabulary and generation
// ---------------------------------------------------------------------------

/// Whitespace-token vocabulary for the toy tasks. Token 0 is the end token.
struct Vocab {
  std::vector<std::string> words;
  std::unordered_map<std::string, int> index;

  static constexpr const char* kEnd = "<eos>";

  static Vocab make(std::vector<std::string> tokens) {
    Vocab v;
    v.words.push_back(kEnd);
    v.index.emplace(kEnd, 0);
    for (auto& t : tokens) {
      if (v.index.count(t)) continue;
      v.index.emplace(t, static_cast<int>(v.words.size()));
      v.words.push_back(std::move(t));
    }
    return v;
  }

  int end_id() const { return 0; }
  std::size_t size() const { return words.size(); }

  int id_of(const std::string& w) const {
    auto it = index.find(w);
    if (it == index.end()) {
      throw InputError("vocab: unknown token \"" + w + "\"");
    }
    return it->second;
  }

  std::vector<int> encode(const std::string& text) const {
    std::vector<int> ids;
    std::istringstream is(text);
    std::string w;
    while (is >> w) ids.push_back(id_of(w));
    return ids;
  }

  std::string decode(const std::vector<int>& ids) const {
    std::string out;
    for (int id : ids) {
      if (id == end_id()) break;
      if (id < 0 || static_cast<std::size_t>(id) >= words.size()) {
        throw InputError("vocab: id out of range");
      }
      if (!out.empty()) out.push_back(' ');
      out += words[static_cast<std::size_t>(id)];
    }
    return out;
  }
};

/// Serialization contract for the generation target Y = (symptom note T,
/// summary S).
inline std::string serialize_target(const std::string& symptom_note,
                                    const std::string& summary) {
  return "SYMPTOM: " + symptom_note + " | SUMMARY: " + summary;
}

/// Parses a raw decoded string back into its two parts. On contract
/// violation the output carries empty fields and the parse-failure flag.
inline GenerationOutput parse_generation(const std::string& raw) {
  GenerationOutput out;
  out.raw = raw;
  std::string s = collapse_ws(raw);
  const std::string sym_tag = "SYMPTOM:";
  const std::string sum_tag = "SUMMARY:";
  if (s.rfind(sym_tag, 0) != 0) {
    out.parse_failed = true;
    return out;
  }
  std::size_t bar = s.find(" | ");
  if (bar == std::string::npos) {
    out.parse_failed = true;
    return out;
  }
  std::string note = s.substr(sym_tag.size(), bar - sym_tag.size());
  std::string rest = s.substr(bar + 3);
  if (rest.rfind(sum_tag, 0) != 0) {
    out.parse_failed = true;
    return out;
  }
  std::string summary = rest.substr(sum_tag.size());
  auto trim = [](std::string& t) {
    while (!t.empty() && t.front() == ' ') t.erase(t.begin());
    while (!t.empty() && t.back() == ' ') t.pop_back();
  };
  trim(note);
  trim(summary);
  out.symptom_note = std::move(note);
  out.summary = std::move(summary);
  return out;
}

/// Greedy argmax decoding until the end token, max_len generated tokens, or
/// a full context. Deterministic.
inline std::vector<int> generate_ids(const FusionModel& model,
                                     const std::optional<Vec>& vision_feature,
                                     std::vector<int> prompt_ids,
                                     std::size_t max_len, int end_id = 0) {
  std::vector<int> generated;
  const std::size_t slot = (model.config.multimodal && vision_feature) ? 1 : 0;
  if (prompt_ids.empty() && slot == 0) {
    throw InputError("generate: unimodal generation needs a non-empty prompt");
  }
  for (std::size_t step = 0; step < max_len; ++step) {
    if (prompt_ids.size() + slot >= model.config.context_len) break;
    std::vector<Vec> xs = encode_inputs(model, vision_feature, prompt_ids);
    std::vector<Vec> logits = forward(model, xs, true);
    const Vec& last = logits.back();
    int best = 0;
    for (std::size_t i = 1; i < last.size(); ++i) {
      if (last[i] > last[static_cast<std::size_t>(best)]) {
        best = static_cast<int>(i);
      }
    }
    generated.push_back(best);
    if (best == end_id) break;
    prompt_ids.push_back(best);
  }
  return generated;
}

/// Greedy decoding straight to a parsed GenerationOutput.
inline GenerationOutput generate(const FusionModel& model, const Vocab& vocab,
                                 const std::optional<Vec>& vision_feature,
                                 const std::vector<int>& prompt_ids,
                                 std::size_t max_len) {
  if (max_len == 0) {
    GenerationOutput out;
    out.parse_failed = true;
    return out;
  }
  std::vector<int> ids = generate_ids(model, vision_feature, prompt_ids,
                                      max_len, vocab.end_id());
  std::vector<int> full = prompt_ids;
  full.insert(full.end(), ids.begin(), ids.end());
  return parse_generation(vocab.decode(full));
}

// ---------------------------------------------------------------------------
// Toy task fixture
// ---------------------------------------------------------------------------

/// A deterministic 16-sample training task: the vision feature encodes a
/// disorder class and a phrasing variant; the target is the serialized
/// (symptom, summary) pair for that class.
struct ToyTask {
  FusionConfig config;
  Vocab vocab;
  std::vector<TrainExample> examples;
  std::vector<std::string> target_texts;  // aligned with examples
};

inline ToyTask make_toy_task(std::uint64_t seed = 1) {
  const std::vector<std::string> disorders = {"rash", "swelling", "redness",
                                              "ulcers"};
  const std::vector<std::string> verbs = {"has", "reports", "shows", "notes"};
  ToyTask task;
  task.vocab = Vocab::make({"SYMPTOM:", "|", "SUMMARY:", "patient", "skin",
                            "has", "reports", "shows", "notes", "rash",
                            "swelling", "redness", "ulcers"});
  task.config.vocab_size = task.vocab.size();
  task.config.text_dim = 16;
  task.config.vision_dim = 8;
  task.config.context_len = 16;
  task.config.adapter_rank = 4;
  task.config.adapter_scale = 8.0;
  task.config.quant_block = 32;
  task.config.seed = seed;
  task.config.multimodal = true;
  for (std::size_t i = 0; i < 16; ++i) {
    const std::size_t cls = i % 4;
    const std::size_t variant = i / 4;
    Vec vision(task.config.vision_dim, 0.0);
    vision[cls] = 1.0;
    vision[4 + variant] = 1.0;
    std::string text = serialize_target(
        "skin " + disorders[cls],
        "patient " + verbs[variant] + " skin " + disorders[cls]);
    std::vector<int> full = task.vocab.encode(text);
    full.push_back(task.vocab.end_id());
    task.examples.push_back(make_next_token_example(vision, full));
    task.target_texts.push_back(std::move(text));
  }
  return task;
}

inline json toy_task_to_json(const ToyTask& t) {
  json j;
  j["config"] = fusion_config_to_json(t.config);
  j["vocab"] = t.vocab.words;
  json samples = json::array();
  for (std::size_t i = 0; i < t.examples.size(); ++i) {
    json s;
    if (t.examples[i].vision_feature) {
      s["vision"] = *t.examples[i].vision_feature;
    }
    s["input_ids"] = t.examples[i].input_ids;
    s["target_ids"] = t.examples[i].target_ids;
    s["text"] = t.target_texts[i];
    samples.push_back(std::move(s));
  }
  j["samples"] = std::move(samples);
  return j;
}

inline void write_toy_task(const ToyTask& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write task file: " + path);
  out << toy_task_to_json(t).dump(2) << '\n';
}

inline ToyTask load_toy_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open task file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed task file: " + std::string(e.what()));
  }
  ToyTask t;
  try {
    t.config = fusion_config_from_json(j.at("config"));
    auto words = j.at("vocab").get<std::vector<std::string>>();
    if (words.empty() || words.front() != Vocab::kEnd) {
      throw InputError("task vocab must start with " + std::string(Vocab::kEnd));
    }
    t.vocab = Vocab::make({words.begin() + 1, words.end()});
    for (const auto& s : j.at("samples")) {
      TrainExample e;
      if (s.contains("vision")) e.vision_feature = s["vision"].get<Vec>();
      e.input_ids = s.at("input_ids").get<std::vector<int>>();
      e.target_ids = s.at("target_ids").get<std::vector<int>>();
      t.examples.push_back(std::move(e));
      t.target_texts.push_back(s.contains("text") ? s["text"].get<std::string>()
                                                  : "");
    }
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed task file: " + std::string(e.what()));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace detail {

inline json quant_to_json(const QuantizedTensor& q) {
  json j;
  j["rows"] = q.rows;
  j["cols"] = q.cols;
  j["block"] = q.block;
  std::vector<int> codes(q.codes.begin(), q.codes.end());
  j["codes"] = codes;
  j["scales"] = q.scales;
  return j;
}

inline QuantizedTensor quant_from_json(const json& j) {
  QuantizedTensor q;
  q.rows = j.at("rows").get<std::size_t>();
  q.cols = j.at("cols").get<std::size_t>();
  q.block = j.at("block").get<std::size_t>();
  auto codes = j.at("codes").get<std::vector<int>>();
  q.codes.assign(codes.begin(), codes.end());
  q.scales = j.at("scales").get<std::vector<double>>();
  if (q.codes.size() != q.rows * q.cols ||
      q.scales.size() != (q.rows * q.cols + q.block - 1) / q.block) {
    throw InputError("checkpoint: quantized tensor shape mismatch");
  }
  return q;
}

inline json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["data"] = m.data;
  return j;
}

inline Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows * m.cols) {
    throw InputError("checkpoint: matrix shape mismatch");
  }
  m.data = std::move(data);
  return m;
}

}  // namespace detail

inline void save_model(const FusionModel& m, const std::string& path) {
  json j;
  j["config"] = fusion_config_to_json(m.config);
  j["tok_embed"] = detail::quant_to_json(m.tok_embed);
  j["pos_embed"] = detail::quant_to_json(m.pos_embed);
  j["w_query"] = detail::quant_to_json(m.w_query);
  j["w_key"] = detail::quant_to_json(m.w_key);
  j["w_value"] = detail::quant_to_json(m.w_value);
  j["w_out"] = detail::quant_to_json(m.w_out);
  j["head"] = detail::quant_to_json(m.head);
  j["vision_proj"] = detail::matrix_to_json(m.vision_proj);
  j["adapter_q_down"] = detail::matrix_to_json(m.adapter_q.down);
  j["adapter_q_up"] = detail::matrix_to_json(m.adapter_q.up);
  j["adapter_v_down"] = detail::matrix_to_json(m.adapter_v.down);
  j["adapter_v_up"] = detail::matrix_to_json(m.adapter_v.up);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write checkpoint: " + path);
  out << j.dump() << '\n';
}

inline FusionModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed checkpoint: " + std::string(e.what()));
  }
  FusionModel m;
  try {
    m.config = fusion_config_from_json(j.at("config"));
    m.tok_embed = detail::quant_from_json(j.at("tok_embed"));
    m.pos_embed = detail::quant_from_json(j.at("pos_embed"));
    m.w_query = detail::quant_from_json(j.at("w_query"));
    m.w_key = detail::quant_from_json(j.at("w_key"));
    m.w_value = detail::quant_from_json(j.at("w_value"));
    m.w_out = detail::quant_from_json(j.at("w_out"));
    m.head = detail::quant_from_json(j.at("head"));
    m.vision_proj = detail::matrix_from_json(j.at("vision_proj"));
    m.adapter_q.down = detail::matrix_from_json(j.at("adapter_q_down"));
    m.adapter_q.up = detail::matrix_from_json(j.at("adapter_q_up"));
    m.adapter_v.down = detail::matrix_from_json(j.at("adapter_v_down"));
    m.adapter_v.up = detail::matrix_from_json(j.at("adapter_v_up"));
  } catch (const json::exception& e) {
    throw InputError(path + ": malformed checkpoint: " + std::string(e.what()));
  }
  return m;
}

}  // namespace medsumm
