// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// medsumm: command-line front door. Subcommands: curate, split, eval-auto,
// eval-facts, cmi, kappa, fusion-demo. Every command emits a human-readable
// table (stdout or --table-out) and, with --out, a machine-readable JSON
// report; both embed the run manifest. Exit codes: 0 success, 2 input error,
// 3 internal check failure, 1 unexpected error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "medsumm/codemix.hpp"
#include "medsumm/core_data.hpp"
#include "medsumm/curation.hpp"
#include "medsumm/error.hpp"
#include "medsumm/factual_metrics.hpp"
#include "medsumm/fusion.hpp"
#include "medsumm/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitInput = 2;
constexpr int kExitCheck = 3;

using medsumm::json;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw medsumm::InputError("cannot write file: " + path);
  out << content;
}

void emit(const std::string& table, const json& report,
          const std::string& table_out, const std::string& json_out) {
  if (table_out.empty()) {
    std::cout << table;
  } else {
    write_text_file(table_out, table);
  }
  if (!json_out.empty()) {
    write_text_file(json_out, report.dump(2) + "\n");
  }
}

std::array<double, 3> parse_ratios(const std::string& s) {
  std::array<double, 3> out{};
  std::istringstream is(s);
  std::string part;
  std::size_t i = 0;
  while (std::getline(is, part, ',')) {
    if (i >= 3) throw medsumm::InputError("--ratios expects three comma-separated values");
    try {
      out[i] = std::stod(part);
    } catch (const std::exception&) {
      throw medsumm::InputError("--ratios: cannot parse \"" + part + "\"");
    }
    ++i;
  }
  if (i != 3) throw medsumm::InputError("--ratios expects three comma-separated values");
  return out;
}

// ---------------------------------------------------------------------------
// curate
// ---------------------------------------------------------------------------

struct CurateArgs {
  std::string corpus, taxonomy, out, json_out, table_out;
  std::string require_in = "either";
  std::string cue_template = medsumm::default_cue_template();
  bool inject_cue = false;
  std::uint64_t seed = 0;
  long long timestamp = -1;
};

void run_curate(const CurateArgs& a) {
  auto records = medsumm::load_corpus(a.corpus);
  auto taxonomy = medsumm::load_taxonomy(a.taxonomy);
  auto trie = medsumm::build_trie(taxonomy);
  auto deduped = medsumm::dedup(records);
  auto filtered = medsumm::filter_corpus(deduped.kept, trie,
                                         medsumm::require_in_from_string(a.require_in));
  std::size_t injected = 0, cue_skipped = 0;
  if (a.inject_cue) {
    for (auto& r : filtered.kept) {
      if (r.disorder_phrase && r.image_ref) {
        r = medsumm::inject_visual_cue(r, a.cue_template);
        ++injected;
      } else {
        ++cue_skipped;
      }
    }
  }
  medsumm::write_corpus(filtered.kept, a.out);

  json options;
  options["require_in"] = a.require_in;
  options["inject_cue"] = a.inject_cue;
  options["cue_template"] = a.cue_template;
  auto manifest = medsumm::make_manifest("curate", {a.corpus, a.taxonomy},
                                         options, a.seed, a.timestamp);

  json report;
  report["manifest"] = medsumm::manifest_to_json(manifest);
  report["input_records"] = records.size();
  report["removed_duplicates"] = deduped.removed_count;
  report["kept"] = filtered.kept.size();
  json hist;
  for (auto cat : medsumm::all_categories()) {
    auto it = filtered.histogram.find(cat);
    hist[medsumm::to_string(cat)] = it == filtered.histogram.end() ? 0 : it->second;
  }
  report["histogram"] = hist;
  report["injected_cues"] = injected;
  report["cue_skipped"] = cue_skipped;
  report["output"] = a.out;

  std::vector<std::vector<std::string>> rows;
  for (auto cat : medsumm::all_categories()) {
    auto it = filtered.histogram.find(cat);
    rows.push_back({medsumm::to_string(cat),
                    std::to_string(it == filtered.histogram.end() ? 0 : it->second)});
  }
  std::ostringstream table;
  table << medsumm::manifest_header(manifest);
  table << medsumm::render_table({"category", "records"}, rows);
  table << "input records: " << records.size() << '\n';
  table << "removed duplicates: " << deduped.removed_count << '\n';
  table << "kept: " << filtered.kept.size() << '\n';
  if (a.inject_cue) {
    table << "injected cues: " << injected << " (skipped " << cue_skipped
          << " without disorder/image)" << '\n';
  }
  emit(table.str(), report, a.table_out, a.json_out);
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

struct SplitArgs {
  std::string corpus, out, json_out, table_out;
  std::string ratios = "0.8,0.05,0.15";
  bool stratify = false;
  std::uint64_t seed = 0;
  long long timestamp = -1;
};

void run_split(const SplitArgs& a) {
  auto records = medsumm::load_corpus(a.corpus);
  auto ratios = parse_ratios(a.ratios);
  auto split = medsumm::split(records, ratios, a.seed, a.stratify);
  if (!a.out.empty()) medsumm::write_split(split, a.out);

  json options;
  options["ratios"] = ratios;
  options["stratify"] = a.stratify;
  auto manifest =
      medsumm::make_manifest("split", {a.corpus}, options, a.seed, a.timestamp);
  json report;
  report["manifest"] = medsumm::manifest_to_json(manifest);
  report["total"] = records.size();
  report["train"] = split.train_ids.size();
  report["val"] = split.val_ids.size();
  report["test"] = split.test_ids.size();

  std::ostringstream table;
  table << medsumm::manifest_header(manifest);
  table << medsumm::render_table(
      {"split", "records"},
      {{"train", std::to_string(split.train_ids.size())},
       {"val", std::to_string(split.val_ids.size())},
       {"test", std::to_string(split.test_ids.size())}});
  table << "total: " << records.size() << '\n';
  emit(table.str(), report, a.table_out, a.json_out);
}

// ---------------------------------------------------------------------------
// eval-auto
// ---------------------------------------------------------------------------

struct EvalAutoArgs {
  std::string refs, cands, cand_embeddings, ref_embeddings;
  std::string json_out, table_out;
  bool percent = false;
  std::uint64_t seed = 0;
  long long timestamp = -1;
};

void run_eval_auto(const EvalAutoArgs& a) {
  auto references = medsumm::load_corpus(a.refs);
  auto candidates = medsumm::load_candidates(a.cands);
  std::unordered_map<std::string, medsumm::EmbeddedText> cand_emb, ref_emb;
  bool with_embeddings = !a.cand_embeddings.empty() || !a.ref_embeddings.empty();
  if (with_embeddings) {
    if (a.cand_embeddings.empty() || a.ref_embeddings.empty()) {
      throw medsumm::InputError(
          "--cand-embeddings and --ref-embeddings must be given together");
    }
    cand_emb = medsumm::load_embeddings(a.cand_embeddings);
    ref_emb = medsumm::load_embeddings(a.ref_embeddings);
  }
  auto report = medsumm::eval_auto(references, candidates,
                                   with_embeddings ? &cand_emb : nullptr,
                                   with_embeddings ? &ref_emb : nullptr);
  report.percent = a.percent;

  json options;
  options["percent"] = a.percent;
  std::vector<std::string> inputs = {a.refs, a.cands};
  if (with_embeddings) {
    inputs.push_back(a.cand_embeddings);
    inputs.push_back(a.ref_embeddings);
  }
  report.manifest =
      medsumm::make_manifest("eval-auto", inputs, options, a.seed, a.timestamp);
  emit(medsumm::eval_auto_table(report), medsumm::eval_auto_to_json(report),
       a.table_out, a.json_out);
}

// ---------------------------------------------------------------------------
// eval-facts
// ---------------------------------------------------------------------------

struct EvalFactsArgs {
  std::string annotations, json_out, table_out;
  std::uint64_t seed = 0;
  long long timestamp = -1;
};

void run_eval_facts(const EvalFactsArgs& a) {
  auto annotations = medsumm::load_annotations(a.annotations);
  auto report = medsumm::eval_facts(annotations);
  report.manifest = medsumm::make_manifest("eval-facts", {a.annotations},
                                           json::object(), a.seed, a.timestamp);
  emit(medsumm::eval_facts_table(report), medsumm::eval_facts_to_json(report),
       a.table_out, a.json_out);
}

// ---------------------------------------------------------------------------
// cmi
// ---------------------------------------------------------------------------

struct CmiArgs {
  std::string corpus, lexicon1, lexicon2, json_out, table_out;
  std::string policy = "independent";
  std::uint64_t seed = 0;
  long long timestamp = -1;
};

void run_cmi(const CmiArgs& a) {
  auto records = medsumm::load_corpus(a.corpus);
  medsumm::Lexicons lex;
  lex.lang1_words = medsumm::load_lexicon(a.lexicon1);
  lex.lang2_words = medsumm::load_lexicon(a.lexicon2);
  auto policy = medsumm::ambiguity_policy_from_string(a.policy);
  std::vector<medsumm::TokenSeq> token_seqs;
  token_seqs.reserve(records.size());
  for (const auto& r : records) {
    token_seqs.push_back(medsumm::tokenize(r.query_codemixed));
  }
  auto result = medsumm::corpus_cmi(token_seqs, lex, policy);

  json options;
  options["ambiguity_policy"] = a.policy;
  auto manifest = medsumm::make_manifest(
      "cmi", {a.corpus, a.lexicon1, a.lexicon2}, options, a.seed, a.timestamp);
  json report;
  report["manifest"] = medsumm::manifest_to_json(manifest);
  json per_record = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < result.per_record.size(); ++i) {
    const auto& rec = records[result.scored_indices[i]];
    json rj;
    rj["id"] = rec.id;
    rj["cmi"] = result.per_record[i];
    per_record.push_back(std::move(rj));
    rows.push_back({rec.id, medsumm::format_fixed(result.per_record[i], 2)});
  }
  report["per_record"] = std::move(per_record);
  report["mean_cmi"] = result.mean;
  report["skipped_empty"] = result.skipped_empty;

  std::ostringstream table;
  table << medsumm::manifest_header(manifest);
  table << medsumm::render_table({"id", "CMI"}, rows);
  table << "mean CMI: " << medsumm::format_fixed(result.mean, 2) << '\n';
  if (result.skipped_empty > 0) {
    table << "skipped empty records: " << result.skipped_empty << '\n';
  }
  emit(table.str(), report, a.table_out, a.json_out);
}

// ---------------------------------------------------------------------------
// kappa
// ---------------------------------------------------------------------------

struct KappaArgs {
  std::string labels, json_out, table_out;
  std::uint64_t seed = 0;
  long long timestamp = -1;
};

void run_kappa(const KappaArgs& a) {
  std::ifstream in(a.labels);
  if (!in) throw medsumm::InputError("cannot open labels file: " + a.labels);
  std::vector<std::string> annotators;
  std::vector<std::vector<std::string>> lists;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      annotators.push_back(j.at("annotator").get<std::string>());
      lists.push_back(j.at("labels").get<std::vector<std::string>>());
    } catch (const nlohmann::json::exception& e) {
      throw medsumm::InputError(a.labels + ":" + std::to_string(lineno) +
                                ": malformed labels record: " + e.what());
    }
  }
  double mean = medsumm::multi_annotator_kappa(lists);

  auto manifest = medsumm::make_manifest("kappa", {a.labels}, json::object(),
                                         a.seed, a.timestamp);
  json report;
  report["manifest"] = medsumm::manifest_to_json(manifest);
  json pairs = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (std::size_t j = i + 1; j < lists.size(); ++j) {
      double k = medsumm::cohen_kappa(lists[i], lists[j]);
      json pj;
      pj["a"] = annotators[i];
      pj["b"] = annotators[j];
      pj["kappa"] = k;
      pairs.push_back(std::move(pj));
      rows.push_back({annotators[i] + " vs " + annotators[j],
                      medsumm::format_fixed(k, 4)});
    }
  }
  report["pairs"] = std::move(pairs);
  report["mean_kappa"] = mean;

  std::ostringstream table;
  table << medsumm::manifest_header(manifest);
  table << medsumm::render_table({"pair", "kappa"}, rows);
  table << "mean kappa: " << medsumm::format_fixed(mean, 4) << '\n';
  emit(table.str(), report, a.table_out, a.json_out);
}

// ---------------------------------------------------------------------------
// fusion-demo
// ---------------------------------------------------------------------------

struct FusionDemoArgs {
  std::string task, config, checkpoint_out, json_out, table_out;
  std::size_t steps = 200;
  double lr = 0.0;  // 0 means use the built-in default
  std::uint64_t seed = 1;
  long long timestamp = -1;
};

void run_fusion_demo(const FusionDemoArgs& a) {
  // Gradient check on a tiny configuration.
  medsumm::FusionConfig tiny;
  tiny.vocab_size = 6;
  tiny.text_dim = 6;
  tiny.vision_dim = 3;
  tiny.context_len = 8;
  tiny.adapter_rank = 2;
  tiny.adapter_scale = 4.0;
  tiny.quant_block = 4;
  tiny.seed = a.seed;
  auto tiny_model = medsumm::FusionModel::init(tiny);
  medsumm::Rng grad_rng(a.seed + 17);
  medsumm::randomize_trainable(tiny_model, grad_rng);
  std::vector<medsumm::TrainExample> tiny_batch;
  tiny_batch.push_back(medsumm::make_next_token_example(
      medsumm::Vec{0.5, -1.0, 0.25}, {1, 3, 2, 4, 0}));
  tiny_batch.push_back(medsumm::make_next_token_example(
      medsumm::Vec{-0.75, 0.5, 1.0}, {2, 2, 5, 0}));
  double max_rel = medsumm::gradient_check(tiny_model, tiny_batch, 1e-4);
  bool grad_ok = max_rel < 1e-3;

  // Toy training run.
  medsumm::ToyTask task =
      a.task.empty() ? medsumm::make_toy_task(a.seed) : medsumm::load_toy_task(a.task);
  if (!a.config.empty()) {
    std::ifstream cfg_in(a.config);
    if (!cfg_in) throw medsumm::InputError("cannot open config file: " + a.config);
    json cj;
    try {
      cfg_in >> cj;
    } catch (const json::exception& e) {
      throw medsumm::InputError(a.config + ": malformed config: " +
                                std::string(e.what()));
    }
    auto cfg = medsumm::fusion_config_from_json(cj);
    if (cfg.vocab_size != task.vocab.size()) {
      throw medsumm::InputError(
          "config vocab_size does not match the task vocabulary");
    }
    task.config = cfg;
  }
  task.config.seed = a.seed;
  const double lr = a.lr > 0.0 ? a.lr : 0.3;
  auto model = medsumm::FusionModel::init(task.config);
  std::string frozen_before = model.frozen_base_bytes();
  double initial_loss = medsumm::train_step(model, task.examples, 0.0);
  double final_loss = initial_loss;
  for (std::size_t s = 0; s < a.steps; ++s) {
    final_loss = medsumm::train_step(model, task.examples, lr);
  }
  bool frozen_ok = model.frozen_base_bytes() == frozen_before;
  double ratio = initial_loss > 0.0 ? final_loss / initial_loss : 0.0;
  bool loss_ok = ratio < 0.5;

  medsumm::GenerationOutput sample;
  if (!task.examples.empty()) {
    sample = medsumm::generate(model, task.vocab,
                               task.examples.front().vision_feature, {}, 32);
  }
  if (!a.checkpoint_out.empty()) medsumm::save_model(model, a.checkpoint_out);

  json options;
  options["steps"] = a.steps;
  options["lr"] = lr;
  options["task"] = a.task.empty() ? "<built-in>" : a.task;
  std::vector<std::string> inputs;
  if (!a.task.empty()) inputs.push_back(a.task);
  if (!a.config.empty()) inputs.push_back(a.config);
  auto manifest =
      medsumm::make_manifest("fusion-demo", inputs, options, a.seed, a.timestamp);
  json report;
  report["manifest"] = medsumm::manifest_to_json(manifest);
  report["gradient_check_max_rel_error"] = max_rel;
  report["gradient_check"] = grad_ok ? "PASS" : "FAIL";
  report["initial_loss"] = initial_loss;
  report["final_loss"] = final_loss;
  report["loss_ratio"] = ratio;
  report["loss_check"] = loss_ok ? "PASS" : "FAIL";
  report["frozen_base_intact"] = frozen_ok;
  report["sample_generation"] = sample.raw;
  report["sample_parse_failed"] = sample.parse_failed;

  std::ostringstream table;
  table << medsumm::manifest_header(manifest);
  table << "gradient check: " << (grad_ok ? "PASS" : "FAIL")
        << " (max relative error " << max_rel << ")\n";
  table << "initial loss: " << medsumm::format_fixed(initial_loss, 6) << '\n';
  table << "final loss:   " << medsumm::format_fixed(final_loss, 6) << '\n';
  table << "loss ratio:   " << medsumm::format_fixed(ratio, 4) << " ("
        << (loss_ok ? "PASS" : "FAIL") << ", threshold 0.5)\n";
  table << "frozen base intact: " << (frozen_ok ? "yes" : "NO") << '\n';
  table << "sample generation: " << sample.raw << '\n';
  emit(table.str(), report, a.table_out, a.json_out);

  if (!grad_ok || !loss_ok || !frozen_ok) {
    throw medsumm::CheckError("fusion-demo self-checks failed");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medsumm-kit: metrics and curation toolkit for multimodal "
               "code-mixed medical question summarization"};
  app.require_subcommand(1);

  CurateArgs curate;
  auto* c = app.add_subcommand("curate", "Dedup and filter a corpus by symptom taxonomy");
  c->add_option("--corpus", curate.corpus, "Corpus file (JSON lines)")->required();
  c->add_option("--taxonomy", curate.taxonomy, "Taxonomy file (JSON)")->required();
  c->add_option("--require-in", curate.require_in,
                "Where a term must appear: query, summary, either, both");
  c->add_flag("--inject-cue", curate.inject_cue, "Append the visual-cue sentence");
  c->add_option("--cue-template", curate.cue_template,
                "Cue template; {disorder} is substituted");
  c->add_option("--out", curate.out, "Filtered corpus output path")->required();
  c->add_option("--report", curate.json_out, "JSON report path");
  c->add_option("--table-out", curate.table_out, "Write the text table here instead of stdout");
  c->add_option("--seed", curate.seed, "Run seed (recorded in the manifest)");
  c->add_option("--timestamp", curate.timestamp, "Fixed manifest timestamp (epoch seconds)");
  c->callback([&] { run_curate(curate); });

  SplitArgs split_args;
  auto* s = app.add_subcommand("split", "Deterministic train/val/test split");
  s->add_option("--corpus", split_args.corpus, "Corpus file")->required();
  s->add_option("--ratios", split_args.ratios, "train,val,test (default 0.8,0.05,0.15)");
  s->add_flag("--stratify", split_args.stratify, "Stratify by category");
  s->add_option("--out", split_args.out, "Split file output path");
  s->add_option("--report", split_args.json_out, "JSON report path");
  s->add_option("--table-out", split_args.table_out, "Write the text table here");
  s->add_option("--seed", split_args.seed, "Shuffle seed");
  s->add_option("--timestamp", split_args.timestamp, "Fixed manifest timestamp");
  s->callback([&] { run_split(split_args); });

  EvalAutoArgs eval_auto_args;
  auto* ea = app.add_subcommand("eval-auto", "ROUGE/BLEU/BERTScore/METEOR table");
  ea->add_option("--refs", eval_auto_args.refs, "Reference corpus file")->required();
  ea->add_option("--cands", eval_auto_args.cands, "Candidates file ({id, summary} lines)")->required();
  ea->add_option("--cand-embeddings", eval_auto_args.cand_embeddings,
                 "Candidate embeddings ({id, tokens, vectors} lines)");
  ea->add_option("--ref-embeddings", eval_auto_args.ref_embeddings,
                 "Reference embeddings ({id, tokens, vectors} lines)");
  ea->add_flag("--percent", eval_auto_args.percent, "Render scores as percentages");
  ea->add_option("--out", eval_auto_args.json_out, "JSON report path");
  ea->add_option("--table-out", eval_auto_args.table_out, "Write the text table here");
  ea->add_option("--seed", eval_auto_args.seed, "Run seed (recorded in the manifest)");
  ea->add_option("--timestamp", eval_auto_args.timestamp, "Fixed manifest timestamp");
  ea->callback([&] { run_eval_auto(eval_auto_args); });

  EvalFactsArgs eval_facts_args;
  auto* ef = app.add_subcommand("eval-facts", "Fact-based human-evaluation table");
  ef->add_option("--annotations", eval_facts_args.annotations, "Annotation file")->required();
  ef->add_option("--out", eval_facts_args.json_out, "JSON report path");
  ef->add_option("--table-out", eval_facts_args.table_out, "Write the text table here");
  ef->add_option("--seed", eval_facts_args.seed, "Run seed (recorded in the manifest)");
  ef->add_option("--timestamp", eval_facts_args.timestamp, "Fixed manifest timestamp");
  ef->callback([&] { run_eval_facts(eval_facts_args); });

  CmiArgs cmi_args;
  auto* cm = app.add_subcommand("cmi", "Code-mixing index over a corpus");
  cm->add_option("--corpus", cmi_args.corpus, "Corpus file")->required();
  cm->add_option("--lexicon-lang1", cmi_args.lexicon1, "Language-1 word list")->required();
  cm->add_option("--lexicon-lang2", cmi_args.lexicon2, "Language-2 word list")->required();
  cm->add_option("--ambiguity-policy", cmi_args.policy,
                 "prefer-lang1, prefer-lang2 or independent");
  cm->add_option("--out", cmi_args.json_out, "JSON report path");
  cm->add_option("--table-out", cmi_args.table_out, "Write the text table here");
  cm->add_option("--seed", cmi_args.seed, "Run seed (recorded in the manifest)");
  cm->add_option("--timestamp", cmi_args.timestamp, "Fixed manifest timestamp");
  cm->callback([&] { run_cmi(cmi_args); });

  KappaArgs kappa_args;
  auto* k = app.add_subcommand("kappa", "Inter-annotator agreement");
  k->add_option("--labels", kappa_args.labels,
                "Labels file ({annotator, labels} lines)")->required();
  k->add_option("--out", kappa_args.json_out, "JSON report path");
  k->add_option("--table-out", kappa_args.table_out, "Write the text table here");
  k->add_option("--seed", kappa_args.seed, "Run seed (recorded in the manifest)");
  k->add_option("--timestamp", kappa_args.timestamp, "Fixed manifest timestamp");
  k->callback([&] { run_kappa(kappa_args); });

  FusionDemoArgs demo;
  auto* fd = app.add_subcommand("fusion-demo",
                                "Toy fusion training, gradient check and generation");
  fd->add_option("--task", demo.task, "Toy-task fixture file (default: built-in)");
  fd->add_option("--config", demo.config, "Fusion config JSON (overrides the task's)");
  fd->add_option("--steps", demo.steps, "Training steps (default 200)");
  fd->add_option("--lr", demo.lr, "Learning rate (default 0.3)");
  fd->add_option("--checkpoint-out", demo.checkpoint_out, "Write the trained model here");
  fd->add_option("--out", demo.json_out, "JSON report path");
  fd->add_option("--table-out", demo.table_out, "Write the text table here");
  fd->add_option("--seed", demo.seed, "Seed for init and fixtures");
  fd->add_option("--timestamp", demo.timestamp, "Fixed manifest timestamp");
  fd->callback([&] { run_fusion_demo(demo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const medsumm::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const medsumm::CheckError& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitCheck;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return kExitUnexpected;
  }
  return kExitOk;
}
