// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Drives the built medsumm binary end to end. Golden tests run with a fixed
// --timestamp and relative input paths (cwd = the golden directory) so the
// emitted bytes are fully reproducible.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace {

std::string g_binary;
std::string g_golden_dir;
std::string g_data_dir;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in) << "cannot open " << path;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  ASSERT_TRUE(out) << "cannot write " << path;
  out << content;
}

int run(const std::string& args, const std::string& cwd = "") {
  std::string cmd;
  if (!cwd.empty()) cmd += "cd " + cwd + " && ";
  cmd += g_binary + " " + args;
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tmp_path(const std::string& name) {
  return std::string(::testing::TempDir()) + name;
}

TEST(CliGolden, EvalAutoTableAndReportBytes) {
  std::string table = tmp_path("eval_auto_table.txt");
  std::string report = tmp_path("eval_auto_report.json");
  int code = run(
      "eval-auto --refs refs.jsonl --cands cands.jsonl"
      " --cand-embeddings cand_emb.jsonl --ref-embeddings ref_emb.jsonl"
      " --percent --timestamp 1700000000 --table-out " + table +
          " --out " + report,
      g_golden_dir);
  ASSERT_EQ(code, 0);
  EXPECT_EQ(read_file(table), read_file(g_golden_dir + "/eval_auto_table.txt"));
  EXPECT_EQ(read_file(report), read_file(g_golden_dir + "/eval_auto_report.json"));
}

TEST(CliGolden, EvalFactsTableAndReportBytes) {
  std::string table = tmp_path("eval_facts_table.txt");
  std::string report = tmp_path("eval_facts_report.json");
  int code = run(
      "eval-facts --annotations annotations.jsonl --timestamp 1700000000"
      " --table-out " + table + " --out " + report,
      g_golden_dir);
  ASSERT_EQ(code, 0);
  EXPECT_EQ(read_file(table), read_file(g_golden_dir + "/eval_facts_table.txt"));
  EXPECT_EQ(read_file(report), read_file(g_golden_dir + "/eval_facts_report.json"));
}

TEST(CliGolden, ReportsAreDeterministicAcrossRunsAndThreadCounts) {
  std::string a = tmp_path("det_a.json");
  std::string b = tmp_path("det_b.json");
  std::string base =
      "eval-auto --refs refs.jsonl --cands cands.jsonl --timestamp 1700000000";
  std::string old_threads;
  if (const char* env = std::getenv("MEDSUMM_KIT_THREADS")) old_threads = env;
  setenv("MEDSUMM_KIT_THREADS", "1", 1);
  ASSERT_EQ(run(base + " --out " + a, g_golden_dir), 0);
  setenv("MEDSUMM_KIT_THREADS", "4", 1);
  ASSERT_EQ(run(base + " --out " + b, g_golden_dir), 0);
  if (old_threads.empty()) {
    unsetenv("MEDSUMM_KIT_THREADS");
  } else {
    setenv("MEDSUMM_KIT_THREADS", old_threads.c_str(), 1);
  }
  EXPECT_EQ(read_file(a), read_file(b));
}

TEST(Cli, IdenticalCandidatesScoreHundredPercent) {
  std::string dir = tmp_path("ident");
  std::string mk = "mkdir -p " + dir;
  ASSERT_EQ(std::system(mk.c_str()), 0);
  write_file(dir + "/refs.jsonl",
             R"({"id":"q1","query_codemixed":"x","golden_summary":"Patient has fever and rash.","gold_facts":[]})"
             "\n");
  write_file(dir + "/cands.jsonl",
             R"({"id":"q1","summary":"Patient has fever and rash."})"
             "\n");
  std::string report = tmp_path("ident_report.json");
  int code = run("eval-auto --refs refs.jsonl --cands cands.jsonl --percent"
                 " --timestamp 0 --table-out /dev/null --out " + report,
                 dir);
  ASSERT_EQ(code, 0);
  std::string json = read_file(report);
  for (const char* key : {"\"R1\": 1.0", "\"R2\": 1.0", "\"RL\": 1.0",
                          "\"B1\": 1.0", "\"B4\": 1.0"}) {
    EXPECT_NE(json.find(key), std::string::npos) << "missing " << key;
  }
}

TEST(Cli, UnmatchedIdIsListedAndExcluded) {
  std::string dir = tmp_path("unmatched");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  std::ostringstream refs, cands;
  for (int i = 0; i < 9; ++i) {
    refs << R"({"id":"q)" << i << R"(","query_codemixed":"x","golden_summary":"take rest","gold_facts":[]})"
         << "\n";
    cands << R"({"id":"q)" << i << R"(","summary":"take rest"})" << "\n";
  }
  cands << R"({"id":"ghost","summary":"take rest"})" << "\n";
  write_file(dir + "/refs.jsonl", refs.str());
  write_file(dir + "/cands.jsonl", cands.str());
  std::string table = tmp_path("unmatched_table.txt");
  int code = run("eval-auto --refs refs.jsonl --cands cands.jsonl"
                 " --timestamp 0 --table-out " + table + " --out /dev/null",
                 dir);
  ASSERT_EQ(code, 0);
  std::string text = read_file(table);
  EXPECT_NE(text.find("unmatched id (excluded from means): ghost"),
            std::string::npos);
  // 9 data rows + MEAN, ghost not among them.
  EXPECT_EQ(text.find("ghost  "), std::string::npos);
}

TEST(Cli, CurateReportsDuplicatesAndHistogram) {
  std::string dir = tmp_path("curate");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  std::ostringstream corpus;
  // 10 records: 2 duplicates (same normalized query), 5 with taxonomy terms.
  corpus << R"({"id":"a","query_codemixed":"skin rash hai","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"b","query_codemixed":"Skin  Rash hai","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"c","query_codemixed":"eye redness problem","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"d","query_codemixed":"swollen tonsils dikh rahe","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"e","query_codemixed":"knee swelling since monday","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"f","query_codemixed":"mouth ulcers ho gaye","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"g","query_codemixed":"regular checkup chahiye","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"h","query_codemixed":"headache only","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"i","query_codemixed":"feeling tired","golden_summary":"s","gold_facts":[]})" << "\n";
  corpus << R"({"id":"j","query_codemixed":"skin rash hai","golden_summary":"different","gold_facts":[]})" << "\n";
  write_file(dir + "/corpus.jsonl", corpus.str());
  std::string out = tmp_path("curated.jsonl");
  std::string report = tmp_path("curate_report.json");
  int code = run("curate --corpus corpus.jsonl --taxonomy " + g_data_dir +
                     "/taxonomy.json --require-in query --out " + out +
                     " --report " + report + " --timestamp 0 --table-out /dev/null",
                 dir);
  ASSERT_EQ(code, 0);
  std::string json = read_file(report);
  EXPECT_NE(json.find("\"removed_duplicates\": 2"), std::string::npos);
  EXPECT_NE(json.find("\"kept\": 5"), std::string::npos);
}

TEST(Cli, SplitProducesFloorFloorRemainderCounts) {
  std::string dir = tmp_path("split");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  std::ostringstream corpus;
  for (int i = 0; i < 3015; ++i) {
    corpus << R"({"id":"q)" << i << R"(","query_codemixed":"query )" << i
           << R"(","golden_summary":"s","gold_facts":[]})" << "\n";
  }
  write_file(dir + "/corpus.jsonl", corpus.str());
  std::string report = tmp_path("split_report.json");
  int code = run("split --corpus corpus.jsonl --ratios 0.8,0.05,0.15 --seed 42"
                 " --timestamp 0 --table-out /dev/null --report " + report +
                 " --out " + tmp_path("split.json"),
                 dir);
  ASSERT_EQ(code, 0);
  std::string json = read_file(report);
  EXPECT_NE(json.find("\"train\": 2412"), std::string::npos);
  EXPECT_NE(json.find("\"val\": 150"), std::string::npos);
  EXPECT_NE(json.find("\"test\": 453"), std::string::npos);
}

TEST(Cli, CmiMonolingualIsZero) {
  std::string dir = tmp_path("cmi");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  write_file(dir + "/corpus.jsonl",
             R"({"id":"q1","query_codemixed":"i have fever since days","golden_summary":"s","gold_facts":[]})"
             "\n");
  write_file(dir + "/hi.txt", "mujhe\nhai\n");
  write_file(dir + "/en.txt", "i\nhave\nfever\nsince\ndays\n");
  std::string report = tmp_path("cmi_report.json");
  int code = run("cmi --corpus corpus.jsonl --lexicon-lang1 hi.txt"
                 " --lexicon-lang2 en.txt --timestamp 0"
                 " --table-out /dev/null --out " + report,
                 dir);
  ASSERT_EQ(code, 0);
  EXPECT_NE(read_file(report).find("\"mean_cmi\": 0.0"), std::string::npos);
}

TEST(Cli, KappaIdenticalListsScoreOne) {
  std::string dir = tmp_path("kappa");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  write_file(dir + "/labels.jsonl",
             R"({"annotator":"A","labels":["x","y","x"]})"
             "\n"
             R"({"annotator":"B","labels":["x","y","x"]})"
             "\n");
  std::string report = tmp_path("kappa_report.json");
  int code = run("kappa --labels labels.jsonl --timestamp 0"
                 " --table-out /dev/null --out " + report,
                 dir);
  ASSERT_EQ(code, 0);
  EXPECT_NE(read_file(report).find("\"mean_kappa\": 1.0"), std::string::npos);
}

TEST(Cli, FusionDemoPassesItsChecks) {
  std::string report = tmp_path("fusion_report.json");
  std::string table = tmp_path("fusion_table.txt");
  int code = run("fusion-demo --seed 1 --steps 200 --timestamp 0 --table-out " +
                 table + " --out " + report);
  ASSERT_EQ(code, 0);
  std::string text = read_file(table);
  EXPECT_NE(text.find("gradient check: PASS"), std::string::npos);
  std::string json = read_file(report);
  EXPECT_NE(json.find("\"gradient_check\": \"PASS\""), std::string::npos);
  EXPECT_NE(json.find("\"loss_check\": \"PASS\""), std::string::npos);
}

TEST(Cli, EvalAutoReproducesLexicalHandCase) {
  // "the cat" vs "the cat sat": ROUGE-1 F = 0.8 and B1 = exp(-0.5) = 0.6065...
  std::string dir = tmp_path("handcase");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  write_file(dir + "/refs.jsonl",
             R"({"id":"x","query_codemixed":"q","golden_summary":"the cat sat","gold_facts":[]})"
             "\n");
  write_file(dir + "/cands.jsonl", R"({"id":"x","summary":"the cat"})"
                                   "\n");
  std::string report = tmp_path("handcase_report.json");
  int code = run("eval-auto --refs refs.jsonl --cands cands.jsonl --timestamp 0"
                 " --table-out /dev/null --out " + report,
                 dir);
  ASSERT_EQ(code, 0);
  std::string json = read_file(report);
  EXPECT_NE(json.find("\"R1\": 0.8"), std::string::npos);
  EXPECT_NE(json.find("\"B1\": 0.6065306597126334"), std::string::npos);
}

TEST(Cli, CurateEmptyCorpusGivesEmptyOutputs) {
  std::string dir = tmp_path("curate_empty");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  write_file(dir + "/corpus.jsonl", "");
  std::string out = tmp_path("curate_empty_out.jsonl");
  std::string report = tmp_path("curate_empty_report.json");
  int code = run("curate --corpus corpus.jsonl --taxonomy " + g_data_dir +
                     "/taxonomy.json --out " + out + " --report " + report +
                     " --timestamp 0 --table-out /dev/null",
                 dir);
  ASSERT_EQ(code, 0);
  EXPECT_EQ(read_file(out), "");
  std::string json = read_file(report);
  EXPECT_NE(json.find("\"kept\": 0"), std::string::npos);
  EXPECT_NE(json.find("\"removed_duplicates\": 0"), std::string::npos);
}

TEST(Cli, EvalFactsEmptyFileIsAnInputError) {
  std::string dir = tmp_path("facts_empty");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  write_file(dir + "/annotations.jsonl", "");
  EXPECT_EQ(run("eval-facts --annotations annotations.jsonl --table-out /dev/null",
                dir),
            2);
}

TEST(Cli, FusionDemoFailedSelfCheckExitsWithCheckCode) {
  // With zero steps the loss ratio is 1.0, which fails the < 0.5 self-check.
  EXPECT_EQ(run("fusion-demo --seed 1 --steps 0 --timestamp 0"
                " --table-out /dev/null"),
            3);
}

TEST(Cli, FusionDemoRunsShippedTaskFixture) {
  std::string report = tmp_path("fixture_demo.json");
  int code = run("fusion-demo --task " + g_data_dir + "/toy_task.json" +
                 " --seed 1 --steps 200 --timestamp 0 --table-out /dev/null"
                 " --out " + report);
  ASSERT_EQ(code, 0);
  EXPECT_NE(read_file(report).find("\"loss_check\": \"PASS\""),
            std::string::npos);
}

TEST(Cli, ExitCodesDistinguishInputErrors) {
  EXPECT_EQ(run("eval-auto --refs /nonexistent.jsonl --cands /also-missing.jsonl"
                " --table-out /dev/null"),
            2);
  EXPECT_EQ(run("definitely-not-a-subcommand"), 2);
  std::string dir = tmp_path("badratio");
  ASSERT_EQ(std::system(("mkdir -p " + dir).c_str()), 0);
  write_file(dir + "/corpus.jsonl",
             R"({"id":"a","query_codemixed":"x","golden_summary":"s","gold_facts":[]})"
             "\n");
  EXPECT_EQ(run("split --corpus corpus.jsonl --ratios 0.5,0.5,0.5"
                " --table-out /dev/null",
                dir),
            2);
}

TEST(Cli, ShippedSampleDataWorksEndToEnd) {
  std::string report = tmp_path("sample_report.json");
  int code = run("eval-auto --refs " + g_data_dir + "/sample_corpus.jsonl" +
                 " --cands " + g_data_dir + "/sample_candidates.jsonl" +
                 " --timestamp 0 --table-out /dev/null --out " + report);
  ASSERT_EQ(code, 0);
  EXPECT_NE(read_file(report).find("\"rows\""), std::string::npos);
}

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc < 4) {
    std::fprintf(stderr,
                 "usage: cli_test <medsumm-binary> <golden-dir> <data-dir>\n");
    return 1;
  }
  g_binary = argv[1];
  g_golden_dir = argv[2];
  g_data_dir = argv[3];
  return RUN_ALL_TESTS();
}
