// tests/unit/cli_test.cc

// Copyright 2026  Scriptorium Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Runs the scriptorium binary end to end: exit codes, determinism, artifacts.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <set>
#include <string>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "scriptorium/base/file-io.h"
#include "scriptorium/cli/run-history.h"
#include "scriptorium/data/image.h"
#include "scriptorium/data/manifest.h"

// Included last: it pulls in <resolv.h>, whose _res macro clashes with Eigen.
#include <httplib.h>

namespace scriptorium {
namespace {

namespace fs = std::filesystem;

const fs::path& Root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "scriptorium-cli-test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome Cli(const std::string& args) {
  const fs::path log = Root() / "last-output.txt";
  const std::string cmd = std::string(SCRIPTORIUM_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.output = ReadFile(log);
  return o;
}

const char kCorpus[] =
    "the cat sat\non a mat\nread each line\nink to dim\nold rose stem\nthe monk\nrain wind\n"
    "dark hood\n";

// Tiny model settings so each training run takes well under a second.
const std::string kTinyTrain =
    " --height 16 --conv1 2 --conv2 2 --hidden 4 --max-epochs 2 --quiet";

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    WriteFileAtomic(Root() / "corpus.txt", kCorpus);
    Outcome o = Cli("synth --corpus " + (Root() / "corpus.txt").string() + " --out " +
                    (Root() / "data").string() + " --seed 3 --count 20 --height 32 --spread 0.5");
    ASSERT_EQ(o.code, 0) << o.output;
  }
  static std::string Data() { return (Root() / "data").string(); }
  static std::string Train(const std::string& run, const std::string& flags) {
    return "train --data " + Data() + " --out " + (Root() / run).string() + kTinyTrain + " " + flags;
  }
};

TEST_F(CliTest, SynthIsDeterministic) {
  const fs::path corpus = Root() / "corpus.txt";
  for (const char* out : {"synth-a", "synth-b"})
    ASSERT_EQ(Cli("synth --corpus " + corpus.string() + " --out " + (Root() / out).string() +
                  " --seed 11 --count 6 --height 32")
                  .code,
              0);
  for (const char* f : {"manifest.jsonl", "alphabet.txt", "images/line-0.png",
                        "images/line-5.png"})
    EXPECT_EQ(ReadFile(Root() / "synth-a" / f), ReadFile(Root() / "synth-b" / f)) << f;
}

TEST_F(CliTest, SynthEdgeCases) {
  const fs::path corpus = Root() / "corpus.txt";
  Outcome empty = Cli("synth --corpus " + corpus.string() + " --out " +
                      (Root() / "synth-empty").string() + " --count 0");
  ASSERT_EQ(empty.code, 0) << empty.output;
  EXPECT_EQ(ReadFile(Root() / "synth-empty" / "manifest.jsonl"), "");
  EXPECT_EQ(Cli("synth --corpus " + (Root() / "missing.txt").string() + " --out " +
                (Root() / "synth-x").string() + " --count 2")
                .code,
            2);
  WriteFileAtomic(Root() / "accent.txt", "caf\xc3\xa9\n");
  Outcome unknown = Cli("synth --corpus " + (Root() / "accent.txt").string() + " --out " +
                        (Root() / "synth-y").string() + " --count 2");
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.output.find("unknown symbol"), std::string::npos) << unknown.output;
  EXPECT_EQ(Cli("synth --count 2").code, 2);  // --corpus is required
}

TEST_F(CliTest, ZeroLambdaReproducesTheCtcHistory) {
  ASSERT_EQ(Cli(Train("ctc-1", "--loss ctc --seed 1")).code, 0);
  Outcome psych = Cli(Train("psych0-1", "--loss psych --lambda 0 --seed 1"));
  ASSERT_EQ(psych.code, 0) << psych.output;
  cli::RunHistory ctc = cli::LoadHistory(Root() / "ctc-1" / "history.csv");
  cli::RunHistory zero = cli::LoadHistory(Root() / "psych0-1" / "history.csv");
  ASSERT_EQ(ctc.epochs.size(), 2u);
  EXPECT_EQ(ctc.epochs, zero.epochs);
}

TEST_F(CliTest, HistoryHeaderRecordsTheRun) {
  ASSERT_EQ(Cli(Train("header", "--loss psych --mode literal --lambda 0.5 --seed 4")).code, 0);
  const std::string text = ReadFile(Root() / "header" / "history.csv");
  EXPECT_EQ(text.rfind("# scriptorium training history\n# config_hash=", 0), 0u) << text;
  cli::RunHistory h = cli::LoadHistory(Root() / "header" / "history.csv");
  EXPECT_EQ(h.config.at("patience_lr"), "15");
  EXPECT_EQ(h.config.at("patience_stop"), "80");
  EXPECT_EQ(h.config.at("seed"), "4");
  EXPECT_EQ(h.config.at("mode"), "literal");
  EXPECT_EQ(h.config.at("lambda"), "0.5");
  EXPECT_EQ(h.config.at("optimizer"), "rmsprop");
  EXPECT_EQ(h.config.at("lr"), "5e-04");
}

TEST_F(CliTest, SeedsGiveDistinctCheckpoints) {
  std::set<std::string> checkpoints;
  for (int seed = 1; seed <= 5; ++seed) {
    const std::string run = "seed-" + std::to_string(seed);
    ASSERT_EQ(Cli(Train(run, "--loss ctc --max-epochs 1 --seed " + std::to_string(seed))).code, 0);
    checkpoints.insert(ReadFile(Root() / run / "model.ckpt"));
  }
  EXPECT_EQ(checkpoints.size(), 5u);
}

TEST_F(CliTest, TrainExitCodes) {
  // Alphabet file lacking a character used by the transcriptions.
  const fs::path copy = Root() / "data-short-alphabet";
  fs::remove_all(copy);
  fs::copy(Root() / "data", copy, fs::copy_options::recursive);
  std::string alphabet = ReadFile(copy / "alphabet.txt");
  alphabet.erase(alphabet.find("t\n"), 2);
  WriteFileAtomic(copy / "alphabet.txt", alphabet);
  Outcome mismatch = Cli("train --data " + copy.string() + " --out " +
                         (Root() / "bad-run").string() + kTinyTrain);
  EXPECT_EQ(mismatch.code, 3) << mismatch.output;
  EXPECT_EQ(Cli(Train("x", "--loss hinge")).code, 2);

  // Psychophysical loss needs timed training lines.
  const fs::path untimed = Root() / "data-untimed";
  ASSERT_EQ(Cli("synth --corpus " + (Root() / "corpus.txt").string() + " --out " +
                untimed.string() + " --count 10 --height 32")
                .code,
            0);
  EXPECT_EQ(Cli("train --data " + untimed.string() + " --out " + (Root() / "untimed").string() +
                " --loss psych" + kTinyTrain)
                .code,
            3);
}

TEST_F(CliTest, EvalReportsFourDecimalsAndPerLineCsv) {
  ASSERT_EQ(Cli(Train("eval-run", "--loss ctc --seed 2")).code, 0);
  const std::string ckpt = (Root() / "eval-run" / "model.ckpt").string();
  Outcome greedy = Cli("eval --ckpt " + ckpt + " --data " + Data() + " --split validation");
  ASSERT_EQ(greedy.code, 0) << greedy.output;
  EXPECT_NE(greedy.output.find("decode greedy"), std::string::npos);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(greedy.output, m, std::regex("CER (\\d\\.\\d{4})\nWER (\\d\\.\\d{4})")))
      << greedy.output;
  const std::string csv = ReadFile(Root() / "eval-run" / "eval-validation.csv");
  EXPECT_EQ(csv.rfind("id,reference,hypothesis,cer,wer\n", 0), 0u);
  data::Manifest manifest = data::LoadManifest(Root() / "data" / "manifest.jsonl");
  const std::size_t validation_lines = manifest.InSplit(data::Split::kValidation).size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            validation_lines + 1);

  ASSERT_EQ(Cli("lm --corpus " + (Root() / "corpus.txt").string() + " --data " + Data() +
                " --out " + (Root() / "model.lm").string() + " --order 3")
                .code,
            0);
  Outcome beam = Cli("eval --ckpt " + ckpt + " --data " + Data() + " --split validation --lm " +
                     (Root() / "model.lm").string() + " --beam 4 --lines " +
                     (Root() / "beam.csv").string());
  ASSERT_EQ(beam.code, 0) << beam.output;
  EXPECT_NE(beam.output.find("decode beam"), std::string::npos);
  EXPECT_TRUE(fs::exists(Root() / "beam.csv"));
}

TEST_F(CliTest, EvalExitCodes) {
  ASSERT_EQ(Cli(Train("eval-codes", "--loss ctc --max-epochs 1")).code, 0);
  const fs::path ckpt = Root() / "eval-codes" / "model.ckpt";
  EXPECT_EQ(Cli("eval --ckpt " + ckpt.string() + " --data " + Data() + " --split dev").code, 2);
  const std::string bytes = ReadFile(ckpt);
  WriteFileAtomic(Root() / "truncated.ckpt", bytes.substr(0, bytes.size() / 2));
  EXPECT_EQ(Cli("eval --ckpt " + (Root() / "truncated.ckpt").string() + " --data " + Data()).code,
            4);
  WriteFileAtomic(Root() / "garbage.ckpt", "not a checkpoint");
  EXPECT_EQ(Cli("eval --ckpt " + (Root() / "garbage.ckpt").string() + " --data " + Data()).code, 4);
}

TEST_F(CliTest, CompareCommand) {
  ASSERT_EQ(Cli(Train("cmp-ctc", "--loss ctc --seed 7")).code, 0);
  ASSERT_EQ(Cli(Train("cmp-psych", "--loss psych --lambda 0 --seed 7")).code, 0);
  const std::string a = (Root() / "cmp-ctc" / "history.csv").string();
  const std::string b = (Root() / "cmp-psych" / "history.csv").string();
  Outcome same = Cli("compare --histories " + a + " " + b);
  ASSERT_EQ(same.code, 0) << same.output;
  EXPECT_NE(same.output.find("+0.0000"), std::string::npos) << same.output;
  EXPECT_NE(same.output.find("psych wins 0/1, ctc wins 0, ties 1"), std::string::npos)
      << same.output;
  EXPECT_EQ(Cli("compare --histories " + a).code, 2);
  EXPECT_EQ(Cli("compare --histories " + a + " " + a).code, 2);
}

TEST_F(CliTest, DataDirectoryFromEnvironment) {
  const std::string out = (Root() / "env-run").string();
  const std::string cmd = "env SCRIPTORIUM_DATA=" + Data() + " " + SCRIPTORIUM_BIN + " train --out " +
                          out + kTinyTrain + " --max-epochs 1 > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(fs::path(out) / "model.ckpt"));
}

TEST_F(CliTest, ServeBindsAnswersAndFlushesOnSigterm) {
  const fs::path dir = Root() / "serve";
  fs::create_directories(dir / "data" / "images");
  data::WritePng(dir / "data" / "images" / "l1.png", data::GrayImage{2, 2, {0, 255, 255, 0}});
  WriteFileAtomic(dir / "service.json", R"({"port": 0, "data_dir": "data", "alphabet": "abc ",
      "queues": {"line_typing": [{"id": "l1", "image_path": "images/l1.png"}]}})");
  WriteFileAtomic(dir / "broken.json", R"({"port": 0})");
  EXPECT_EQ(Cli("serve --config " + (dir / "broken.json").string()).code, 2);

  int pipe_fd[2];
  ASSERT_EQ(pipe(pipe_fd), 0);
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    dup2(pipe_fd[1], STDOUT_FILENO);
    close(pipe_fd[0]);
    const std::string config = (dir / "service.json").string();
    execl(SCRIPTORIUM_BIN, SCRIPTORIUM_BIN, "serve", "--config", config.c_str(),
          static_cast<char*>(nullptr));
    _exit(127);
  }
  close(pipe_fd[1]);
  std::string banner;
  char c;
  while (read(pipe_fd[0], &c, 1) == 1 && c != '\n') banner += c;
  std::smatch m;
  ASSERT_TRUE(std::regex_search(banner, m, std::regex("listening on [0-9.]+:(\\d+)"))) << banner;
  const int port = std::stoi(m[1]);

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", R"({"annotator_id":"a","task":"line_typing"})",
                             "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string session = nlohmann::json::parse(created->body)["session_id"];
  auto posted = client.Post("/sessions/" + session + "/annotations",
                            R"({"item_id":"l1","transcription":"ab","keystroke_times_ms":[120,480]})",
                            "application/json");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 201);

  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  close(pipe_fd[0]);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  data::Manifest log = data::LoadManifest(dir / "data" / "annotations.jsonl");
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(*log.records[0].line_time_ms, 480.0);
}

}  // namespace
}  // namespace scriptorium
