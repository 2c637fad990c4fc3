// tools/scriptorium.cc

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

// Command-line entry points: synthesize data, train, evaluate, compare paired
// runs, train a character LM, and serve the annotation API.
//
// Exit codes: 0 success, 2 usage or bad input, 3 data mismatch (alphabet,
// missing timings), 4 corrupt artifact.

#include <charconv>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>

#include "scriptorium/base/error.h"
#include "scriptorium/base/file-io.h"
#include "scriptorium/cli/run-history.h"
#include "scriptorium/data/dataset.h"
#include "scriptorium/data/manifest.h"
#include "scriptorium/data/reactions.h"
#include "scriptorium/data/synth.h"
#include "scriptorium/decode/decoder.h"
#include "scriptorium/lm/char-ngram.h"
#include "scriptorium/nnet/checkpoint.h"
#include "scriptorium/nnet/trainer.h"
#include "scriptorium/service/annotation-service.h"
#include "scriptorium/textcore/edit-distance.h"

namespace fs = std::filesystem;

namespace scriptorium {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitCorrupt = 4;

constexpr const char* kCheckpointName = "model.ckpt";
constexpr const char* kHistoryName = "history.csv";

std::string DefaultDataDir() {
  const char* env = std::getenv("SCRIPTORIUM_DATA");
  return env != nullptr && *env != '\0' ? env : "data";
}

std::string FormatFixed(double x, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << x;
  return out.str();
}

// Shortest round-trip form, so the config hash is stable across runs.
std::string FormatExact(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::string CsvField(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> ReadLines(const fs::path& path) {
  std::vector<std::string> lines;
  std::istringstream in(ReadFile(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

data::Manifest LoadDataDir(const fs::path& dir, bool check_images) {
  data::LoadOptions options;
  options.check_images = check_images;
  return data::LoadManifest(dir / data::kManifestFileName, options);
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string corpus;
  std::string out = DefaultDataDir();
  uint64_t seed = 1;
  std::size_t count = 0;
  int height = 64;
  double spread = 0.0;
  double train_fraction = 0.8;
  double validation_fraction = 0.1;
};

int RunSynth(const SynthArgs& a) {
  std::vector<std::string> corpus = ReadLines(a.corpus);
  if (corpus.empty() && a.count > 0) throw EmptyCorpus("corpus " + a.corpus + " has no lines");
  data::SynthOptions options;
  options.seed = a.seed;
  options.count = a.count;
  options.style.height = a.height;
  options.degradation_spread = a.spread;
  options.train_fraction = a.train_fraction;
  options.validation_fraction = a.validation_fraction;
  data::SynthDataset dataset = data::SynthesizeLines(corpus, options);
  data::Manifest manifest = data::WriteSynthDataset(dataset, a.out);
  auto counts = manifest.Counts();
  std::cout << "wrote " << manifest.records.size() << " lines to " << a.out << " (train "
            << counts[0] << ", validation " << counts[1] << ", test " << counts[2] << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data = DefaultDataDir();
  std::string out;
  std::string loss = "ctc";
  std::string mode = "weighted";
  double lambda = 1.0;
  uint64_t seed = 1;
  std::string optimizer = "rmsprop";
  double lr = 0.0;  // 0 = optimizer default
  int batch = 8;
  int max_epochs = 1000;
  int patience_lr = 15;
  int patience_stop = 80;
  int height = 64;
  int conv1 = 8;
  int conv2 = 16;
  int hidden = 64;
  bool quiet = false;
};

int RunTrain(const TrainArgs& a) {
  nnet::TrainOptions options;
  options.schedule.optimizer = nnet::ParseOptimizer(a.optimizer);
  options.schedule.base_lr = a.lr > 0 ? a.lr : nnet::DefaultLearningRate(options.schedule.optimizer);
  options.schedule.seed = a.seed;
  options.schedule.batch_size = a.batch;
  options.schedule.max_epochs = a.max_epochs;
  options.schedule.patience_lr = a.patience_lr;
  options.schedule.patience_stop = a.patience_stop;
  options.schedule.Validate();
  options.loss = a.loss == "psych" ? nnet::LossKind::kPsych : nnet::LossKind::kCtc;
  options.psych.mode = a.mode == "literal" ? PsychMode::kLiteral : PsychMode::kWeighted;
  options.psych.lambda = a.lambda;
  options.model.height = a.height;
  options.model.conv1_filters = a.conv1;
  options.model.conv2_filters = a.conv2;
  options.model.hidden = a.hidden;

  cli::RunHistory history;
  history.config = {
      {"command", "train"},
      {"data", fs::path(a.data).lexically_normal().string()},
      {"loss", a.loss},
      {"mode", a.mode},
      {"lambda", FormatExact(a.lambda)},
      {"seed", std::to_string(a.seed)},
      {"optimizer", nnet::OptimizerName(options.schedule.optimizer)},
      {"lr", FormatExact(options.schedule.base_lr)},
      {"batch", std::to_string(a.batch)},
      {"max_epochs", std::to_string(a.max_epochs)},
      {"patience_lr", std::to_string(a.patience_lr)},
      {"patience_stop", std::to_string(a.patience_stop)},
      {"height", std::to_string(a.height)},
      {"conv1", std::to_string(a.conv1)},
      {"conv2", std::to_string(a.conv2)},
      {"hidden", std::to_string(a.hidden)},
  };
  const std::string hash = cli::FormatHash(cli::ConfigHash(history.config));
  const fs::path out = a.out.empty() ? fs::path("runs") / (a.loss + "-seed" + std::to_string(a.seed))
                                     : fs::path(a.out);

  data::Manifest manifest = LoadDataDir(a.data, true);
  std::map<std::string, PsychAnnotation> annotations;
  if (options.loss == nnet::LossKind::kPsych) {
    data::ReactionIngest ingest = data::IngestReactions(
        manifest.records, [](const std::string& msg) { std::cerr << "note: " << msg << "\n"; });
    annotations = std::move(ingest.annotations);
    std::cerr << "reaction times: " << ingest.timed_train << "/" << ingest.total_train
              << " training lines timed, " << ingest.dropped.size() << " outliers dropped, m = "
              << FormatFixed(ingest.set.max_ms(), 1) << " ms\n";
  }
  nnet::TrainingData data = data::LoadTrainingData(
      manifest, a.data, a.height, options.loss == nnet::LossKind::kPsych ? &annotations : nullptr);

  std::cerr << "config_hash=" << hash << " seed=" << a.seed << " patience " << a.patience_lr
            << "/" << a.patience_stop << "\n";
  if (!a.quiet) {
    options.on_epoch = [](const nnet::EpochRecord& e) {
      std::cerr << "epoch " << e.epoch << " loss " << FormatFixed(e.train_loss, 4) << " val_cer "
                << FormatFixed(e.val_cer, 4) << " val_wer " << FormatFixed(e.val_wer, 4)
                << " lr " << e.lr << "\n";
    };
  }
  nnet::TrainResult result = nnet::Train(data, options);
  history.epochs = result.history;

  fs::create_directories(out);
  nnet::SaveCheckpoint(result.best, out / kCheckpointName);
  WriteFileAtomic(out / kHistoryName, cli::FormatHistory(history));
  std::cout << "best epoch " << result.best_epoch << " val_cer "
            << FormatFixed(history.BestValCer(), 4) << "\n"
            << "checkpoint " << (out / kCheckpointName).string() << "\n"
            << "history " << (out / kHistoryName).string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string ckpt;
  std::string data = DefaultDataDir();
  std::string split = "validation";
  std::string lm;
  int beam = 16;
  double w_lm = 1.9;
  double w_word = 1.6;
  std::string lines;
};

int RunEval(const EvalArgs& a) {
  nnet::Checkpoint ckpt = nnet::LoadCheckpoint(a.ckpt);
  std::optional<lm::CharNgramModel> lm;
  decode::FusionConfig fusion;
  fusion.beam_width = a.beam;
  fusion.w_lm = a.w_lm;
  fusion.w_word = a.w_word;
  fusion.Validate();
  if (!a.lm.empty()) lm = lm::CharNgramModel::Load(a.lm);

  data::Manifest manifest = LoadDataDir(a.data, true);
  std::vector<nnet::TrainingSample> samples = data::LoadSamples(
      manifest, data::ParseSplit(a.split), a.data, ckpt.alphabet, ckpt.model.config().height);
  if (samples.empty()) throw EmptySplit("split " + a.split + " has no lines");

  ErrorCounts totals;
  std::ostringstream csv;
  csv << "id,reference,hypothesis,cer,wer\n";
  for (const nnet::TrainingSample& s : samples) {
    PosteriorGrid grid = ckpt.model.Predict(s.image);
    std::string hyp = lm ? decode::BeamDecode(grid, ckpt.alphabet, &*lm, fusion)
                         : decode::GreedyDecode(grid, ckpt.alphabet);
    std::string ref = ckpt.alphabet.DecodeUtf8(s.label);
    totals.Add(hyp, ref);
    csv << CsvField(s.id) << "," << CsvField(ref) << "," << CsvField(hyp) << ","
        << FormatFixed(Cer(hyp, ref), 4) << "," << FormatFixed(Wer(hyp, ref), 4) << "\n";
  }
  const fs::path lines = a.lines.empty()
                             ? fs::path(a.ckpt).parent_path() / ("eval-" + a.split + ".csv")
                             : fs::path(a.lines);
  WriteFileAtomic(lines, csv.str());
  std::cout << "split " << a.split << " lines " << samples.size() << " decode "
            << (lm ? "beam" : "greedy") << "\n"
            << "CER " << FormatFixed(totals.cer(), 4) << "\n"
            << "WER " << FormatFixed(totals.wer(), 4) << "\n"
            << "per-line " << lines.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- compare

int RunCompare(const std::vector<std::string>& paths) {
  std::vector<cli::RunHistory> histories;
  for (const std::string& p : paths) histories.push_back(cli::LoadHistory(p));
  std::cout << cli::FormatComparison(cli::ComparePaired(histories));
  return kExitOk;
}

// ---------------------------------------------------------------- lm

struct LmArgs {
  std::string corpus;
  std::string out;
  std::string data = DefaultDataDir();
  int order = 5;
};

int RunLm(const LmArgs& a) {
  const fs::path alphabet_path = fs::path(a.data) / data::kAlphabetFileName;
  Alphabet alphabet = Alphabet::Load(alphabet_path);
  // Lines held out for validation and test never reach the count tables.
  std::set<std::string> exclude;
  const fs::path manifest_path = fs::path(a.data) / data::kManifestFileName;
  if (fs::exists(manifest_path)) {
    data::Manifest manifest = LoadDataDir(a.data, false);
    for (const data::LineRecord& r : manifest.records)
      if (r.split != data::Split::kTrain) exclude.insert(r.transcription);
  }
  lm::LmTrainStats stats;
  lm::CharNgramModel model =
      lm::CharNgramModel::Train(ReadLines(a.corpus), a.order, alphabet, exclude, &stats);
  model.Save(a.out);
  std::cout << "order " << a.order << " lines " << stats.lines << " (excluded "
            << stats.excluded_lines << ") characters " << stats.characters << " (dropped "
            << stats.dropped_characters << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- serve

int RunServe(const std::string& config_path) {
  service::ServiceConfig config = service::ServiceConfig::Load(config_path);

  // Signals are consumed by sigwait below; worker threads inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::AnnotationService svc(std::move(config));
  const int port = svc.Bind();
  std::cout << "listening on " << svc.config().host << ":" << port << std::endl;
  std::thread server([&svc] {
    svc.Serve();
    kill(getpid(), SIGTERM);  // wake the waiting main thread if serving ends on its own
  });
  int received = 0;
  sigwait(&signals, &received);
  svc.Stop();
  server.join();
  svc.Flush();
  std::cout << "stopped; " << svc.completed_count() << " annotations on disk" << std::endl;
  return kExitOk;
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const CorruptFile*>(&e) != nullptr) return kExitCorrupt;
  if (dynamic_cast<const AlphabetMismatch*>(&e) != nullptr ||
      dynamic_cast<const NoTimedRecords*>(&e) != nullptr ||
      dynamic_cast<const ImpossibleLabel*>(&e) != nullptr)
    return kExitMismatch;
  return kExitUsage;
}

int Main(int argc, char** argv) {
  CLI::App app{"scriptorium: psychophysically weighted CTC handwriting recognition"};
  app.require_subcommand(1);
  // A repeated flag overrides the earlier value, so wrappers can append overrides.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Render a synthetic line dataset");
  synth_cmd->add_option("--corpus", synth.corpus, "UTF-8 text, one line per sample")->required();
  synth_cmd->add_option("--out", synth.out, "Output dataset directory")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--count", synth.count, "Lines to render")->required();
  synth_cmd->add_option("--height", synth.height)->capture_default_str()->check(CLI::Range(8, 512));
  synth_cmd->add_option("--spread", synth.spread, "Degradation spread in [0, 1]")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--train-fraction", synth.train_fraction)->capture_default_str();
  synth_cmd->add_option("--val-fraction", synth.validation_fraction)->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a CRNN");
  train_cmd->add_option("--data", train.data, "Dataset directory")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Run directory (default runs/<loss>-seed<S>)");
  train_cmd->add_option("--loss", train.loss)
      ->capture_default_str()
      ->check(CLI::IsMember({"ctc", "psych"}));
  train_cmd->add_option("--mode", train.mode)
      ->capture_default_str()
      ->check(CLI::IsMember({"literal", "weighted"}));
  train_cmd->add_option("--lambda", train.lambda)->capture_default_str();
  train_cmd->add_option("--seed", train.seed)->capture_default_str();
  train_cmd->add_option("--optimizer", train.optimizer)
      ->capture_default_str()
      ->check(CLI::IsMember({"rmsprop", "adam", "adadelta"}));
  train_cmd->add_option("--lr", train.lr, "Base learning rate (default per optimizer)");
  train_cmd->add_option("--batch", train.batch)->capture_default_str();
  train_cmd->add_option("--max-epochs", train.max_epochs)->capture_default_str();
  train_cmd->add_option("--patience-lr", train.patience_lr)->capture_default_str();
  train_cmd->add_option("--patience-stop", train.patience_stop)->capture_default_str();
  train_cmd->add_option("--height", train.height)->capture_default_str();
  train_cmd->add_option("--conv1", train.conv1)->capture_default_str();
  train_cmd->add_option("--conv2", train.conv2)->capture_default_str();
  train_cmd->add_option("--hidden", train.hidden)->capture_default_str();
  train_cmd->add_flag("--quiet", train.quiet, "No per-epoch progress");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a checkpoint on a split");
  eval_cmd->add_option("--ckpt", eval.ckpt)->required();
  eval_cmd->add_option("--data", eval.data)->capture_default_str();
  eval_cmd->add_option("--split", eval.split)
      ->capture_default_str()
      ->check(CLI::IsMember({"validation", "test"}));
  eval_cmd->add_option("--lm", eval.lm, "Character LM for beam decoding");
  eval_cmd->add_option("--beam", eval.beam)->capture_default_str();
  eval_cmd->add_option("--w-lm", eval.w_lm)->capture_default_str();
  eval_cmd->add_option("--w-word", eval.w_word)->capture_default_str();
  eval_cmd->add_option("--lines", eval.lines, "Per-line CSV (default next to the checkpoint)");

  std::vector<std::string> histories;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Paired-seed comparison of histories");
  compare_cmd->add_option("--histories", histories)->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  LmArgs lm_args;
  CLI::App* lm_cmd = app.add_subcommand("lm", "Train a character n-gram LM");
  lm_cmd->add_option("--corpus", lm_args.corpus)->required();
  lm_cmd->add_option("--out", lm_args.out)->required();
  lm_cmd->add_option("--data", lm_args.data, "Dataset whose alphabet and held-out lines apply")
      ->capture_default_str();
  lm_cmd->add_option("--order", lm_args.order)
      ->capture_default_str()
      ->check(CLI::Range(1, lm::kMaxOrder));

  std::string serve_config;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  serve_cmd->add_option("--config", serve_config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth_cmd) return RunSynth(synth);
    if (*train_cmd) return RunTrain(train);
    if (*eval_cmd) return RunEval(eval);
    if (*compare_cmd) return RunCompare(histories);
    if (*lm_cmd) return RunLm(lm_args);
    if (*serve_cmd) return RunServe(serve_config);
  } catch (const UnknownSymbol& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kExitUsage;
}

}  // namespace
}  // namespace scriptorium

int main(int argc, char** argv) { return scriptorium::Main(argc, argv); }
