// src/service/annotation-service.cc

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

#include "scriptorium/service/annotation-service.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "scriptorium/base/error.h"
#include "scriptorium/base/file-io.h"
#include "scriptorium/base/utf8.h"

namespace scriptorium {
namespace service {

namespace {

using Json = nlohmann::json;

Response JsonResponse(int status, const Json& body) {
  return {status, body.dump(), "application/json"};
}

Response ErrorResponse(int status, const std::string& message) {
  return JsonResponse(status, Json{{"error", message}});
}

std::string UtcNow() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t secs = system_clock::to_time_t(now);
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

bool PositiveNumber(const Json& v) {
  return v.is_number() && std::isfinite(v.get<double>()) && v.get<double>() > 0.0;
}

}  // namespace

std::string TaskName(TaskKind kind) {
  return kind == TaskKind::kLineTyping ? "line_typing" : "char_labeling";
}

bool ParseTask(std::string_view name, TaskKind* kind) {
  if (name == "line_typing") {
    *kind = TaskKind::kLineTyping;
    return true;
  }
  if (name == "char_labeling") {
    *kind = TaskKind::kCharLabeling;
    return true;
  }
  return false;
}

ServiceConfig ServiceConfig::Parse(std::string_view text, const std::filesystem::path& base_dir) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("service config is not a JSON object");
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (c.port < 0 || c.port > 65535) throw Error("port out of range");
    if (!j.contains("data_dir")) throw Error("missing data_dir");
    std::filesystem::path dir = j.at("data_dir").get<std::string>();
    c.data_dir = dir.is_absolute() ? dir : base_dir / dir;
    c.session_batch = j.value("session_batch", 0);
    if (c.session_batch < 0) throw Error("session_batch must be non-negative");
    c.alphabet = j.value("alphabet", std::string());
    if (j.contains("char_options"))
      c.char_options = j.at("char_options").get<std::vector<std::string>>();
    if (!j.contains("queues") || !j.at("queues").is_object()) throw Error("missing queues");
    std::set<std::string> ids;
    for (const auto& [task_name, items] : j.at("queues").items()) {
      TaskKind kind;
      if (!ParseTask(task_name, &kind)) throw Error("unknown task '" + task_name + "'");
      auto& queue = c.queues[kind];
      for (const Json& item : items) {
        QueueItem q;
        q.id = item.at("id").get<std::string>();
        q.image_path = item.at("image_path").get<std::string>();
        q.split = data::ParseSplit(item.value("split", std::string("train")));
        if (q.id.empty() || !ids.insert(q.id).second)
          throw Error("queue item id '" + q.id + "' is empty or repeated");
        queue.push_back(std::move(q));
      }
    }
    if (c.queues.count(TaskKind::kCharLabeling) && c.char_options.empty())
      throw Error("char_labeling needs char_options");
  } catch (const Json::exception& e) {
    throw Error(std::string("service config: ") + e.what());
  } catch (const SchemaError& e) {
    throw Error(std::string("service config: ") + e.what());
  }
  return c;
}

ServiceConfig ServiceConfig::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path), path.parent_path());
}

AnnotationService::AnnotationService(ServiceConfig config) : config_(std::move(config)) {
  std::filesystem::create_directories(config_.data_dir);
  const auto alphabet_path = config_.data_dir / data::kAlphabetFileName;
  if (std::filesystem::exists(alphabet_path)) {
    alphabet_ = Alphabet::Load(alphabet_path);
  } else if (!config_.alphabet.empty()) {
    alphabet_ = Alphabet::FromUtf8(config_.alphabet);
    WriteFileAtomic(alphabet_path, alphabet_.Serialize());
  } else {
    throw Error("no alphabet: put alphabet.txt in " + config_.data_dir.string() +
                " or set \"alphabet\" in the config");
  }
  for (std::string_view option : config_.char_options)
    for (char32_t c : Utf8Decode(option))
      if (!alphabet_.Contains(c))
        throw Error("char option '" + std::string(option) + "' is not in the alphabet");
  for (const auto& [task, queue] : config_.queues)
    for (const QueueItem& item : queue) {
      items_[item.id] = item;
      item_task_[item.id] = task;
    }
  std::random_device rd;
  nonce_ = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  Replay();
  log_file_ = std::fopen((config_.data_dir / kAnnotationLogName).c_str(), "ab");
  if (!log_file_) throw IoError("cannot open annotation log in " + config_.data_dir.string());
}

AnnotationService::~AnnotationService() {
  Stop();
  if (log_file_) std::fclose(log_file_);
}

void AnnotationService::Replay() {
  const auto path = config_.data_dir / kAnnotationLogName;
  if (!std::filesystem::exists(path)) return;
  data::Manifest m =
      data::ParseManifest(ReadFile(path), alphabet_, config_.data_dir, data::LoadOptions{false});
  for (data::LineRecord& r : m.records) {
    completed_[r.id] = log_.size();
    taken_.insert(r.id);
    log_.push_back(std::move(r));
  }
}

void AnnotationService::AppendToLog(const data::LineRecord& record) {
  const std::string line = data::SerializeRecord(record) + "\n";
  if (std::fwrite(line.data(), 1, line.size(), log_file_) != line.size() ||
      std::fflush(log_file_) != 0)
    throw IoError("cannot append to the annotation log");
}

void AnnotationService::RewriteLog() {
  // Compaction: replace the whole log atomically, then reopen for appends.
  std::fclose(log_file_);
  log_file_ = nullptr;
  const auto path = config_.data_dir / kAnnotationLogName;
  WriteFileAtomic(path, data::SerializeManifest(log_));
  log_file_ = std::fopen(path.c_str(), "ab");
  if (!log_file_) throw IoError("cannot reopen the annotation log");
}

std::string AnnotationService::NewSessionId() {
  char buf[48];
  std::snprintf(buf, sizeof buf, "s%06llu-%08llx",
                static_cast<unsigned long long>(++session_counter_),
                static_cast<unsigned long long>(nonce_ & 0xffffffffull));
  return buf;
}

Response AnnotationService::CreateSession(std::string_view body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return ErrorResponse(400, "body must be a JSON object");
  if (!j.contains("annotator_id") || !j["annotator_id"].is_string() ||
      j["annotator_id"].get<std::string>().empty())
    return ErrorResponse(400, "annotator_id must be a non-empty string");
  TaskKind task;
  if (!j.contains("task") || !j["task"].is_string() ||
      !ParseTask(j["task"].get<std::string>(), &task))
    return ErrorResponse(400, "task must be line_typing or char_labeling");

  std::lock_guard<std::mutex> lock(mu_);
  Session s{j["annotator_id"].get<std::string>(), task, {}, {}};
  auto queue = config_.queues.find(task);
  if (queue != config_.queues.end())
    for (const QueueItem& item : queue->second) {
      if (config_.session_batch > 0 && s.queue.size() >= static_cast<std::size_t>(config_.session_batch))
        break;
      if (taken_.count(item.id)) continue;
      taken_.insert(item.id);
      s.queue.push_back(item.id);
      s.assigned.insert(item.id);
    }
  const std::string id = NewSessionId();
  const std::size_t n = s.queue.size();
  sessions_.emplace(id, std::move(s));
  return JsonResponse(201, Json{{"session_id", id}, {"task", TaskName(task)}, {"items", n}});
}

Response AnnotationService::Next(const std::string& session_id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return ErrorResponse(404, "unknown session");
  Session& s = it->second;
  if (s.queue.empty()) return {204, "", "application/json"};
  const std::string item = s.queue.front();
  s.queue.pop_front();
  Json out{{"item_id", item}, {"image_url", "/images/" + item}, {"task", TaskName(s.task)}};
  if (s.task == TaskKind::kCharLabeling) out["char_options"] = config_.char_options;
  return JsonResponse(200, out);
}

Response AnnotationService::Annotate(const std::string& session_id, std::string_view body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return ErrorResponse(400, "body must be a JSON object");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return ErrorResponse(404, "unknown session");
  const Session& s = it->second;
  if (!j.contains("item_id") || !j["item_id"].is_string())
    return ErrorResponse(400, "item_id must be a string");
  const std::string item_id = j["item_id"].get<std::string>();
  if (!s.assigned.count(item_id)) return ErrorResponse(409, "item is not assigned to this session");
  const QueueItem& item = items_.at(item_id);

  data::LineRecord r;
  r.id = item.id;
  r.split = item.split;
  r.image_path = item.image_path;
  r.annotator_id = s.annotator_id;
  r.session_id = session_id;
  if (s.task == TaskKind::kLineTyping) {
    if (!j.contains("transcription") || !j["transcription"].is_string())
      return ErrorResponse(422, "transcription must be a string");
    r.transcription = j["transcription"].get<std::string>();
    if (!j.contains("keystroke_times_ms") || !j["keystroke_times_ms"].is_array() ||
        j["keystroke_times_ms"].empty())
      return ErrorResponse(422, "keystroke_times_ms must be a non-empty array");
    std::vector<double> times;
    for (const Json& t : j["keystroke_times_ms"]) {
      if (!PositiveNumber(t)) return ErrorResponse(422, "keystroke times must be positive");
      if (!times.empty() && t.get<double>() < times.back())
        return ErrorResponse(422, "keystroke times must be non-decreasing");
      times.push_back(t.get<double>());
    }
    // Offsets are measured from the moment the image was displayed.
    r.line_time_ms = times.back();
    r.keystroke_times_ms = std::move(times);
  } else {
    if (!j.contains("label") || !j["label"].is_string())
      return ErrorResponse(422, "label must be a string");
    r.transcription = j["label"].get<std::string>();
    if (std::find(config_.char_options.begin(), config_.char_options.end(), r.transcription) ==
        config_.char_options.end())
      return ErrorResponse(422, "label is not one of the offered options");
    if (!j.contains("reaction_ms") || !PositiveNumber(j["reaction_ms"]))
      return ErrorResponse(422, "reaction_ms must be a positive number");
    const double reaction = j["reaction_ms"].get<double>();
    r.char_times_ms = std::vector<double>{reaction};
    r.line_time_ms = reaction;
  }
  if (j.contains("difficulty")) {
    const Json& d = j["difficulty"];
    if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 5)
      return ErrorResponse(422, "difficulty must be an integer in 1..5");
    r.difficulty = d.get<int>();
  }
  r.received_at = UtcNow();
  try {
    data::ValidateRecord(r, alphabet_, 0);
  } catch (const SchemaError& e) {
    return ErrorResponse(422, e.what());
  } catch (const AlphabetMismatch& e) {
    return ErrorResponse(422, e.what());
  }

  auto done = completed_.find(item_id);
  if (done != completed_.end()) {
    log_[done->second] = r;
    RewriteLog();
    return JsonResponse(200, Json{{"item_id", item_id}, {"replaced", true}});
  }
  AppendToLog(r);
  completed_[item_id] = log_.size();
  log_.push_back(std::move(r));
  return JsonResponse(201, Json{{"item_id", item_id}, {"replaced", false}});
}

Response AnnotationService::Image(const std::string& item_id) const {
  auto it = items_.find(item_id);
  if (it == items_.end()) return ErrorResponse(404, "unknown item");
  try {
    return {200, ReadFile(config_.data_dir / it->second.image_path), "image/png"};
  } catch (const IoError&) {
    return ErrorResponse(404, "image file missing");
  }
}

std::size_t AnnotationService::completed_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return completed_.size();
}

void AnnotationService::Flush() {
  std::lock_guard<std::mutex> lock(mu_);
  if (log_file_) {
    std::fflush(log_file_);
    ::fsync(fileno(log_file_));
  }
}

int AnnotationService::Bind() {
  server_ = std::make_unique<httplib::Server>();
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    if (r.status != 204) res.set_content(r.body, r.content_type);
  };
  server_->Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, CreateSession(req.body));
  });
  server_->Get(R"(/sessions/([^/]+)/next)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, Next(req.matches[1]));
               });
  server_->Post(R"(/sessions/([^/]+)/annotations)",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, Annotate(req.matches[1], req.body));
                });
  server_->Get(R"(/images/([^/]+))",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, Image(req.matches[1]));
               });
  if (config_.port == 0) {
    const int port = server_->bind_to_any_port(config_.host);
    if (port < 0) throw IoError("cannot bind " + config_.host);
    return port;
  }
  if (!server_->bind_to_port(config_.host, config_.port))
    throw IoError("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  return config_.port;
}

void AnnotationService::Serve() {
  if (!server_) throw Error("Serve() before Bind()");
  server_->listen_after_bind();
}

void AnnotationService::Stop() {
  if (server_) server_->stop();
}

}  // namespace service
}  // namespace scriptorium
