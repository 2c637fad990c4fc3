// scriptorium/service/annotation-service.h

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

#ifndef SCRIPTORIUM_SERVICE_ANNOTATION_SERVICE_H_
#define SCRIPTORIUM_SERVICE_ANNOTATION_SERVICE_H_

#include <cstdio>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/data/manifest.h"

namespace httplib {
class Server;
}

namespace scriptorium {
namespace service {

enum class TaskKind { kLineTyping, kCharLabeling };

std::string TaskName(TaskKind kind);
// Returns false for anything but "line_typing" / "char_labeling".
bool ParseTask(std::string_view name, TaskKind* kind);

struct QueueItem {
  std::string id;
  std::string image_path;  // relative to the data directory
  data::Split split = data::Split::kTrain;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir;
  std::map<TaskKind, std::vector<QueueItem>> queues;
  std::vector<std::string> char_options;  // label choices for char_labeling
  int session_batch = 0;  // items per session; 0 assigns everything left
  std::string alphabet;   // used when data_dir has no alphabet.txt yet

  // Parses the JSON config; relative data_dir is resolved against base_dir.
  // Throws Error describing the first problem.
  static ServiceConfig Parse(std::string_view json, const std::filesystem::path& base_dir);
  static ServiceConfig Load(const std::filesystem::path& path);
};

struct Response {
  int status = 200;
  std::string body;  // JSON, or raw bytes for images
  std::string content_type = "application/json";
};

inline constexpr const char* kAnnotationLogName = "annotations.jsonl";

// Serves line images to annotators and records their timed answers in an
// append-only JSON Lines log (data_dir/annotations.jsonl) that loads as a
// manifest. All state changes are serialized behind one mutex; the log is
// replayed at construction so completed items are never served again.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Transport-independent handlers.
  Response CreateSession(std::string_view body);
  Response Next(const std::string& session_id);
  Response Annotate(const std::string& session_id, std::string_view body);
  Response Image(const std::string& item_id) const;

  // Binds the configured host/port (0 = any) and returns the bound port.
  int Bind();
  // Serves until Stop(); call Bind() first.
  void Serve();
  void Stop();
  // Flushes the log to disk.
  void Flush();

  std::size_t completed_count() const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct Session {
    std::string annotator_id;
    TaskKind task;
    std::deque<std::string> queue;   // not yet served
    std::set<std::string> assigned;  // everything handed to this session
  };
  struct Stored {
    data::LineRecord record;
    std::string session_id;
  };

  void Replay();
  void AppendToLog(const data::LineRecord& record);
  void RewriteLog();
  std::string NewSessionId();

  ServiceConfig config_;
  Alphabet alphabet_;
  std::map<std::string, QueueItem> items_;
  std::map<std::string, TaskKind> item_task_;
  mutable std::mutex mu_;
  std::map<std::string, Session> sessions_;
  std::set<std::string> taken_;  // assigned to some live session or completed
  std::map<std::string, std::size_t> completed_;  // item id -> index in log_
  std::vector<data::LineRecord> log_;
  std::FILE* log_file_ = nullptr;
  uint64_t session_counter_ = 0;
  uint64_t nonce_ = 0;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace service
}  // namespace scriptorium

#endif  // SCRIPTORIUM_SERVICE_ANNOTATION_SERVICE_H_
