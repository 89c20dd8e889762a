// Copyright 2026 The recipegraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs a Service on an ephemeral port over a scratch store, and forks
// writers that can be killed mid-write.

#ifndef RECIPEGRAPH_TESTS_SERVICE_HARNESS_H_
#define RECIPEGRAPH_TESTS_SERVICE_HARNESS_H_

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "recipegraph/service.h"
#include "recipegraph/store.h"

namespace recipegraph::testing {

inline std::filesystem::path ScratchDir(const std::string &tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("recipegraph-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

// Path -> content of every file under `root`.
inline std::map<std::string, std::string> Snapshot(const std::filesystem::path &root) {
  std::map<std::string, std::string> files;
  for (const auto &entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[std::filesystem::relative(entry.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

class RunningService {
 public:
  RunningService(const std::filesystem::path &root, const Ontology &ontology)
      : store_(root), service_(store_, ontology, ServiceOptions{"127.0.0.1", 0, std::nullopt}) {
    port_ = service_.Bind();
    thread_ = std::thread([this] { service_.Run(); });
    service_.WaitUntilReady();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
  }
  ~RunningService() {
    service_.Stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client &client() { return *client_; }
  Store &store() { return store_; }
  int port() const { return port_; }

  // Status and parsed body (null when the body is not JSON).
  std::pair<int, nlohmann::json> Get(const std::string &path) {
    return Unpack(client_->Get(path));
  }
  std::pair<int, nlohmann::json> Post(const std::string &path, const nlohmann::json &body) {
    return Unpack(client_->Post(path, body.dump(), "application/json"));
  }

 private:
  static std::pair<int, nlohmann::json> Unpack(const httplib::Result &res) {
    if (!res) return {-1, nullptr};
    return {res->status, nlohmann::json::parse(res->body, nullptr, false)};
  }

  Store store_;
  Service service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

// Forks a child that calls `write` in a loop, lets it run for `delay`, then
// SIGKILLs it. Returns true if the child was killed by the signal.
template <typename Fn>
bool KillDuringWrites(Fn write, std::chrono::microseconds delay) {
  const pid_t pid = ::fork();
  if (pid == 0) {
    for (;;) write();
  }
  std::this_thread::sleep_for(delay);
  ::kill(pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);
  return WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL;
}

}  // namespace recipegraph::testing

#endif  // RECIPEGRAPH_TESTS_SERVICE_HARNESS_H_
