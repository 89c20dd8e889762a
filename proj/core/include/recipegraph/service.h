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

#ifndef RECIPEGRAPH_SERVICE_H_
#define RECIPEGRAPH_SERVICE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "recipegraph/ontology.h"
#include "recipegraph/store.h"

namespace recipegraph {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
};

// HTTP front end over a Store. Mutations of one recipe are serialized;
// reads go straight to the immutable version files.
class Service {
 public:
  Service(Store &store, const Ontology &ontology, ServiceOptions options);
  ~Service();
  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  // Binds the listening socket and returns the port. Throws Error(kInternal)
  // when the address cannot be bound.
  int Bind();
  // Serves until Stop() is called. Bind() must have succeeded.
  void Run();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace recipegraph

#endif  // RECIPEGRAPH_SERVICE_H_
