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

#ifndef RECIPEGRAPH_STORE_H_
#define RECIPEGRAPH_STORE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "recipegraph/annotator.h"
#include "recipegraph/correction.h"
#include "recipegraph/graph.h"

namespace recipegraph {

// File-backed store:
//   <root>/recipes/<id>.json
//   <root>/graphs/<id>/v<N>.json   one file per version, never rewritten
//   <root>/graphs/<id>/HEAD        latest version number
//   <root>/graphs/<id>/s<N>.json   editing session as of version N
// Every file is written to a temporary name and renamed into place.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path &root() const { return root_; }

  std::vector<Recipe> ListRecipes() const;
  std::optional<Recipe> GetRecipe(const std::string &id) const;
  // Throws Error(kConflict) when the id is taken, Error(kInvalidInput) for
  // ids that are not usable as file names.
  void CreateRecipe(const Recipe &recipe);

  // Version the HEAD pointer names, or the highest loadable version when the
  // pointer is missing or broken. 0 when there is no graph.
  int64_t LatestVersion(const std::string &id) const;
  std::optional<RecipeGraph> LatestGraph(const std::string &id) const;
  std::optional<RecipeGraph> GetGraph(const std::string &id, int64_t version) const;
  // Stores `graph` (and `session`, if given) as version LatestVersion+1,
  // then moves HEAD. The version fields are set accordingly. Returns the
  // stored graph.
  RecipeGraph AppendGraph(RecipeGraph graph, const Session *session = nullptr);

  // Session saved with the latest version, if any.
  std::optional<Session> GetSession(const std::string &id) const;

  // Serializes mutations of one recipe.
  std::mutex &RecipeLock(const std::string &id);

  static bool ValidId(const std::string &id);

 private:
  std::filesystem::path RecipePath(const std::string &id) const;
  std::filesystem::path GraphDir(const std::string &id) const;

  std::filesystem::path root_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

// Writes `content` to `path` through a temporary file and rename.
void WriteFileAtomic(const std::filesystem::path &path, const std::string &content);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_STORE_H_
