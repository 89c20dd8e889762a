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

#include "recipegraph/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "recipegraph/error.h"

namespace recipegraph {
namespace fs = std::filesystem;

namespace {

std::optional<std::string> ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::optional<RecipeGraph> LoadGraphFile(const fs::path &path) {
  auto content = ReadFile(path);
  if (!content) return std::nullopt;
  try {
    return GraphFromJson(nlohmann::json::parse(*content));
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  } catch (const Error &) {
    return std::nullopt;
  }
}

}  // namespace

void WriteFileAtomic(const fs::path &path, const std::string &content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::kInternal, "cannot write " + tmp.string());
  size_t written = 0;
  while (written < content.size()) {
    const ssize_t n = ::write(fd, content.data() + written, content.size() - written);
    if (n <= 0) {
      ::close(fd);
      ::unlink(tmp.c_str());
      throw Error(ErrorCode::kInternal, "short write to " + tmp.string());
    }
    written += static_cast<size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    ::unlink(tmp.c_str());
    throw Error(ErrorCode::kInternal, "cannot rename into " + path.string());
  }
}

Store::Store(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "recipes");
  fs::create_directories(root_ / "graphs");
}

bool Store::ValidId(const std::string &id) {
  if (id.empty() || id.size() > 128 || id[0] == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

fs::path Store::RecipePath(const std::string &id) const { return root_ / "recipes" / (id + ".json"); }
fs::path Store::GraphDir(const std::string &id) const { return root_ / "graphs" / id; }

std::vector<Recipe> Store::ListRecipes() const {
  std::vector<Recipe> recipes;
  for (const auto &entry : fs::directory_iterator(root_ / "recipes")) {
    if (entry.path().extension() != ".json") continue;
    const std::string id = entry.path().stem().string();
    if (auto recipe = GetRecipe(id)) recipes.push_back(std::move(*recipe));
  }
  std::sort(recipes.begin(), recipes.end(),
            [](const Recipe &a, const Recipe &b) { return a.id < b.id; });
  return recipes;
}

std::optional<Recipe> Store::GetRecipe(const std::string &id) const {
  if (!ValidId(id)) return std::nullopt;
  auto content = ReadFile(RecipePath(id));
  if (!content) return std::nullopt;
  try {
    return RecipeFromJson(nlohmann::json::parse(*content));
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  } catch (const Error &) {
    return std::nullopt;
  }
}

void Store::CreateRecipe(const Recipe &recipe) {
  if (!ValidId(recipe.id)) {
    throw Error(ErrorCode::kInvalidInput, "recipe id '" + recipe.id + "' is not usable");
  }
  if (fs::exists(RecipePath(recipe.id))) {
    throw Error(ErrorCode::kConflict, "recipe '" + recipe.id + "' already exists");
  }
  WriteFileAtomic(RecipePath(recipe.id), RecipeToJson(recipe).dump(2) + "\n");
}

int64_t Store::LatestVersion(const std::string &id) const {
  if (!ValidId(id)) return 0;
  const fs::path dir = GraphDir(id);
  if (auto head = ReadFile(dir / "HEAD")) {
    try {
      const int64_t v = std::stoll(*head);
      if (v > 0 && LoadGraphFile(dir / ("v" + std::to_string(v) + ".json"))) return v;
    } catch (...) {
    }
  }
  // Pointer missing or broken: fall back to the highest version that loads.
  std::vector<int64_t> versions;
  std::error_code ec;
  for (const auto &entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.size() < 7 || name[0] != 'v' || !name.ends_with(".json")) continue;
    try {
      size_t used = 0;
      const std::string digits = name.substr(1, name.size() - 6);
      const int64_t v = std::stoll(digits, &used);
      if (used == digits.size() && v > 0) versions.push_back(v);
    } catch (...) {
    }
  }
  std::sort(versions.rbegin(), versions.rend());
  for (int64_t v : versions) {
    if (LoadGraphFile(dir / ("v" + std::to_string(v) + ".json"))) return v;
  }
  return 0;
}

std::optional<RecipeGraph> Store::GetGraph(const std::string &id, int64_t version) const {
  if (!ValidId(id) || version <= 0) return std::nullopt;
  return LoadGraphFile(GraphDir(id) / ("v" + std::to_string(version) + ".json"));
}

std::optional<RecipeGraph> Store::LatestGraph(const std::string &id) const {
  const int64_t v = LatestVersion(id);
  if (v == 0) return std::nullopt;
  return GetGraph(id, v);
}

RecipeGraph Store::AppendGraph(RecipeGraph graph, const Session *session) {
  const std::string &id = graph.recipe_id();
  if (!ValidId(id)) throw Error(ErrorCode::kInvalidInput, "recipe id '" + id + "' is not usable");
  const int64_t next = LatestVersion(id) + 1;
  graph.set_version(next);
  const fs::path dir = GraphDir(id);
  const std::string suffix = std::to_string(next) + ".json";
  WriteFileAtomic(dir / ("v" + suffix), GraphToJson(graph).dump(1) + "\n");
  if (session) {
    Session copy = *session;
    copy.recipe_id = id;
    copy.base_version = next;
    WriteFileAtomic(dir / ("s" + suffix), SessionToJson(copy).dump(1) + "\n");
  } else {
    std::error_code ec;
    fs::remove(dir / ("s" + suffix), ec);
  }
  WriteFileAtomic(dir / "HEAD", std::to_string(next) + "\n");
  return graph;
}

std::optional<Session> Store::GetSession(const std::string &id) const {
  const int64_t v = LatestVersion(id);
  if (v == 0) return std::nullopt;
  auto content = ReadFile(GraphDir(id) / ("s" + std::to_string(v) + ".json"));
  if (!content) return std::nullopt;
  try {
    return SessionFromJson(nlohmann::json::parse(*content));
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  } catch (const Error &) {
    return std::nullopt;
  }
}

std::mutex &Store::RecipeLock(const std::string &id) {
  std::lock_guard<std::mutex> guard(locks_mutex_);
  auto &slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace recipegraph
