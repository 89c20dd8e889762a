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

#ifndef RECIPEGRAPH_CORRECTION_H_
#define RECIPEGRAPH_CORRECTION_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegraph/annotator.h"
#include "recipegraph/graph.h"
#include "recipegraph/ontology.h"

namespace recipegraph {

enum class EditKind { kAddAction, kAddFood, kAddArc, kRemoveArc, kRemoveVertex, kRelabel };

std::string_view EditKindName(EditKind kind);
std::optional<EditKind> ParseEditKind(std::string_view name);

// One user correction. Which payload fields matter depends on `kind`:
//   AddAction    id (optional), concept_id
//   AddFood      id (optional), concept_id (optional), origin (default user-added)
//   AddArc       arc
//   RemoveArc    arc
//   RemoveVertex id
//   Relabel      id, concept_id
struct EditOperation {
  EditKind kind = EditKind::kAddArc;
  std::string id;
  std::optional<std::string> concept_id;
  std::optional<FoodOrigin> origin;
  Arc arc;
  std::string anchor_clause;  // Clause vertex id, e.g. Clause:c_3
  std::string author;
  std::string timestamp;
};

nlohmann::json EditToJson(const EditOperation &edit);
// Throws Error(kInvalidInput) on malformed documents.
EditOperation EditFromJson(const nlohmann::json &doc);

// Editing state of one recipe. The cursor is the highest clause number the
// user has confirmed; edits before it are refused.
struct Session {
  std::string recipe_id;
  int64_t base_version = 0;
  size_t validated_cursor = 0;
  std::set<std::string> user_vertices;  // added or relabelled by hand
  std::set<Arc> user_arcs;
  std::set<Arc> removed_arcs;
  std::vector<EditOperation> edits;
};

nlohmann::json SessionToJson(const Session &session);
Session SessionFromJson(const nlohmann::json &doc);

// Clause number of `Clause:c_<n>`, or nullopt.
std::optional<size_t> ClauseIndex(std::string_view clause_id);

// Applies one edit to a copy of `graph`. On success bumps the version,
// advances the cursor and records the edit in `session`. Throws
// Error(kTextOrder) when the anchor lies before the cursor, Error(kTyping)
// for edits that break the typing rules, and leaves `session` untouched on
// any error.
RecipeGraph ApplyEdit(const RecipeGraph &graph, const EditOperation &edit, Session &session,
                      const Ontology &ontology);

struct VertexKey {
  std::string id;
  VertexKind kind = VertexKind::kFood;
  std::optional<std::string> concept_id;

  auto operator<=>(const VertexKey &) const = default;
  bool operator==(const VertexKey &) const = default;
};

struct ChangeSet {
  std::vector<VertexKey> added_vertices;
  std::vector<Arc> added_arcs;
  std::vector<VertexKey> removed_vertices;
  std::vector<Arc> removed_arcs;

  bool empty() const {
    return added_vertices.empty() && added_arcs.empty() && removed_vertices.empty() &&
           removed_arcs.empty();
  }
};

ChangeSet Diff(const RecipeGraph &before, const RecipeGraph &after);
nlohmann::json ChangeSetToJson(const ChangeSet &changes);

struct Repropagation {
  RecipeGraph graph;
  ChangeSet changes;
};

// Keeps everything up to the cursor and every hand-made element, then
// re-runs annotation on the clauses after the cursor. The version is bumped
// only when something changed.
Repropagation Repropagate(const Recipe &recipe, const RecipeGraph &graph, const Session &session,
                          const Ontology &ontology);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_CORRECTION_H_
