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

#ifndef RECIPEGRAPH_GRAPH_H_
#define RECIPEGRAPH_GRAPH_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "recipegraph/ontology.h"

namespace recipegraph {

enum class VertexKind { kAction, kFood, kClause };

enum class FoodOrigin { kIngredientList, kActionOutput, kUserAdded, kTextMention };

enum class ArcLabel {
  kHasDOInput,
  kHasPCInput,
  kHasOutput,
  kIsBefore,
  kIsDuring,
  kIsRelatedToClause,
};

std::string_view VertexKindName(VertexKind kind);
std::optional<VertexKind> ParseVertexKind(std::string_view name);
std::string_view FoodOriginName(FoodOrigin origin);
std::optional<FoodOrigin> ParseFoodOrigin(std::string_view name);
std::string_view ArcLabelName(ArcLabel label);
std::optional<ArcLabel> ParseArcLabel(std::string_view name);

inline bool IsInputLabel(ArcLabel label) {
  return label == ArcLabel::kHasDOInput || label == ArcLabel::kHasPCInput;
}
inline bool IsTemporalLabel(ArcLabel label) {
  return label == ArcLabel::kIsBefore || label == ArcLabel::kIsDuring;
}

struct TextSpan {
  size_t start = 0;
  size_t end = 0;

  bool operator==(const TextSpan &) const = default;
};

// Ids follow `<Kind>:<lexeme>_<n>`, e.g. Action:cream_4, Food:butter_1,
// Clause:c_3.
struct Vertex {
  std::string id;
  VertexKind kind = VertexKind::kFood;
  std::optional<std::string> concept_id;  // Action/Food only; absent for mixtures
  std::optional<FoodOrigin> origin;       // Food only
  std::optional<TextSpan> text_span;      // Clause only

  bool operator==(const Vertex &) const = default;
};

// All arcs are sourced at an Action vertex.
struct Arc {
  std::string from;
  std::string to;
  ArcLabel label = ArcLabel::kHasOutput;

  auto operator<=>(const Arc &) const = default;
  bool operator==(const Arc &) const = default;
};

std::string ArcToString(const Arc &arc);

// The case representation of one recipe. A value type: copy to snapshot.
// Mutators validate first and leave the graph untouched when they throw.
class RecipeGraph {
 public:
  RecipeGraph() = default;
  explicit RecipeGraph(std::string recipe_id) : recipe_id_(std::move(recipe_id)) {}

  const std::string &recipe_id() const { return recipe_id_; }
  int64_t version() const { return version_; }
  void set_version(int64_t version) { version_ = version; }

  const std::map<std::string, Vertex, std::less<>> &vertices() const { return vertices_; }
  const std::set<Arc> &arcs() const { return arcs_; }
  const std::map<std::string, int64_t> &counters() const { return counters_; }

  bool empty() const { return vertices_.empty(); }
  const Vertex *FindVertex(std::string_view id) const;
  // Throws Error(kNotFound).
  const Vertex &GetVertex(std::string_view id) const;
  bool HasArc(const Arc &arc) const { return arcs_.count(arc) > 0; }

  // Reserves the next `<Kind>:<lexeme>_<n>` id. Counters are never rewound,
  // so ids stay unique across deletions.
  std::string NewId(VertexKind kind, std::string_view lexeme);

  void AddVertex(Vertex vertex);
  void AddArc(const Arc &arc);
  void RemoveArc(const Arc &arc);
  // Also removes incident arcs.
  void RemoveVertex(std::string_view id);
  void SetConcept(std::string_view id, std::optional<std::string> concept_id);

  // Throws Error(kTyping) when `arc` would violate the label/endpoint rules.
  void CheckArcTyping(const Arc &arc) const;

  std::vector<Arc> OutArcs(std::string_view id) const;
  std::vector<Arc> InArcs(std::string_view id) const;
  std::vector<std::string> Targets(std::string_view action, ArcLabel label) const;
  std::vector<std::string> InputsOf(std::string_view action) const;
  std::vector<std::string> OutputsOf(std::string_view action) const;
  std::optional<std::string> ClauseOf(std::string_view action) const;
  std::optional<std::string> ProducerOf(std::string_view food) const;
  std::vector<std::string> ConsumersOf(std::string_view food) const;
  std::vector<std::string> VertexIds(VertexKind kind) const;

  // Content equality (ignores version and counters).
  bool SameContent(const RecipeGraph &other) const {
    return vertices_ == other.vertices_ && arcs_ == other.arcs_;
  }

  void RestoreCounter(const std::string &key, int64_t value);

 private:
  void Touch(const std::string &id);

  std::string recipe_id_;
  int64_t version_ = 0;
  std::map<std::string, Vertex, std::less<>> vertices_;
  std::set<Arc> arcs_;
  std::map<std::string, int64_t> counters_;  // "<Kind>:<lexeme>" -> last n
};

// Validation --------------------------------------------------------------

enum class Severity { kError, kWarning };

struct Violation {
  std::string rule;  // V0..V7
  std::string message;
  std::vector<std::string> ids;
  Severity severity = Severity::kError;
};

struct ValidationReport {
  std::vector<Violation> violations;
  size_t component_count = 0;
  size_t action_count = 0;
  size_t ingredient_count = 0;
  size_t vertex_count = 0;

  bool clean() const { return violations.empty(); }
  bool HasRule(std::string_view rule) const;
};

// Checks:
//   V0 concept unknown to the ontology (or wrong hierarchy)
//   V1 action without inputs although its schema requires some
//   V2 action without exactly output_count hasOutput arcs
//   V3 action without exactly one isRelatedToClause arc
//   V4 cycle in isBefore/isDuring
//   V5 more than one connected component (clauses ignored)
//   V6 vertex_count < 3a+i although every action has its own clause and
//      fresh output (warning)
//   V7 food mentioned in the text but neither listed nor produced (warning)
ValidationReport Validate(const RecipeGraph &graph, const Ontology &ontology);

// Number of connected components of the undirected action/food view.
size_t CountComponents(const RecipeGraph &graph);
std::vector<std::vector<std::string>> Components(const RecipeGraph &graph);

// Availability ----------------------------------------------------------

inline constexpr std::string_view kEnd = "end";

// Actions strictly before `action` in the transitive closure of isBefore.
// Throws Error(kInvalidInput) on a cyclic temporal order.
std::set<std::string> ActionsBefore(const RecipeGraph &graph, std::string_view action);
std::set<std::string> ActionsAfter(const RecipeGraph &graph, std::string_view action);

// Foods known to be available when `at` runs, whatever order the unordered
// actions take: listed (unproduced) or produced by an action strictly before
// `at`, and every consumer other than `at` strictly after it. `at` is an
// action id or kEnd.
std::set<std::string> AvailabilityFrontier(const RecipeGraph &graph, std::string_view at);

// Sub-graph centred on `focus`: the action, its clause, its inputs and
// outputs, and the foods available when it runs.
RecipeGraph Zoom(const RecipeGraph &graph, std::string_view focus);

// Serialization ---------------------------------------------------------

nlohmann::json GraphToJson(const RecipeGraph &graph);
// Throws Error(kInvalidInput) on malformed documents or unknown labels, and
// Error(kTyping) on arcs that break the typing rules.
RecipeGraph GraphFromJson(const nlohmann::json &doc);
std::string ExportDot(const RecipeGraph &graph);
nlohmann::json ReportToJson(const ValidationReport &report);

// Structural equality up to renaming of vertex ids. Vertices match on kind,
// concept and origin (and clause spans when `compare_spans`); arcs must
// correspond exactly under the renaming.
bool EquivalentUpToIds(const RecipeGraph &a, const RecipeGraph &b,
                       bool compare_spans = true);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_GRAPH_H_
