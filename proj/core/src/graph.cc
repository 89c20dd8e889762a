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

#include "recipegraph/graph.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "recipegraph/error.h"

namespace recipegraph {
namespace {

[[noreturn]] void Typing(const std::string &message) {
  throw Error(ErrorCode::kTyping, message);
}

// Splits "<Kind>:<lexeme>_<n>" into ("<Kind>:<lexeme>", n).
std::optional<std::pair<std::string, int64_t>> SplitId(std::string_view id) {
  size_t underscore = id.rfind('_');
  if (underscore == std::string_view::npos || underscore + 1 >= id.size()) {
    return std::nullopt;
  }
  int64_t n = 0;
  auto digits = id.substr(underscore + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return std::make_pair(std::string(id.substr(0, underscore)), n);
}

std::string EscapeDot(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string_view VertexKindName(VertexKind kind) {
  switch (kind) {
    case VertexKind::kAction: return "Action";
    case VertexKind::kFood: return "Food";
    case VertexKind::kClause: return "Clause";
  }
  return "Food";
}

std::optional<VertexKind> ParseVertexKind(std::string_view name) {
  if (name == "Action") return VertexKind::kAction;
  if (name == "Food") return VertexKind::kFood;
  if (name == "Clause") return VertexKind::kClause;
  return std::nullopt;
}

std::string_view FoodOriginName(FoodOrigin origin) {
  switch (origin) {
    case FoodOrigin::kIngredientList: return "ingredient-list";
    case FoodOrigin::kActionOutput: return "action-output";
    case FoodOrigin::kUserAdded: return "user-added";
    case FoodOrigin::kTextMention: return "text-mention";
  }
  return "user-added";
}

std::optional<FoodOrigin> ParseFoodOrigin(std::string_view name) {
  if (name == "ingredient-list") return FoodOrigin::kIngredientList;
  if (name == "action-output") return FoodOrigin::kActionOutput;
  if (name == "user-added") return FoodOrigin::kUserAdded;
  if (name == "text-mention") return FoodOrigin::kTextMention;
  return std::nullopt;
}

std::string_view ArcLabelName(ArcLabel label) {
  switch (label) {
    case ArcLabel::kHasDOInput: return "hasDOInput";
    case ArcLabel::kHasPCInput: return "hasPCInput";
    case ArcLabel::kHasOutput: return "hasOutput";
    case ArcLabel::kIsBefore: return "isBefore";
    case ArcLabel::kIsDuring: return "isDuring";
    case ArcLabel::kIsRelatedToClause: return "isRelatedToClause";
  }
  return "hasOutput";
}

std::optional<ArcLabel> ParseArcLabel(std::string_view name) {
  for (ArcLabel label : {ArcLabel::kHasDOInput, ArcLabel::kHasPCInput,
                         ArcLabel::kHasOutput, ArcLabel::kIsBefore,
                         ArcLabel::kIsDuring, ArcLabel::kIsRelatedToClause}) {
    if (ArcLabelName(label) == name) return label;
  }
  return std::nullopt;
}

std::string ArcToString(const Arc &arc) {
  return arc.from + " -" + std::string(ArcLabelName(arc.label)) + "-> " + arc.to;
}

// RecipeGraph ------------------------------------------------------------

const Vertex *RecipeGraph::FindVertex(std::string_view id) const {
  auto it = vertices_.find(id);
  return it == vertices_.end() ? nullptr : &it->second;
}

const Vertex &RecipeGraph::GetVertex(std::string_view id) const {
  const Vertex *v = FindVertex(id);
  if (!v) throw Error(ErrorCode::kNotFound, "unknown vertex '" + std::string(id) + "'");
  return *v;
}

std::string RecipeGraph::NewId(VertexKind kind, std::string_view lexeme) {
  std::string key = std::string(VertexKindName(kind)) + ":" + std::string(lexeme);
  int64_t n = ++counters_[key];
  while (vertices_.count(key + "_" + std::to_string(n))) n = ++counters_[key];
  return key + "_" + std::to_string(n);
}

void RecipeGraph::Touch(const std::string &id) {
  if (auto split = SplitId(id)) {
    int64_t &counter = counters_[split->first];
    counter = std::max(counter, split->second);
  }
}

void RecipeGraph::RestoreCounter(const std::string &key, int64_t value) {
  int64_t &counter = counters_[key];
  counter = std::max(counter, value);
}

void RecipeGraph::AddVertex(Vertex vertex) {
  const std::string prefix = std::string(VertexKindName(vertex.kind)) + ":";
  if (!vertex.id.starts_with(prefix) || !SplitId(vertex.id) ||
      vertex.id.size() <= prefix.size()) {
    Typing("vertex id '" + vertex.id + "' does not follow <" +
           std::string(VertexKindName(vertex.kind)) + ">:<lexeme>_<n>");
  }
  if (vertices_.count(vertex.id)) Typing("duplicate vertex id '" + vertex.id + "'");
  switch (vertex.kind) {
    case VertexKind::kAction:
      if (!vertex.concept_id) Typing("action vertex '" + vertex.id + "' needs a concept");
      if (vertex.origin || vertex.text_span) {
        Typing("action vertex '" + vertex.id + "' carries food/clause fields");
      }
      break;
    case VertexKind::kFood:
      if (!vertex.origin) Typing("food vertex '" + vertex.id + "' needs an origin");
      if (vertex.text_span) Typing("food vertex '" + vertex.id + "' carries a text span");
      break;
    case VertexKind::kClause:
      if (vertex.concept_id || vertex.origin) {
        Typing("clause vertex '" + vertex.id + "' carries action/food fields");
      }
      if (!vertex.text_span || vertex.text_span->start > vertex.text_span->end) {
        Typing("clause vertex '" + vertex.id + "' needs a valid text span");
      }
      break;
  }
  Touch(vertex.id);
  std::string id = vertex.id;
  vertices_.emplace(std::move(id), std::move(vertex));
}

void RecipeGraph::CheckArcTyping(const Arc &arc) const {
  const Vertex *from = FindVertex(arc.from);
  const Vertex *to = FindVertex(arc.to);
  if (!from || !to) Typing("arc endpoint missing: " + ArcToString(arc));
  if (from->kind != VertexKind::kAction) {
    Typing("arc must start at an Action vertex: " + ArcToString(arc));
  }
  switch (arc.label) {
    case ArcLabel::kHasDOInput:
    case ArcLabel::kHasPCInput:
    case ArcLabel::kHasOutput:
      if (to->kind != VertexKind::kFood) Typing("arc must end at a Food vertex: " + ArcToString(arc));
      break;
    case ArcLabel::kIsBefore:
    case ArcLabel::kIsDuring:
      if (to->kind != VertexKind::kAction) {
        Typing("temporal arc must end at an Action vertex: " + ArcToString(arc));
      }
      if (arc.from == arc.to) Typing("temporal self-loop: " + ArcToString(arc));
      break;
    case ArcLabel::kIsRelatedToClause:
      if (to->kind != VertexKind::kClause) {
        Typing("clause arc must end at a Clause vertex: " + ArcToString(arc));
      }
      break;
  }
}

void RecipeGraph::AddArc(const Arc &arc) {
  CheckArcTyping(arc);
  if (arcs_.count(arc)) Typing("duplicate arc: " + ArcToString(arc));
  arcs_.insert(arc);
}

void RecipeGraph::RemoveArc(const Arc &arc) {
  if (!arcs_.erase(arc)) {
    throw Error(ErrorCode::kNotFound, "no such arc: " + ArcToString(arc));
  }
}

void RecipeGraph::RemoveVertex(std::string_view id) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown vertex '" + std::string(id) + "'");
  }
  std::erase_if(arcs_, [&](const Arc &a) { return a.from == id || a.to == id; });
  vertices_.erase(it);
}

void RecipeGraph::SetConcept(std::string_view id, std::optional<std::string> concept_id) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown vertex '" + std::string(id) + "'");
  }
  if (it->second.kind == VertexKind::kClause) Typing("clause vertices have no concept");
  if (it->second.kind == VertexKind::kAction && !concept_id) {
    Typing("action vertex '" + it->first + "' needs a concept");
  }
  it->second.concept_id = std::move(concept_id);
}

std::vector<Arc> RecipeGraph::OutArcs(std::string_view id) const {
  std::vector<Arc> out;
  for (auto it = arcs_.lower_bound(Arc{std::string(id), "", ArcLabel::kHasDOInput});
       it != arcs_.end() && it->from == id; ++it) {
    out.push_back(*it);
  }
  return out;
}

std::vector<Arc> RecipeGraph::InArcs(std::string_view id) const {
  std::vector<Arc> out;
  for (const auto &arc : arcs_) {
    if (arc.to == id) out.push_back(arc);
  }
  return out;
}

std::vector<std::string> RecipeGraph::Targets(std::string_view action, ArcLabel label) const {
  std::vector<std::string> out;
  for (const auto &arc : OutArcs(action)) {
    if (arc.label == label) out.push_back(arc.to);
  }
  return out;
}

std::vector<std::string> RecipeGraph::InputsOf(std::string_view action) const {
  std::vector<std::string> out;
  for (const auto &arc : OutArcs(action)) {
    if (IsInputLabel(arc.label)) out.push_back(arc.to);
  }
  return out;
}

std::vector<std::string> RecipeGraph::OutputsOf(std::string_view action) const {
  return Targets(action, ArcLabel::kHasOutput);
}

std::optional<std::string> RecipeGraph::ClauseOf(std::string_view action) const {
  auto clauses = Targets(action, ArcLabel::kIsRelatedToClause);
  if (clauses.empty()) return std::nullopt;
  return clauses.front();
}

std::optional<std::string> RecipeGraph::ProducerOf(std::string_view food) const {
  for (const auto &arc : arcs_) {
    if (arc.to == food && arc.label == ArcLabel::kHasOutput) return arc.from;
  }
  return std::nullopt;
}

std::vector<std::string> RecipeGraph::ConsumersOf(std::string_view food) const {
  std::vector<std::string> out;
  for (const auto &arc : arcs_) {
    if (arc.to == food && IsInputLabel(arc.label)) out.push_back(arc.from);
  }
  return out;
}

std::vector<std::string> RecipeGraph::VertexIds(VertexKind kind) const {
  std::vector<std::string> out;
  for (const auto &[id, v] : vertices_) {
    if (v.kind == kind) out.push_back(id);
  }
  return out;
}

// Validation --------------------------------------------------------------

bool ValidationReport::HasRule(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation &v) { return v.rule == rule; });
}

std::vector<std::vector<std::string>> Components(const RecipeGraph &graph) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, size_t> slot;
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind == VertexKind::kClause) continue;
    slot[id] = ids.size();
    ids.push_back(id);
  }
  std::vector<size_t> parent(ids.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto &arc : graph.arcs()) {
    if (arc.label == ArcLabel::kIsRelatedToClause) continue;
    auto a = slot.find(arc.from);
    auto b = slot.find(arc.to);
    if (a == slot.end() || b == slot.end()) continue;
    parent[find(a->second)] = find(b->second);
  }
  std::map<size_t, std::vector<std::string>> groups;
  for (size_t i = 0; i < ids.size(); ++i) groups[find(i)].push_back(ids[i]);
  std::vector<std::vector<std::string>> out;
  for (auto &[root, members] : groups) out.push_back(std::move(members));
  // Largest first; ties by smallest member id.
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

size_t CountComponents(const RecipeGraph &graph) { return Components(graph).size(); }

namespace {

// Actions left over by Kahn's algorithm on isBefore/isDuring, i.e. those on
// or behind a cycle.
std::vector<std::string> TemporalCycleMembers(const RecipeGraph &graph) {
  std::map<std::string, int> indegree;
  for (const auto &id : graph.VertexIds(VertexKind::kAction)) indegree[id] = 0;
  for (const auto &arc : graph.arcs()) {
    if (IsTemporalLabel(arc.label)) ++indegree[arc.to];
  }
  std::deque<std::string> ready;
  for (const auto &[id, d] : indegree) {
    if (d == 0) ready.push_back(id);
  }
  while (!ready.empty()) {
    std::string cur = ready.front();
    ready.pop_front();
    for (const auto &arc : graph.OutArcs(cur)) {
      if (IsTemporalLabel(arc.label) && --indegree[arc.to] == 0) ready.push_back(arc.to);
    }
    indegree.erase(cur);
  }
  std::vector<std::string> out;
  for (const auto &[id, d] : indegree) out.push_back(id);
  return out;
}

}  // namespace

ValidationReport Validate(const RecipeGraph &graph, const Ontology &ontology) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string message, std::vector<std::string> ids,
                 Severity severity = Severity::kError) {
    report.violations.push_back({std::move(rule), std::move(message), std::move(ids), severity});
  };

  const auto actions = graph.VertexIds(VertexKind::kAction);
  report.action_count = actions.size();
  report.vertex_count = graph.vertices().size();
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind == VertexKind::kFood && v.origin == FoodOrigin::kIngredientList) {
      ++report.ingredient_count;
    }
    if (v.kind != VertexKind::kClause && v.concept_id) {
      const Concept *c = ontology.Find(*v.concept_id);
      Hierarchy expected = v.kind == VertexKind::kAction ? Hierarchy::kAction : Hierarchy::kFood;
      if (!c || c->hierarchy != expected) {
        add("V0", "concept '" + *v.concept_id + "' is not in the " +
                      std::string(HierarchyName(expected)) + " hierarchy",
            {id});
      }
    }
    if (v.kind == VertexKind::kFood && v.origin == FoodOrigin::kTextMention) {
      add("V7", "food mentioned in the text is neither listed nor produced", {id},
          Severity::kWarning);
    }
  }

  bool own_clause_and_output = true;
  std::map<std::string, int> clause_use, output_use;
  for (const auto &action : actions) {
    const Vertex &v = graph.GetVertex(action);
    const ActionSchema *schema = v.concept_id ? ontology.Schema(*v.concept_id) : nullptr;
    const auto inputs = graph.InputsOf(action);
    const auto outputs = graph.OutputsOf(action);
    const auto clauses = graph.Targets(action, ArcLabel::kIsRelatedToClause);
    if (!schema) {
      add("V1", "action has no schema in the ontology", {action});
    } else {
      if (inputs.empty() && !schema->RequiresNoInput()) {
        add("V1", "action has no input although its schema requires one", {action});
      }
      if (static_cast<int>(outputs.size()) != schema->output_count) {
        add("V2", "action has " + std::to_string(outputs.size()) + " outputs, expected " +
                      std::to_string(schema->output_count),
            {action});
      }
    }
    if (clauses.size() != 1) {
      add("V3", "action is related to " + std::to_string(clauses.size()) +
                    " clauses, expected exactly one",
          {action});
    }
    if (clauses.size() != 1 || outputs.empty()) own_clause_and_output = false;
    for (const auto &c : clauses) ++clause_use[c];
    for (const auto &o : outputs) ++output_use[o];
  }
  for (const auto &[id, n] : clause_use) {
    if (n > 1) own_clause_and_output = false;
  }
  for (const auto &[id, n] : output_use) {
    if (n > 1) own_clause_and_output = false;
  }

  if (auto cyclic = TemporalCycleMembers(graph); !cyclic.empty()) {
    add("V4", "isBefore/isDuring relation is cyclic", std::move(cyclic));
  }

  auto components = Components(graph);
  report.component_count = components.size();
  if (components.size() > 1) {
    std::vector<std::string> stray;
    for (size_t i = 1; i < components.size(); ++i) {
      stray.insert(stray.end(), components[i].begin(), components[i].end());
    }
    std::sort(stray.begin(), stray.end());
    add("V5", "graph has " + std::to_string(components.size()) + " connected components",
        std::move(stray));
  }

  if (own_clause_and_output && report.action_count > 0) {
    const size_t bound = 3 * report.action_count + report.ingredient_count;
    if (report.vertex_count < bound) {
      add("V6", "vertex count " + std::to_string(report.vertex_count) + " below 3a+i = " +
                    std::to_string(bound),
          {}, Severity::kWarning);
    }
  }
  return report;
}

// Availability ----------------------------------------------------------

namespace {

// Transitive isBefore neighbours of `action`: predecessors, or successors
// when `forward`.
std::set<std::string> TemporalReach(const RecipeGraph &graph, std::string_view action,
                                    bool forward) {
  const Vertex &v = graph.GetVertex(action);
  if (v.kind != VertexKind::kAction) {
    throw Error(ErrorCode::kInvalidInput, "'" + v.id + "' is not an action");
  }
  if (!TemporalCycleMembers(graph).empty()) {
    throw Error(ErrorCode::kInvalidInput, "cyclic temporal order");
  }
  std::map<std::string, std::vector<std::string>> next;
  for (const auto &arc : graph.arcs()) {
    if (arc.label != ArcLabel::kIsBefore) continue;
    if (forward) {
      next[arc.from].push_back(arc.to);
    } else {
      next[arc.to].push_back(arc.from);
    }
  }
  std::set<std::string> reached;
  std::vector<std::string> stack{std::string(action)};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    for (const auto &p : next[cur]) {
      if (reached.insert(p).second) stack.push_back(p);
    }
  }
  return reached;
}

}  // namespace

std::set<std::string> ActionsBefore(const RecipeGraph &graph, std::string_view action) {
  return TemporalReach(graph, action, false);
}

std::set<std::string> ActionsAfter(const RecipeGraph &graph, std::string_view action) {
  return TemporalReach(graph, action, true);
}

std::set<std::string> AvailabilityFrontier(const RecipeGraph &graph, std::string_view at) {
  std::set<std::string> before;
  std::set<std::string> after;
  if (at == kEnd) {
    if (!TemporalCycleMembers(graph).empty()) {
      throw Error(ErrorCode::kInvalidInput, "cyclic temporal order");
    }
    auto all = graph.VertexIds(VertexKind::kAction);
    before.insert(all.begin(), all.end());
  } else {
    before = ActionsBefore(graph, at);
    after = ActionsAfter(graph, at);
  }

  // A food is only known to be there if every consumer is sure to run later.
  // Consumers that are unordered with `at` may already have used it.
  std::set<std::string> consumed;
  for (const auto &arc : graph.arcs()) {
    if (!IsInputLabel(arc.label) || arc.from == at || after.count(arc.from)) continue;
    consumed.insert(arc.to);
  }
  std::set<std::string> frontier;
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind != VertexKind::kFood || consumed.count(id)) continue;
    auto producer = graph.ProducerOf(id);
    if (!producer || before.count(*producer)) frontier.insert(id);
  }
  return frontier;
}

RecipeGraph Zoom(const RecipeGraph &graph, std::string_view focus) {
  const Vertex &v = graph.GetVertex(focus);
  if (v.kind != VertexKind::kAction) {
    throw Error(ErrorCode::kInvalidInput, "zoom focus '" + v.id + "' is not an action");
  }
  std::set<std::string> keep{v.id};
  if (auto clause = graph.ClauseOf(focus)) keep.insert(*clause);
  for (const auto &f : graph.InputsOf(focus)) keep.insert(f);
  for (const auto &f : graph.OutputsOf(focus)) keep.insert(f);
  for (const auto &f : AvailabilityFrontier(graph, focus)) keep.insert(f);

  RecipeGraph sub(graph.recipe_id());
  sub.set_version(graph.version());
  for (const auto &id : keep) sub.AddVertex(graph.GetVertex(id));
  for (const auto &arc : graph.arcs()) {
    if (keep.count(arc.from) && keep.count(arc.to)) sub.AddArc(arc);
  }
  return sub;
}

// Serialization ---------------------------------------------------------

nlohmann::json GraphToJson(const RecipeGraph &graph) {
  nlohmann::json doc;
  doc["recipe_id"] = graph.recipe_id();
  doc["version"] = graph.version();
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto &[id, v] : graph.vertices()) {
    nlohmann::json jv;
    jv["id"] = id;
    jv["kind"] = VertexKindName(v.kind);
    if (v.concept_id) jv["concept"] = *v.concept_id;
    if (v.origin) jv["origin"] = FoodOriginName(*v.origin);
    if (v.text_span) jv["text_span"] = {{"start", v.text_span->start}, {"end", v.text_span->end}};
    vertices.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vertices);
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto &arc : graph.arcs()) {
    arcs.push_back({{"from", arc.from}, {"to", arc.to}, {"label", ArcLabelName(arc.label)}});
  }
  doc["arcs"] = std::move(arcs);
  if (!graph.counters().empty()) doc["counters"] = graph.counters();
  return doc;
}

RecipeGraph GraphFromJson(const nlohmann::json &doc) {
  auto invalid = [](const std::string &message) {
    return Error(ErrorCode::kInvalidInput, "graph document: " + message);
  };
  if (!doc.is_object()) throw invalid("not an object");
  try {
    RecipeGraph graph(doc.value("recipe_id", ""));
    graph.set_version(doc.value("version", int64_t{0}));
    for (const auto &jv : doc.at("vertices")) {
      Vertex v;
      v.id = jv.at("id").get<std::string>();
      auto kind = ParseVertexKind(jv.at("kind").get<std::string>());
      if (!kind) throw invalid("unknown vertex kind for '" + v.id + "'");
      v.kind = *kind;
      if (jv.contains("concept")) v.concept_id = jv["concept"].get<std::string>();
      if (jv.contains("origin")) {
        auto origin = ParseFoodOrigin(jv["origin"].get<std::string>());
        if (!origin) throw invalid("unknown food origin for '" + v.id + "'");
        v.origin = *origin;
      }
      if (jv.contains("text_span")) {
        v.text_span = TextSpan{jv["text_span"].at("start").get<size_t>(),
                               jv["text_span"].at("end").get<size_t>()};
      }
      graph.AddVertex(std::move(v));
    }
    for (const auto &ja : doc.at("arcs")) {
      auto label = ParseArcLabel(ja.at("label").get<std::string>());
      if (!label) throw invalid("unknown arc label '" + ja.at("label").get<std::string>() + "'");
      graph.AddArc({ja.at("from").get<std::string>(), ja.at("to").get<std::string>(), *label});
    }
    if (doc.contains("counters")) {
      for (const auto &[key, value] : doc["counters"].items()) {
        graph.RestoreCounter(key, value.get<int64_t>());
      }
    }
    return graph;
  } catch (const nlohmann::json::exception &e) {
    throw invalid(e.what());
  }
}

std::string ExportDot(const RecipeGraph &graph) {
  std::ostringstream out;
  out << "digraph \"" << EscapeDot(graph.recipe_id()) << "\" {\n";
  out << "  rankdir=LR;\n";
  for (const auto &[id, v] : graph.vertices()) {
    std::string shape = v.kind == VertexKind::kAction ? "box"
                        : v.kind == VertexKind::kFood ? "ellipse"
                                                      : "note";
    std::string label = id;
    if (v.concept_id) label += "\\n" + EscapeDot(*v.concept_id);
    out << "  \"" << EscapeDot(id) << "\" [shape=" << shape << ", label=\"" << label
        << "\"];\n";
  }
  for (const auto &arc : graph.arcs()) {
    out << "  \"" << EscapeDot(arc.from) << "\" -> \"" << EscapeDot(arc.to)
        << "\" [label=\"" << ArcLabelName(arc.label) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::json ReportToJson(const ValidationReport &report) {
  nlohmann::json doc;
  nlohmann::json violations = nlohmann::json::array();
  for (const auto &v : report.violations) {
    violations.push_back({{"rule", v.rule},
                          {"message", v.message},
                          {"ids", v.ids},
                          {"severity", v.severity == Severity::kError ? "error" : "warning"}});
  }
  doc["violations"] = std::move(violations);
  doc["component_count"] = report.component_count;
  doc["action_count"] = report.action_count;
  doc["ingredient_count"] = report.ingredient_count;
  doc["vertex_count"] = report.vertex_count;
  return doc;
}

// Isomorphism -------------------------------------------------------------

namespace {

std::string BaseLabel(const Vertex &v, bool compare_spans) {
  std::string label(VertexKindName(v.kind));
  label += '|';
  if (v.concept_id) label += *v.concept_id;
  label += '|';
  if (v.origin) label += FoodOriginName(*v.origin);
  if (compare_spans && v.text_span) {
    label += '|' + std::to_string(v.text_span->start) + ',' + std::to_string(v.text_span->end);
  }
  return label;
}

// Weisfeiler-Lehman colour refinement; colours are comparable across the
// two graphs because they share one palette.
std::pair<std::map<std::string, int>, std::map<std::string, int>> RefineColours(
    const RecipeGraph &a, const RecipeGraph &b, bool compare_spans) {
  std::map<std::string, int> ca, cb;
  std::map<std::string, int> palette;
  auto intern = [&](const std::string &key) {
    return palette.emplace(key, static_cast<int>(palette.size())).first->second;
  };
  for (const auto &[id, v] : a.vertices()) ca[id] = intern(BaseLabel(v, compare_spans));
  for (const auto &[id, v] : b.vertices()) cb[id] = intern(BaseLabel(v, compare_spans));

  auto signature = [](const RecipeGraph &g, const std::map<std::string, int> &colours,
                      const std::string &id) {
    std::vector<std::string> parts;
    for (const auto &arc : g.arcs()) {
      if (arc.from == id) {
        parts.push_back("o" + std::string(ArcLabelName(arc.label)) + std::to_string(colours.at(arc.to)));
      }
      if (arc.to == id) {
        parts.push_back("i" + std::string(ArcLabelName(arc.label)) + std::to_string(colours.at(arc.from)));
      }
    }
    std::sort(parts.begin(), parts.end());
    std::string sig = std::to_string(colours.at(id)) + "/";
    for (const auto &p : parts) sig += p + ";";
    return sig;
  };

  size_t classes = 0;
  for (int round = 0; round < 64; ++round) {
    palette.clear();
    std::map<std::string, int> na, nb;
    for (const auto &[id, v] : a.vertices()) na[id] = intern(signature(a, ca, id));
    for (const auto &[id, v] : b.vertices()) nb[id] = intern(signature(b, cb, id));
    ca = std::move(na);
    cb = std::move(nb);
    if (palette.size() == classes) break;
    classes = palette.size();
  }
  return {ca, cb};
}

}  // namespace

bool EquivalentUpToIds(const RecipeGraph &a, const RecipeGraph &b, bool compare_spans) {
  if (a.vertices().size() != b.vertices().size() || a.arcs().size() != b.arcs().size()) {
    return false;
  }
  auto [ca, cb] = RefineColours(a, b, compare_spans);
  std::map<int, int> hist;
  for (const auto &[id, c] : ca) ++hist[c];
  for (const auto &[id, c] : cb) --hist[c];
  for (const auto &[c, n] : hist) {
    if (n != 0) return false;
  }

  std::vector<std::string> order;
  for (const auto &[id, v] : a.vertices()) order.push_back(id);
  std::map<std::string, std::string> forward;
  std::set<std::string> used;

  auto consistent = [&](const std::string &va, const std::string &vb) {
    for (const auto &arc : a.arcs()) {
      const bool from_here = arc.from == va;
      const bool to_here = arc.to == va;
      if (!from_here && !to_here) continue;
      const std::string &other = from_here ? arc.to : arc.from;
      auto mapped = other == va ? std::optional<std::string>(vb)
                                : (forward.count(other) ? std::optional<std::string>(forward[other])
                                                        : std::nullopt);
      if (!mapped) continue;
      Arc image = from_here ? Arc{vb, *mapped, arc.label} : Arc{*mapped, vb, arc.label};
      if (!b.HasArc(image)) return false;
    }
    return true;
  };

  std::function<bool(size_t)> search = [&](size_t k) {
    if (k == order.size()) return true;
    const std::string &va = order[k];
    for (const auto &[vb, colour] : cb) {
      if (colour != ca[va] || used.count(vb)) continue;
      if (!consistent(va, vb)) continue;
      forward[va] = vb;
      used.insert(vb);
      if (search(k + 1)) return true;
      forward.erase(va);
      used.erase(vb);
    }
    return false;
  };
  return search(0);
}

}  // namespace recipegraph
