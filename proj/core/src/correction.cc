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

#include "recipegraph/correction.h"

#include <algorithm>

#include "recipegraph/error.h"

namespace recipegraph {
namespace {

constexpr std::pair<EditKind, std::string_view> kEditKinds[] = {
    {EditKind::kAddAction, "AddAction"}, {EditKind::kAddFood, "AddFood"},
    {EditKind::kAddArc, "AddArc"},       {EditKind::kRemoveArc, "RemoveArc"},
    {EditKind::kRemoveVertex, "RemoveVertex"}, {EditKind::kRelabel, "Relabel"}};

[[noreturn]] void Typing(const std::string &message) { throw Error(ErrorCode::kTyping, message); }

nlohmann::json ArcJson(const Arc &arc) {
  return {{"from", arc.from}, {"to", arc.to}, {"label", ArcLabelName(arc.label)}};
}

Arc ArcFromJson(const nlohmann::json &doc) {
  auto label = ParseArcLabel(doc.at("label").get<std::string>());
  if (!label) {
    throw Error(ErrorCode::kInvalidInput,
                "unknown arc label '" + doc.at("label").get<std::string>() + "'");
  }
  return {doc.at("from").get<std::string>(), doc.at("to").get<std::string>(), *label};
}

nlohmann::json VertexKeyJson(const VertexKey &key) {
  nlohmann::json doc{{"id", key.id}, {"kind", VertexKindName(key.kind)}};
  if (key.concept_id) doc["concept"] = *key.concept_id;
  return doc;
}

void CheckConcept(const Ontology &ontology, const std::string &concept_id, Hierarchy expected,
                  const std::string &what) {
  const Concept *c = ontology.Find(concept_id);
  if (!c) Typing(what + ": unknown concept '" + concept_id + "'");
  if (c->hierarchy != expected) {
    Typing(what + ": concept '" + concept_id + "' is not in the " +
           std::string(HierarchyName(expected)) + " hierarchy");
  }
}

}  // namespace

std::string_view EditKindName(EditKind kind) {
  for (const auto &[k, name] : kEditKinds) {
    if (k == kind) return name;
  }
  return "AddArc";
}

std::optional<EditKind> ParseEditKind(std::string_view name) {
  for (const auto &[k, n] : kEditKinds) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::optional<size_t> ClauseIndex(std::string_view clause_id) {
  constexpr std::string_view prefix = "Clause:c_";
  if (!clause_id.starts_with(prefix) || clause_id.size() == prefix.size()) return std::nullopt;
  size_t n = 0;
  for (char c : clause_id.substr(prefix.size())) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<size_t>(c - '0');
  }
  return n;
}

nlohmann::json EditToJson(const EditOperation &edit) {
  nlohmann::json payload = nlohmann::json::object();
  switch (edit.kind) {
    case EditKind::kAddAction:
    case EditKind::kAddFood:
    case EditKind::kRelabel:
    case EditKind::kRemoveVertex:
      if (!edit.id.empty()) payload["id"] = edit.id;
      if (edit.concept_id) payload["concept"] = *edit.concept_id;
      if (edit.origin) payload["origin"] = FoodOriginName(*edit.origin);
      break;
    case EditKind::kAddArc:
    case EditKind::kRemoveArc:
      payload = ArcJson(edit.arc);
      break;
  }
  nlohmann::json doc{{"kind", EditKindName(edit.kind)},
                     {"payload", std::move(payload)},
                     {"anchor_clause", edit.anchor_clause}};
  if (!edit.author.empty()) doc["author"] = edit.author;
  if (!edit.timestamp.empty()) doc["timestamp"] = edit.timestamp;
  return doc;
}

EditOperation EditFromJson(const nlohmann::json &doc) {
  try {
    EditOperation edit;
    const std::string kind = doc.at("kind").get<std::string>();
    auto parsed = ParseEditKind(kind);
    if (!parsed) throw Error(ErrorCode::kInvalidInput, "unknown edit kind '" + kind + "'");
    edit.kind = *parsed;
    edit.anchor_clause = doc.at("anchor_clause").get<std::string>();
    edit.author = doc.value("author", "");
    edit.timestamp = doc.value("timestamp", "");
    const nlohmann::json &payload = doc.at("payload");
    switch (edit.kind) {
      case EditKind::kAddArc:
      case EditKind::kRemoveArc:
        edit.arc = ArcFromJson(payload);
        break;
      default:
        edit.id = payload.value("id", "");
        if (payload.contains("concept")) edit.concept_id = payload["concept"].get<std::string>();
        if (payload.contains("origin")) {
          edit.origin = ParseFoodOrigin(payload["origin"].get<std::string>());
          if (!edit.origin) throw Error(ErrorCode::kInvalidInput, "unknown food origin");
        }
        break;
    }
    if ((edit.kind == EditKind::kAddAction || edit.kind == EditKind::kRelabel) &&
        !edit.concept_id) {
      throw Error(ErrorCode::kInvalidInput, kind + " needs payload.concept");
    }
    if ((edit.kind == EditKind::kRemoveVertex || edit.kind == EditKind::kRelabel) &&
        edit.id.empty()) {
      throw Error(ErrorCode::kInvalidInput, kind + " needs payload.id");
    }
    return edit;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidInput, std::string("edit document: ") + e.what());
  }
}

nlohmann::json SessionToJson(const Session &session) {
  nlohmann::json user_arcs = nlohmann::json::array();
  for (const auto &arc : session.user_arcs) user_arcs.push_back(ArcJson(arc));
  nlohmann::json removed = nlohmann::json::array();
  for (const auto &arc : session.removed_arcs) removed.push_back(ArcJson(arc));
  nlohmann::json edits = nlohmann::json::array();
  for (const auto &edit : session.edits) edits.push_back(EditToJson(edit));
  return {{"recipe_id", session.recipe_id},
          {"base_version", session.base_version},
          {"validated_cursor", session.validated_cursor},
          {"user_vertices", session.user_vertices},
          {"user_arcs", std::move(user_arcs)},
          {"removed_arcs", std::move(removed)},
          {"edits", std::move(edits)}};
}

Session SessionFromJson(const nlohmann::json &doc) {
  try {
    Session session;
    session.recipe_id = doc.at("recipe_id").get<std::string>();
    session.base_version = doc.at("base_version").get<int64_t>();
    session.validated_cursor = doc.at("validated_cursor").get<size_t>();
    session.user_vertices = doc.value("user_vertices", std::set<std::string>{});
    for (const auto &a : doc.value("user_arcs", nlohmann::json::array())) {
      session.user_arcs.insert(ArcFromJson(a));
    }
    for (const auto &a : doc.value("removed_arcs", nlohmann::json::array())) {
      session.removed_arcs.insert(ArcFromJson(a));
    }
    for (const auto &e : doc.value("edits", nlohmann::json::array())) {
      session.edits.push_back(EditFromJson(e));
    }
    return session;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidInput, std::string("session document: ") + e.what());
  }
}

RecipeGraph ApplyEdit(const RecipeGraph &graph, const EditOperation &edit, Session &session,
                      const Ontology &ontology) {
  const auto anchor = ClauseIndex(edit.anchor_clause);
  const Vertex *anchor_vertex = graph.FindVertex(edit.anchor_clause);
  if (!anchor || !anchor_vertex || anchor_vertex->kind != VertexKind::kClause) {
    throw Error(ErrorCode::kInvalidInput,
                "anchor clause '" + edit.anchor_clause + "' is not a clause of the graph");
  }
  if (*anchor < session.validated_cursor) {
    throw Error(ErrorCode::kTextOrder,
                "edit anchored at " + edit.anchor_clause + " but clauses up to c_" +
                    std::to_string(session.validated_cursor) + " are already confirmed");
  }

  RecipeGraph g = graph;
  Session s = session;
  try {
    switch (edit.kind) {
      case EditKind::kAddAction: {
        CheckConcept(ontology, *edit.concept_id, Hierarchy::kAction, "AddAction");
        const std::string lexeme = ToLower(*edit.concept_id);
        std::string id = edit.id;
        if (id.empty()) {
          id = "Action:" + lexeme + "_" + std::to_string(*anchor);
          if (g.FindVertex(id)) id = g.NewId(VertexKind::kAction, lexeme);
        }
        g.AddVertex({id, VertexKind::kAction, edit.concept_id, std::nullopt, std::nullopt});
        s.user_vertices.insert(id);
        break;
      }
      case EditKind::kAddFood: {
        if (edit.concept_id) CheckConcept(ontology, *edit.concept_id, Hierarchy::kFood, "AddFood");
        std::string id = edit.id;
        if (id.empty()) {
          id = g.NewId(VertexKind::kFood,
                       edit.concept_id ? ontology.Lexeme(*edit.concept_id) : "food");
        }
        g.AddVertex({id, VertexKind::kFood, edit.concept_id,
                     edit.origin.value_or(FoodOrigin::kUserAdded), std::nullopt});
        s.user_vertices.insert(id);
        break;
      }
      case EditKind::kAddArc:
        g.AddArc(edit.arc);
        s.user_arcs.insert(edit.arc);
        s.removed_arcs.erase(edit.arc);
        break;
      case EditKind::kRemoveArc:
        g.RemoveArc(edit.arc);
        s.removed_arcs.insert(edit.arc);
        s.user_arcs.erase(edit.arc);
        break;
      case EditKind::kRemoveVertex: {
        const Vertex &v = g.GetVertex(edit.id);
        if (v.kind == VertexKind::kClause) Typing("clause vertices come from the text and cannot be removed");
        for (const auto &arc : g.OutArcs(edit.id)) s.removed_arcs.insert(arc);
        for (const auto &arc : g.InArcs(edit.id)) s.removed_arcs.insert(arc);
        std::erase_if(s.user_arcs,
                      [&](const Arc &a) { return a.from == edit.id || a.to == edit.id; });
        s.user_vertices.erase(edit.id);
        g.RemoveVertex(edit.id);
        break;
      }
      case EditKind::kRelabel: {
        const Vertex &v = g.GetVertex(edit.id);
        if (v.kind == VertexKind::kClause) Typing("clause vertices have no concept");
        CheckConcept(ontology, *edit.concept_id,
                     v.kind == VertexKind::kAction ? Hierarchy::kAction : Hierarchy::kFood,
                     "Relabel");
        g.SetConcept(edit.id, edit.concept_id);
        s.user_vertices.insert(edit.id);
        break;
      }
    }
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kNotFound) throw Error(ErrorCode::kTyping, e.what());
    throw;
  }

  g.set_version(graph.version() + 1);
  if (s.recipe_id.empty()) s.recipe_id = graph.recipe_id();
  s.validated_cursor = std::max(s.validated_cursor, *anchor);
  s.base_version = g.version();
  s.edits.push_back(edit);
  session = std::move(s);
  return g;
}

ChangeSet Diff(const RecipeGraph &before, const RecipeGraph &after) {
  auto keys = [](const RecipeGraph &g) {
    std::set<VertexKey> out;
    for (const auto &[id, v] : g.vertices()) out.insert({id, v.kind, v.concept_id});
    return out;
  };
  const auto a = keys(before);
  const auto b = keys(after);
  ChangeSet changes;
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                      std::back_inserter(changes.added_vertices));
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(changes.removed_vertices));
  std::set_difference(after.arcs().begin(), after.arcs().end(), before.arcs().begin(),
                      before.arcs().end(), std::back_inserter(changes.added_arcs));
  std::set_difference(before.arcs().begin(), before.arcs().end(), after.arcs().begin(),
                      after.arcs().end(), std::back_inserter(changes.removed_arcs));
  return changes;
}

nlohmann::json ChangeSetToJson(const ChangeSet &changes) {
  auto side = [](const std::vector<VertexKey> &vertices, const std::vector<Arc> &arcs) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto &key : vertices) v.push_back(VertexKeyJson(key));
    nlohmann::json a = nlohmann::json::array();
    for (const auto &arc : arcs) a.push_back(ArcJson(arc));
    return nlohmann::json{{"vertices", std::move(v)}, {"arcs", std::move(a)}};
  };
  return {{"added", side(changes.added_vertices, changes.added_arcs)},
          {"removed", side(changes.removed_vertices, changes.removed_arcs)}};
}

Repropagation Repropagate(const Recipe &recipe, const RecipeGraph &graph, const Session &session,
                          const Ontology &ontology) {
  Annotator annotator(recipe, ontology);
  annotator.BlockArcs(session.removed_arcs);
  const size_t cursor = session.validated_cursor;

  std::set<std::string> frozen;
  std::vector<std::pair<size_t, std::string>> frozen_actions;
  for (const auto &[id, v] : graph.vertices()) {
    bool keep = session.user_vertices.count(id) > 0;
    if (v.kind == VertexKind::kClause) keep = true;
    if (v.kind == VertexKind::kFood && v.origin == FoodOrigin::kIngredientList) keep = true;
    if (v.kind == VertexKind::kAction) {
      auto clause = graph.ClauseOf(id);
      auto n = clause ? ClauseIndex(*clause) : std::nullopt;
      if (n && *n <= cursor) keep = true;
      if (keep) frozen_actions.emplace_back(n.value_or(0), id);
    }
    if (keep) frozen.insert(id);
  }
  for (const auto &[n, action] : frozen_actions) {
    for (const auto &out : graph.OutputsOf(action)) frozen.insert(out);
    for (const auto &in : graph.InputsOf(action)) {
      if (graph.GetVertex(in).origin == FoodOrigin::kTextMention) frozen.insert(in);
    }
  }
  for (const auto &arc : session.user_arcs) {
    if (graph.FindVertex(arc.from) && graph.FindVertex(arc.to)) {
      frozen.insert(arc.from);
      frozen.insert(arc.to);
    }
  }
  std::sort(frozen_actions.begin(), frozen_actions.end());

  // Previous ids of generated vertices, by structural role.
  Annotator::IdHints hints;
  for (const auto &action : graph.VertexIds(VertexKind::kAction)) {
    const auto outputs = graph.OutputsOf(action);
    for (size_t k = 0; k < outputs.size(); ++k) {
      hints[IdRoleOutput(action, static_cast<int>(k))] = outputs[k];
    }
    for (const auto &in : graph.InputsOf(action)) {
      const Vertex &v = graph.GetVertex(in);
      if (v.origin == FoodOrigin::kTextMention && v.concept_id) {
        hints[IdRoleMention(action, *v.concept_id)] = in;
      }
    }
  }

  RecipeGraph next(graph.recipe_id());
  next.set_version(graph.version());
  for (const auto &[key, value] : graph.counters()) next.RestoreCounter(key, value);
  for (const auto &id : frozen) next.AddVertex(graph.GetVertex(id));
  for (const auto &arc : graph.arcs()) {
    if (frozen.count(arc.from) && frozen.count(arc.to)) next.AddArc(arc);
  }

  try {
    annotator.LinkTemporal(next, session.removed_arcs);
    for (const auto &[n, action] : frozen_actions) annotator.CompleteAction(next, action, &hints);
    for (const auto &clause : annotator.analysis().clauses) {
      if (clause.number <= cursor) continue;
      const std::string clause_id = "Clause:" + clause.id;
      if (!next.FindVertex(clause_id)) continue;
      const auto linked = next.InArcs(clause_id);
      if (std::any_of(linked.begin(), linked.end(), [](const Arc &a) {
            return a.label == ArcLabel::kIsRelatedToClause;
          })) {
        continue;
      }
      annotator.AnnotateClause(next, clause, &hints);
    }
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kTyping) throw Error(ErrorCode::kInternal, e.what());
    throw;
  }

  Repropagation result;
  result.changes = Diff(graph, next);
  if (result.changes.empty()) {
    result.graph = graph;
    return result;
  }
  next.set_version(graph.version() + 1);
  result.graph = std::move(next);
  return result;
}

}  // namespace recipegraph
