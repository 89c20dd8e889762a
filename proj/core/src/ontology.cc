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

#include "recipegraph/ontology.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

#include "recipegraph/error.h"

namespace recipegraph {
namespace {

constexpr std::array<std::string_view, kNumHierarchies> kHierarchyNames = {
    "food", "dish-type", "dish-moment", "location", "diet", "action"};

int Slot(Hierarchy hierarchy) { return static_cast<int>(hierarchy); }

[[noreturn]] void Invalid(const std::string &message) {
  throw Error(ErrorCode::kInvalidInput, "ontology: " + message);
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) words.push_back(ToLower(word));
  return words;
}

std::string JoinWords(const std::vector<std::string> &words, char sep) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += sep;
    out += words[i];
  }
  return out;
}

}  // namespace

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view HierarchyName(Hierarchy hierarchy) {
  return kHierarchyNames[Slot(hierarchy)];
}

std::optional<Hierarchy> ParseHierarchy(std::string_view name) {
  for (int i = 0; i < kNumHierarchies; ++i) {
    if (kHierarchyNames[i] == name) return static_cast<Hierarchy>(i);
  }
  return std::nullopt;
}

bool ActionSchema::AllowsPreposition(std::string_view word) const {
  return std::find(allowed_prepositions.begin(), allowed_prepositions.end(),
                   word) != allowed_prepositions.end();
}

std::optional<double> TargetSet::WeightOf(std::string_view concept_id) const {
  for (const auto &member : members) {
    if (member.concept_id == concept_id) return member.weight;
  }
  return std::nullopt;
}

Ontology Ontology::FromJson(const nlohmann::json &doc) {
  Ontology onto;
  if (!doc.is_object() || !doc.contains("hierarchies") ||
      !doc["hierarchies"].is_object()) {
    Invalid("missing hierarchy roots (no 'hierarchies' object)");
  }
  try {
    for (const auto &[name, records] : doc["hierarchies"].items()) {
      auto hierarchy = ParseHierarchy(name);
      if (!hierarchy) Invalid("unknown hierarchy '" + name + "'");
      for (const auto &record : records) {
        Concept c;
        c.id = record.at("id").get<std::string>();
        if (c.id.empty()) Invalid("empty concept id");
        c.hierarchy = *hierarchy;
        if (record.contains("parents")) {
          c.parents = record["parents"].get<std::vector<std::string>>();
        }
        if (record.contains("variants")) {
          for (const auto &v : record["variants"]) {
            auto words = SplitWords(v.get<std::string>());
            if (!words.empty()) c.lexical_variants.push_back(std::move(words));
          }
        }
        c.description = record.value("description", "");
        if (onto.concepts_.count(c.id)) Invalid("duplicate concept id '" + c.id + "'");
        std::string id = c.id;
        onto.concepts_.emplace(std::move(id), std::move(c));
      }
    }

    if (doc.contains("action_schemas")) {
      for (const auto &[id, record] : doc["action_schemas"].items()) {
        ActionSchema schema;
        schema.concept_id = id;
        schema.requires_direct_object = record.value("requires_do", false);
        schema.requires_prepositional_complement = record.value("requires_pc", false);
        if (record.contains("prepositions")) {
          for (const auto &p : record["prepositions"]) {
            schema.allowed_prepositions.push_back(ToLower(p.get<std::string>()));
          }
        }
        schema.output_count = record.value("output_count", 1);
        if (schema.output_count < 1) Invalid("output_count < 1 for '" + id + "'");
        onto.schemas_.emplace(id, std::move(schema));
      }
    }

    if (doc.contains("target_sets")) {
      for (const auto &[word, members] : doc["target_sets"].items()) {
        TargetSet set;
        set.trigger_word = ToLower(word);
        for (const auto &m : members) {
          TargetMember member;
          member.concept_id = m.at("concept").get<std::string>();
          member.weight = m.at("weight").get<double>();
          set.members.push_back(std::move(member));
        }
        onto.target_sets_.emplace(set.trigger_word, std::move(set));
      }
    }
  } catch (const nlohmann::json::exception &e) {
    Invalid(std::string("malformed document: ") + e.what());
  }

  // Parent references and roots.
  std::array<std::vector<std::string>, kNumHierarchies> roots;
  for (const auto &[id, c] : onto.concepts_) {
    if (c.parents.empty()) roots[Slot(c.hierarchy)].push_back(id);
    for (const auto &parent : c.parents) {
      auto it = onto.concepts_.find(parent);
      if (it == onto.concepts_.end()) {
        Invalid("dangling parent '" + parent + "' of '" + id + "'");
      }
      if (it->second.hierarchy != c.hierarchy) {
        Invalid("parent '" + parent + "' of '" + id + "' is in another hierarchy");
      }
    }
  }

  // Cycle detection by iterative DFS over parent links.
  {
    std::map<std::string_view, int> state;  // 0 new, 1 on stack, 2 done
    for (const auto &[start, unused] : onto.concepts_) {
      if (state[start] == 2) continue;
      std::vector<std::pair<std::string_view, size_t>> stack{{start, 0}};
      state[start] = 1;
      while (!stack.empty()) {
        auto &[node, next] = stack.back();
        const auto &parents = onto.concepts_.find(node)->second.parents;
        if (next < parents.size()) {
          std::string_view parent = parents[next++];
          int s = state[parent];
          if (s == 1) Invalid("cycle detected through '" + std::string(parent) + "'");
          if (s == 0) {
            state[parent] = 1;
            stack.emplace_back(parent, 0);
          }
        } else {
          state[node] = 2;
          stack.pop_back();
        }
      }
    }
  }

  for (int h = 0; h < kNumHierarchies; ++h) {
    if (roots[h].size() != 1) {
      Invalid("missing hierarchy roots: hierarchy '" +
              std::string(kHierarchyNames[h]) + "' has " +
              std::to_string(roots[h].size()) + " roots, expected 1");
    }
    onto.roots_[h] = roots[h].front();
  }

  for (const auto &[id, c] : onto.concepts_) {
    if (c.hierarchy == Hierarchy::kAction && !onto.schemas_.count(id)) {
      Invalid("action concept '" + id + "' has no schema");
    }
  }
  for (const auto &[id, schema] : onto.schemas_) {
    auto it = onto.concepts_.find(id);
    if (it == onto.concepts_.end() || it->second.hierarchy != Hierarchy::kAction) {
      Invalid("schema for '" + id + "' which is not an action concept");
    }
  }
  for (const auto &[word, set] : onto.target_sets_) {
    if (set.members.empty()) Invalid("target set '" + word + "' is empty");
    for (const auto &member : set.members) {
      auto it = onto.concepts_.find(member.concept_id);
      if (it == onto.concepts_.end() || it->second.hierarchy != Hierarchy::kFood) {
        Invalid("target set '" + word + "' member '" + member.concept_id +
                "' is not a food concept");
      }
      if (!(member.weight > 0.0 && member.weight <= 1.0)) {
        Invalid("target set '" + word + "' weight out of (0,1]");
      }
    }
  }

  onto.BuildDerived();
  return onto;
}

Ontology Ontology::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open ontology file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidInput,
                "ontology file " + path + " is not JSON: " + e.what());
  }
  return FromJson(doc);
}

void Ontology::BuildDerived() {
  for (const auto &[id, c] : concepts_) {
    children_[id];
    for (const auto &parent : c.parents) children_[parent].push_back(id);
  }
  for (auto &[id, kids] : children_) std::sort(kids.begin(), kids.end());

  for (const auto &[id, c] : concepts_) {
    std::set<std::string> &up = ancestors_[id];
    std::deque<std::string_view> queue{id};
    while (!queue.empty()) {
      std::string_view cur = queue.front();
      queue.pop_front();
      if (!up.emplace(cur).second) continue;
      for (const auto &parent : concepts_.find(cur)->second.parents) {
        queue.push_back(parent);
      }
    }
  }

  for (const auto &[id, c] : concepts_) {
    for (const auto &variant : c.lexical_variants) {
      index_[Slot(c.hierarchy)][variant.front()].push_back({variant, id});
    }
  }
}

nlohmann::json Ontology::ToJson() const {
  nlohmann::json doc;
  nlohmann::json hierarchies = nlohmann::json::object();
  for (int h = 0; h < kNumHierarchies; ++h) {
    hierarchies[std::string(kHierarchyNames[h])] = nlohmann::json::array();
  }
  for (const auto &[id, c] : concepts_) {
    nlohmann::json record;
    record["id"] = id;
    record["parents"] = c.parents;
    nlohmann::json variants = nlohmann::json::array();
    for (const auto &v : c.lexical_variants) variants.push_back(JoinWords(v, ' '));
    record["variants"] = std::move(variants);
    record["description"] = c.description;
    hierarchies[std::string(HierarchyName(c.hierarchy))].push_back(std::move(record));
  }
  doc["hierarchies"] = std::move(hierarchies);

  nlohmann::json schemas = nlohmann::json::object();
  for (const auto &[id, s] : schemas_) {
    schemas[id] = {{"requires_do", s.requires_direct_object},
                   {"requires_pc", s.requires_prepositional_complement},
                   {"prepositions", s.allowed_prepositions},
                   {"output_count", s.output_count}};
  }
  doc["action_schemas"] = std::move(schemas);

  nlohmann::json sets = nlohmann::json::object();
  for (const auto &[word, set] : target_sets_) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto &m : set.members) {
      members.push_back({{"concept", m.concept_id}, {"weight", m.weight}});
    }
    sets[word] = std::move(members);
  }
  doc["target_sets"] = std::move(sets);
  return doc;
}

bool Ontology::Contains(std::string_view id) const {
  return concepts_.find(id) != concepts_.end();
}

const Concept *Ontology::Find(std::string_view id) const {
  auto it = concepts_.find(id);
  return it == concepts_.end() ? nullptr : &it->second;
}

const Concept &Ontology::Get(std::string_view id) const {
  const Concept *c = Find(id);
  if (!c) throw Error(ErrorCode::kNotFound, "unknown concept '" + std::string(id) + "'");
  return *c;
}

bool Ontology::IsA(std::string_view concept_id, std::string_view ancestor) const {
  const Concept &c = Get(concept_id);
  const Concept &a = Get(ancestor);
  if (c.hierarchy != a.hierarchy) {
    throw Error(ErrorCode::kInvalidInput,
                "is_a across hierarchies: '" + c.id + "' vs '" + a.id + "'");
  }
  return ancestors_.find(concept_id)->second.count(a.id) > 0;
}

bool Ontology::Subsumes(std::string_view ancestor, std::string_view concept_id) const {
  auto it = ancestors_.find(concept_id);
  if (it == ancestors_.end()) return false;
  return it->second.count(std::string(ancestor)) > 0;
}

bool Ontology::IsLeaf(std::string_view id) const {
  auto it = children_.find(id);
  return it != children_.end() && it->second.empty();
}

const std::string &Ontology::Root(Hierarchy hierarchy) const {
  return roots_[Slot(hierarchy)];
}

const std::vector<std::string> &Ontology::Children(std::string_view id) const {
  auto it = children_.find(id);
  if (it == children_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown concept '" + std::string(id) + "'");
  }
  return it->second;
}

std::vector<LexicalMatch> Ontology::LexicalLookup(std::span<const std::string> words,
                                                  Hierarchy hierarchy) const {
  std::vector<LexicalMatch> matches;
  if (words.empty()) return matches;
  const auto &index = index_[Slot(hierarchy)];
  auto it = index.find(ToLower(words.front()));
  if (it == index.end()) return matches;
  for (const auto &entry : it->second) {
    if (entry.words.size() > words.size()) continue;
    bool equal = true;
    for (size_t i = 1; i < entry.words.size() && equal; ++i) {
      equal = ToLower(words[i]) == entry.words[i];
    }
    if (equal) matches.push_back({entry.concept_id, entry.words.size()});
  }
  std::sort(matches.begin(), matches.end(), [](const auto &a, const auto &b) {
    if (a.length != b.length) return a.length > b.length;
    return a.concept_id < b.concept_id;
  });
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
  return matches;
}

std::vector<SubstitutionCandidate> Ontology::SubstitutionCandidates(
    std::string_view target, const std::set<std::string> &forbidden) const {
  const Concept &t = Get(target);
  if (t.hierarchy != Hierarchy::kFood) {
    throw Error(ErrorCode::kInvalidInput,
                "substitution target '" + t.id + "' is not a food concept");
  }
  for (const auto &f : forbidden) Get(f);

  auto is_forbidden = [&](const std::string &id) {
    const auto &up = ancestors_.find(id)->second;
    return std::any_of(forbidden.begin(), forbidden.end(),
                       [&](const std::string &f) { return up.count(f) > 0; });
  };

  // Breadth-first generalization, stopping at the most specific level that
  // offers any leaf; only that minimal-cost tier is returned.
  std::map<std::string, int> best;
  std::set<std::string> seen{t.id};
  std::vector<std::string> level{t.id};
  for (int cost = 1; !level.empty(); ++cost) {
    std::vector<std::string> next;
    for (const auto &id : level) {
      for (const auto &parent : concepts_.find(id)->second.parents) {
        if (seen.insert(parent).second) next.push_back(parent);
      }
    }
    for (const auto &ancestor : next) {
      std::vector<std::string_view> stack{ancestor};
      std::set<std::string_view> visited;
      while (!stack.empty()) {
        std::string_view cur = stack.back();
        stack.pop_back();
        if (!visited.insert(cur).second) continue;
        const auto &kids = children_.find(cur)->second;
        if (kids.empty()) {
          std::string leaf(cur);
          if (leaf != t.id && !is_forbidden(leaf)) best.emplace(leaf, cost);
        }
        for (const auto &k : kids) stack.push_back(k);
      }
    }
    if (!best.empty()) break;
    level = std::move(next);
  }

  std::vector<SubstitutionCandidate> out;
  for (const auto &[id, cost] : best) out.push_back({id, cost});
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.cost < b.cost;
  });
  return out;
}

const ActionSchema *Ontology::Schema(std::string_view action_id) const {
  auto it = schemas_.find(action_id);
  return it == schemas_.end() ? nullptr : &it->second;
}

const TargetSet *Ontology::FindTargetSet(std::string_view word) const {
  std::string lower = ToLower(word);
  auto it = target_sets_.find(lower);
  if (it != target_sets_.end()) return &it->second;
  // Plural forms.
  for (std::string_view suffix : {"es", "s"}) {
    if (lower.size() > suffix.size() && lower.ends_with(suffix)) {
      it = target_sets_.find(lower.substr(0, lower.size() - suffix.size()));
      if (it != target_sets_.end()) return &it->second;
    }
  }
  return nullptr;
}

std::string Ontology::Lexeme(std::string_view id) const {
  const Concept &c = Get(id);
  if (!c.lexical_variants.empty()) return JoinWords(c.lexical_variants.front(), '_');
  return ToLower(c.id);
}

std::vector<const Concept *> Ontology::ConceptsIn(Hierarchy hierarchy) const {
  std::vector<const Concept *> out;
  for (const auto &[id, c] : concepts_) {
    if (c.hierarchy == hierarchy) out.push_back(&c);
  }
  return out;
}

}  // namespace recipegraph
