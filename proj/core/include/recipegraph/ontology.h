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

#ifndef RECIPEGRAPH_ONTOLOGY_H_
#define RECIPEGRAPH_ONTOLOGY_H_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace recipegraph {

// The six concept hierarchies of the cooking ontology.
enum class Hierarchy { kFood, kDishType, kDishMoment, kLocation, kDiet, kAction };

inline constexpr int kNumHierarchies = 6;

std::string_view HierarchyName(Hierarchy hierarchy);
std::optional<Hierarchy> ParseHierarchy(std::string_view name);

struct Concept {
  std::string id;
  Hierarchy hierarchy = Hierarchy::kFood;
  std::vector<std::string> parents;
  // Lowercase, pre-tokenized word sequences.
  std::vector<std::vector<std::string>> lexical_variants;
  std::string description;
};

// Syntactic/semantic properties of an action concept: which argument slots
// it needs and how many foods it produces.
struct ActionSchema {
  std::string concept_id;
  bool requires_direct_object = false;
  bool requires_prepositional_complement = false;
  std::vector<std::string> allowed_prepositions;
  int output_count = 1;

  bool AllowsPreposition(std::string_view word) const;
  bool RequiresNoInput() const {
    return !requires_direct_object && !requires_prepositional_complement;
  }
};

struct TargetMember {
  std::string concept_id;
  double weight = 1.0;
};

// Weighted set of ingredient concepts that a cover word such as "sauce"
// usually refers to.
struct TargetSet {
  std::string trigger_word;
  std::vector<TargetMember> members;

  // Weight of `concept_id`, or nullopt if it is not a member.
  std::optional<double> WeightOf(std::string_view concept_id) const;
};

struct LexicalMatch {
  std::string concept_id;
  size_t length = 0;  // number of words matched

  bool operator==(const LexicalMatch &) const = default;
};

struct SubstitutionCandidate {
  std::string concept_id;
  int cost = 0;  // generalization steps

  bool operator==(const SubstitutionCandidate &) const = default;
};

// Immutable after loading; all queries are const and safe to share between
// threads.
class Ontology {
 public:
  // Parses and validates an ontology document. Throws Error(kInvalidInput)
  // on cycles, dangling or cross-hierarchy parents, duplicate ids, missing
  // roots, action concepts without a schema and malformed target sets.
  static Ontology FromJson(const nlohmann::json &doc);
  static Ontology LoadFile(const std::string &path);

  nlohmann::json ToJson() const;

  bool Contains(std::string_view id) const;
  const Concept *Find(std::string_view id) const;
  // Throws Error(kNotFound).
  const Concept &Get(std::string_view id) const;

  // Reflexive, transitive subsumption. Throws on unknown ids and on
  // comparisons across hierarchies.
  bool IsA(std::string_view concept_id, std::string_view ancestor) const;
  // Like IsA but false instead of throwing for unknown or cross-hierarchy
  // ids.
  bool Subsumes(std::string_view ancestor, std::string_view concept_id) const;

  bool IsLeaf(std::string_view id) const;
  const std::string &Root(Hierarchy hierarchy) const;
  const std::vector<std::string> &Children(std::string_view id) const;

  // All concepts of `hierarchy` with a lexical variant equal to a prefix of
  // `words`, longest match first (ties by concept id). Input words are
  // lowercased before matching.
  std::vector<LexicalMatch> LexicalLookup(std::span<const std::string> words,
                                          Hierarchy hierarchy) const;

  // Candidates obtained by generalizing `target` k steps and specializing
  // back down to a leaf. Cost is k; sorted by cost then id.
  std::vector<SubstitutionCandidate> SubstitutionCandidates(
      std::string_view target, const std::set<std::string> &forbidden) const;

  const ActionSchema *Schema(std::string_view action_id) const;
  const TargetSet *FindTargetSet(std::string_view word) const;
  const std::map<std::string, TargetSet> &target_sets() const {
    return target_sets_;
  }

  // Identifier-friendly word for a concept: first lexical variant joined by
  // '_', or the lowercased id when the concept has no variant.
  std::string Lexeme(std::string_view id) const;

  std::vector<const Concept *> ConceptsIn(Hierarchy hierarchy) const;

 private:
  struct IndexEntry {
    std::vector<std::string> words;
    std::string concept_id;
  };

  void BuildDerived();

  std::map<std::string, Concept, std::less<>> concepts_;
  std::map<std::string, std::vector<std::string>, std::less<>> children_;
  std::map<std::string, std::set<std::string>, std::less<>> ancestors_;
  std::array<std::string, kNumHierarchies> roots_;
  std::map<std::string, ActionSchema, std::less<>> schemas_;
  std::map<std::string, TargetSet> target_sets_;
  // Keyed by the first word of each variant.
  std::array<std::unordered_map<std::string, std::vector<IndexEntry>>,
             kNumHierarchies>
      index_;
};

std::string ToLower(std::string_view text);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_ONTOLOGY_H_
