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

#ifndef RECIPEGRAPH_ANNOTATOR_H_
#define RECIPEGRAPH_ANNOTATOR_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegraph/graph.h"
#include "recipegraph/ontology.h"
#include "recipegraph/textproc.h"

namespace recipegraph {

struct Ingredient {
  std::string text;
  std::string concept_id;

  bool operator==(const Ingredient &) const = default;
};

struct Recipe {
  std::string id;
  std::string title;
  std::vector<Ingredient> ingredients;
  std::string preparation;

  bool operator==(const Recipe &) const = default;
};

nlohmann::json RecipeToJson(const Recipe &recipe);
Recipe RecipeFromJson(const nlohmann::json &doc);
Recipe LoadRecipeFile(const std::string &path);

enum class Slot { kDirectObject, kPrepositionalComplement };

// Ingredient concepts a food is made from: concepts of the source foods
// reachable backwards through hasOutput and input arcs.
std::set<std::string> Provenance(const RecipeGraph &graph, const std::string &food);

// Intersection weight sum over union weight sum; members of `provenance`
// that are not in the target set weigh 1.
double WeightedJaccard(const std::set<std::string> &provenance, const TargetSet &target);

struct FoodCandidate {
  std::string id;
  std::set<std::string> provenance;
};

struct TargetSetMatch {
  std::string food;
  double score = 0.0;
};

// Picks the candidate with the best weighted Jaccard score against the
// target set of `word`. `candidates` must be ordered oldest first; ties go
// to the most recent. Returns nullopt when every score is 0. Throws
// Error(kNotFound) when `word` has no target set.
std::optional<TargetSetMatch> ResolveTargetSet(const std::string &word,
                                               const std::vector<FoodCandidate> &candidates,
                                               const Ontology &ontology);

// Where an input food is to be resolved: the action being annotated and the
// foods it already took.
struct ResolutionContext {
  std::string action;
  std::set<std::string> frontier;
  std::set<std::string> taken;
};

struct FoodReference {
  bool is_food = false;  // false: the phrase does not name food at all
  std::vector<std::string> foods;
  std::optional<std::string> mentioned_concept;  // set when a food word matched
};

// Resolves a noun phrase (token range [first, last]) to frontier foods:
// direct lexical/subsumption match, category reference, lineage of
// transformed foods, then target sets. Does not mutate the graph; a matched
// food word with nothing available comes back with `foods` empty and
// `mentioned_concept` set.
FoodReference ResolveFoodReference(const std::vector<TaggedToken> &tokens, size_t first,
                                   size_t last, const RecipeGraph &graph,
                                   const ResolutionContext &context, const Ontology &ontology);

// Missing-argument heuristic: the output of the last action before
// `context.action`; with no prior action, the single available food.
std::optional<std::string> ResolveAnaphora(Slot slot, const RecipeGraph &graph,
                                           const ResolutionContext &context,
                                           const std::map<std::string, size_t> &clause_rank);

// The acquisition pipeline, exposed step by step so that correction can
// replay it over a partially frozen graph.
class Annotator {
 public:
  // Throws Error(kInvalidInput) for an empty preparation text or ingredient
  // concepts missing from the food hierarchy.
  Annotator(const Recipe &recipe, const Ontology &ontology);

  const Analysis &analysis() const { return analysis_; }
  const Recipe &recipe() const { return recipe_; }

  RecipeGraph Run() const;

  void AddIngredientVertices(RecipeGraph &graph) const;
  void AddClauseVertices(RecipeGraph &graph) const;

  // Previous ids to reuse, keyed by structural role (see IdRole*).
  using IdHints = std::map<std::string, std::string>;

  // Creates the action of `clause` (if its verb is known) with clause link,
  // temporal arcs, inputs and outputs. Returns the action id.
  std::optional<std::string> AnnotateClause(RecipeGraph &graph, const Clause &clause,
                                            const IdHints *hints = nullptr) const;

  // Adds missing isBefore/isDuring arcs implied by clause order and temporal
  // markers, except those in `blocked`.
  void LinkTemporal(RecipeGraph &graph, const std::set<Arc> &blocked = {}) const;

  // Fills required slots that have no input and adds missing outputs of an
  // existing action.
  void CompleteAction(RecipeGraph &graph, const std::string &action,
                      const IdHints *hints = nullptr) const;

  // Clause number of the clause an action is linked to (0 when unlinked).
  size_t ClauseNumberOf(const RecipeGraph &graph, const std::string &action) const;
  std::map<std::string, size_t> ClauseRanks(const RecipeGraph &graph) const;

  const Clause *FindClause(const std::string &clause_vertex_id) const;

  // Arcs a user removed; annotation never puts them back.
  void BlockArcs(std::set<Arc> arcs) { blocked_ = std::move(arcs); }

 private:
  void AttachInputs(RecipeGraph &graph, const std::string &action, const Clause *clause,
                    const ActionSchema &schema, bool only_missing, const IdHints *hints) const;
  void AttachOutputs(RecipeGraph &graph, const std::string &action, const ActionSchema &schema,
                     const IdHints *hints) const;

  Recipe recipe_;
  const Ontology &ontology_;
  Analysis analysis_;
  std::set<Arc> blocked_;
};

std::string IdRoleOutput(const std::string &action, int k);
std::string IdRoleMention(const std::string &action, const std::string &concept_id);

RecipeGraph Annotate(const Recipe &recipe, const Ontology &ontology);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_ANNOTATOR_H_
