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

#ifndef RECIPEGRAPH_ADAPTATION_H_
#define RECIPEGRAPH_ADAPTATION_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "recipegraph/annotator.h"
#include "recipegraph/graph.h"
#include "recipegraph/ontology.h"

namespace recipegraph {

struct AdaptationRequest {
  std::string alpha;  // food concept to remove
  std::string beta;   // food concept to bring in from the donor
  std::string donor_recipe_id;
};

// The part of a graph that only prepares one ingredient.
struct Branch {
  std::vector<std::string> seeds;  // ingredient-list foods with concept <= the ingredient
  std::set<std::string> vertices;  // foods, actions and their clauses
  std::vector<std::string> actions;  // in clause order
  std::vector<std::string> clauses;  // in text order
  // Input arcs from branch foods into actions outside the branch, sorted by
  // consumer clause. The first one is the cut.
  std::vector<Arc> exits;

  const Arc &cut_arc() const { return exits.front(); }
};

// Maximal set reachable forward from the ingredient vertices of `concept_id`
// in which every action has all its inputs inside. Throws
// Error(kInvalidInput) when the ingredient is absent or never leaves the
// branch.
Branch ExtractBranch(const RecipeGraph &graph, const std::string &concept_id,
                     const Ontology &ontology);

struct TextPatch {
  size_t start = 0;
  size_t end = 0;
  std::string replacement;

  bool operator==(const TextPatch &) const = default;
};

// Result of splicing: the new text plus position maps back to the inputs.
class PatchedText {
 public:
  const std::string &text() const { return text_; }
  // Output position of an original-text position lying in kept text.
  std::optional<size_t> MapOriginal(size_t pos) const;
  // Output position of offset `pos` inside the replacement of patch `index`
  // (index into the sorted patch list).
  std::optional<size_t> MapInserted(size_t index, size_t pos) const;

 private:
  friend PatchedText ApplyTextPatchesMapped(std::string_view text,
                                            std::vector<TextPatch> patches);
  struct Piece {
    enum Kind { kKept, kInserted, kSeparator } kind;
    std::string text;
    size_t source = 0;    // kept: original offset of text[0]; inserted: replacement offset
    size_t cut_from = 0;  // `source` before leading characters were trimmed
    size_t patch = 0;     // inserted only
    size_t out = 0;       // offset in the output
    bool seam_lead = false;
  };
  std::string text_;
  std::vector<Piece> pieces_;
};

// Replaces the spans and tidies up only around the splice points: the
// separator run at each seam is reduced to one mark and a space, sentence
// starts are capitalized, inserted text joined mid-sentence is lowercased,
// and the text ends with a period. Throws Error(kInvalidInput) on
// overlapping or out-of-range patches.
PatchedText ApplyTextPatchesMapped(std::string_view text, std::vector<TextPatch> patches);
std::string ApplyTextPatches(std::string_view text, const std::vector<TextPatch> &patches);

struct AdaptationResult {
  RecipeGraph graph;
  Recipe recipe;  // ingredient list and preparation text adapted
  std::vector<TextPatch> patches;  // against the original preparation text
  std::vector<Arc> dropped_arcs;   // isDuring arcs that crossed a branch boundary
  Branch pruned;
  Branch grafted;
};

// Prunes the alpha branch of `graph`, grafts the beta branch of the donor in
// its place and splices the text accordingly.
AdaptationResult Adapt(const Recipe &recipe, const RecipeGraph &graph,
                       const AdaptationRequest &request, const Recipe &donor,
                       const RecipeGraph &donor_graph, const Ontology &ontology);

nlohmann::json TextPatchToJson(const TextPatch &patch);
nlohmann::json AdaptationResultToJson(const AdaptationResult &result);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_ADAPTATION_H_
