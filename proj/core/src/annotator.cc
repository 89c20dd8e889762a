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

#include "recipegraph/annotator.h"

#include <algorithm>
#include <fstream>

#include "recipegraph/error.h"

namespace recipegraph {
namespace {

std::string ActionLexeme(const std::string &action_id) {
  const size_t colon = action_id.find(':');
  const size_t underscore = action_id.rfind('_');
  if (colon == std::string::npos || underscore == std::string::npos || underscore <= colon) {
    return "action";
  }
  return action_id.substr(colon + 1, underscore - colon - 1);
}

bool Related(const Ontology &ontology, const std::string &a, const std::string &b) {
  return ontology.Subsumes(a, b) || ontology.Subsumes(b, a);
}

// Food vertices upstream of `food` (not including it).
std::set<std::string> Upstream(const RecipeGraph &graph, const std::string &food) {
  std::set<std::string> seen;
  std::vector<std::string> stack{food};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    auto producer = graph.ProducerOf(cur);
    if (!producer) continue;
    for (const auto &in : graph.InputsOf(*producer)) {
      if (seen.insert(in).second) stack.push_back(in);
    }
  }
  return seen;
}

// Sort key reflecting creation order: sources first, then outputs by the
// clause of their producer; the numeric id suffix breaks remaining ties.
std::tuple<size_t, std::string, long long> CreationKey(const RecipeGraph &graph,
                                                       const std::string &food,
                                                       const std::map<std::string, size_t> &ranks) {
  size_t rank = 0;
  if (auto producer = graph.ProducerOf(food)) {
    auto it = ranks.find(*producer);
    rank = it == ranks.end() ? 0 : it->second;
  }
  const size_t underscore = food.rfind('_');
  long long n = 0;
  try {
    n = std::stoll(food.substr(underscore + 1));
  } catch (...) {
  }
  return {rank, food.substr(0, underscore), n};
}

std::optional<std::string> Hint(const Annotator::IdHints *hints, const std::string &role,
                                const RecipeGraph &graph) {
  if (!hints) return std::nullopt;
  auto it = hints->find(role);
  if (it == hints->end() || graph.FindVertex(it->second)) return std::nullopt;
  return it->second;
}

}  // namespace

// Recipe documents ---------------------------------------------------------

nlohmann::json RecipeToJson(const Recipe &recipe) {
  nlohmann::json ingredients = nlohmann::json::array();
  for (const auto &ing : recipe.ingredients) {
    ingredients.push_back({{"text", ing.text}, {"concept", ing.concept_id}});
  }
  return {{"id", recipe.id},
          {"title", recipe.title},
          {"ingredients", std::move(ingredients)},
          {"preparation", recipe.preparation}};
}

Recipe RecipeFromJson(const nlohmann::json &doc) {
  try {
    Recipe recipe;
    recipe.id = doc.at("id").get<std::string>();
    recipe.title = doc.value("title", "");
    for (const auto &ing : doc.at("ingredients")) {
      recipe.ingredients.push_back(
          {ing.value("text", ""), ing.at("concept").get<std::string>()});
    }
    recipe.preparation = doc.at("preparation").get<std::string>();
    if (recipe.id.empty()) throw Error(ErrorCode::kInvalidInput, "recipe document: empty id");
    return recipe;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidInput, std::string("recipe document: ") + e.what());
  }
}

Recipe LoadRecipeFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open recipe file " + path);
  try {
    return RecipeFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidInput, "recipe file " + path + " is not JSON: " + e.what());
  }
}

// Reference resolution -----------------------------------------------------

std::set<std::string> Provenance(const RecipeGraph &graph, const std::string &food) {
  std::set<std::string> concepts;
  std::set<std::string> seen{food};
  std::vector<std::string> stack{food};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    auto producer = graph.ProducerOf(cur);
    if (!producer) {
      const Vertex &v = graph.GetVertex(cur);
      if (v.concept_id) concepts.insert(*v.concept_id);
      continue;
    }
    for (const auto &in : graph.InputsOf(*producer)) {
      if (seen.insert(in).second) stack.push_back(in);
    }
  }
  return concepts;
}

double WeightedJaccard(const std::set<std::string> &provenance, const TargetSet &target) {
  double intersection = 0.0;
  double uni = 0.0;
  for (const auto &member : target.members) uni += member.weight;
  for (const auto &c : provenance) {
    if (auto w = target.WeightOf(c)) {
      intersection += *w;
    } else {
      uni += 1.0;
    }
  }
  return uni > 0.0 ? intersection / uni : 0.0;
}

std::optional<TargetSetMatch> ResolveTargetSet(const std::string &word,
                                               const std::vector<FoodCandidate> &candidates,
                                               const Ontology &ontology) {
  const TargetSet *target = ontology.FindTargetSet(word);
  if (!target) throw Error(ErrorCode::kNotFound, "no target set for '" + word + "'");
  std::optional<TargetSetMatch> best;
  for (const auto &candidate : candidates) {
    const double score = WeightedJaccard(candidate.provenance, *target);
    if (score > 0.0 && (!best || score >= best->score)) best = TargetSetMatch{candidate.id, score};
  }
  return best;
}

FoodReference ResolveFoodReference(const std::vector<TaggedToken> &tokens, size_t first,
                                   size_t last, const RecipeGraph &graph,
                                   const ResolutionContext &context, const Ontology &ontology) {
  FoodReference ref;
  size_t start = first;
  while (start < last && (tokens[start].tag == Tag::kDet || tokens[start].tag == Tag::kNum)) {
    ++start;
  }

  std::vector<std::string> available;
  for (const auto &f : context.frontier) {
    if (!context.taken.count(f)) available.push_back(f);
  }

  // Longest food match, preferring one that covers the head (last token).
  std::optional<std::pair<size_t, LexicalMatch>> chosen;
  for (size_t p = start; p <= last; ++p) {
    std::vector<std::string> words;
    for (size_t t = p; t <= last; ++t) words.push_back(tokens[t].token.lower);
    auto matches = ontology.LexicalLookup(words, Hierarchy::kFood);
    if (matches.empty()) continue;
    const bool covers_head = p + matches.front().length - 1 == last;
    if (covers_head) {
      chosen = {p, matches.front()};
      break;
    }
    chosen = {p, matches.front()};
  }

  if (chosen) {
    const std::string &mentioned = chosen->second.concept_id;
    ref.is_food = true;
    ref.mentioned_concept = mentioned;
    for (const auto &f : available) {
      const Vertex &v = graph.GetVertex(f);
      if (v.concept_id && Related(ontology, mentioned, *v.concept_id)) ref.foods.push_back(f);
    }
    if (ref.foods.empty()) {
      // Re-mention of a transformed food: follow the output chain.
      for (const auto &f : available) {
        for (const auto &up : Upstream(graph, f)) {
          const Vertex &v = graph.GetVertex(up);
          if (v.concept_id && Related(ontology, mentioned, *v.concept_id)) {
            ref.foods.push_back(f);
            break;
          }
        }
      }
    }
    return ref;
  }

  const std::string &head = tokens[last].token.lower;
  if (ontology.FindTargetSet(head)) {
    ref.is_food = true;
    std::map<std::string, size_t> ranks;
    for (const auto &action : graph.VertexIds(VertexKind::kAction)) {
      if (auto clause = graph.ClauseOf(action)) {
        const size_t underscore = clause->rfind('_');
        ranks[action] = std::stoul(clause->substr(underscore + 1));
      }
    }
    std::sort(available.begin(), available.end(), [&](const auto &a, const auto &b) {
      return CreationKey(graph, a, ranks) < CreationKey(graph, b, ranks);
    });
    std::vector<FoodCandidate> candidates;
    for (const auto &f : available) candidates.push_back({f, Provenance(graph, f)});
    if (auto match = ResolveTargetSet(head, candidates, ontology)) {
      ref.foods.push_back(match->food);
    }
  }
  return ref;
}

std::optional<std::string> ResolveAnaphora(Slot slot, const RecipeGraph &graph,
                                           const ResolutionContext &context,
                                           const std::map<std::string, size_t> &clause_rank) {
  (void)slot;  // both slots use the same heuristic
  const auto before = ActionsBefore(graph, context.action);
  if (!before.empty()) {
    std::string last;
    size_t last_rank = 0;
    for (const auto &a : before) {
      auto it = clause_rank.find(a);
      const size_t rank = it == clause_rank.end() ? 0 : it->second;
      if (last.empty() || rank > last_rank || (rank == last_rank && a > last)) {
        last = a;
        last_rank = rank;
      }
    }
    for (const auto &out : graph.OutputsOf(last)) {
      if (context.frontier.count(out) && !context.taken.count(out)) return out;
    }
    return std::nullopt;
  }
  std::optional<std::string> single;
  for (const auto &f : context.frontier) {
    if (context.taken.count(f)) continue;
    if (single) return std::nullopt;
    single = f;
  }
  return single;
}

// Annotator ---------------------------------------------------------------

std::string IdRoleOutput(const std::string &action, int k) {
  return "out|" + action + "|" + std::to_string(k);
}

std::string IdRoleMention(const std::string &action, const std::string &concept_id) {
  return "mention|" + action + "|" + concept_id;
}

Annotator::Annotator(const Recipe &recipe, const Ontology &ontology)
    : recipe_(recipe), ontology_(ontology) {
  if (recipe_.preparation.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::kInvalidInput, "recipe '" + recipe_.id + "' has an empty preparation text");
  }
  for (const auto &ing : recipe_.ingredients) {
    const Concept *c = ontology_.Find(ing.concept_id);
    if (!c || c->hierarchy != Hierarchy::kFood) {
      throw Error(ErrorCode::kInvalidInput,
                  "ingredient concept '" + ing.concept_id + "' is not in the food hierarchy");
    }
  }
  analysis_ = Analyze(recipe_.preparation, ontology_);
}

RecipeGraph Annotator::Run() const {
  RecipeGraph graph(recipe_.id);
  graph.set_version(1);
  AddIngredientVertices(graph);
  AddClauseVertices(graph);
  for (const auto &clause : analysis_.clauses) AnnotateClause(graph, clause);
  return graph;
}

void Annotator::AddIngredientVertices(RecipeGraph &graph) const {
  for (const auto &ing : recipe_.ingredients) {
    Vertex v;
    v.id = graph.NewId(VertexKind::kFood, ontology_.Lexeme(ing.concept_id));
    v.kind = VertexKind::kFood;
    v.concept_id = ing.concept_id;
    v.origin = FoodOrigin::kIngredientList;
    graph.AddVertex(std::move(v));
  }
}

void Annotator::AddClauseVertices(RecipeGraph &graph) const {
  for (const auto &clause : analysis_.clauses) {
    Vertex v;
    v.id = "Clause:" + clause.id;
    v.kind = VertexKind::kClause;
    v.text_span = TextSpan{clause.char_start, clause.char_end};
    graph.AddVertex(std::move(v));
  }
}

const Clause *Annotator::FindClause(const std::string &clause_vertex_id) const {
  for (const auto &clause : analysis_.clauses) {
    if ("Clause:" + clause.id == clause_vertex_id) return &clause;
  }
  return nullptr;
}

size_t Annotator::ClauseNumberOf(const RecipeGraph &graph, const std::string &action) const {
  auto clause_id = graph.ClauseOf(action);
  if (!clause_id) return 0;
  const Clause *clause = FindClause(*clause_id);
  return clause ? clause->number : 0;
}

std::map<std::string, size_t> Annotator::ClauseRanks(const RecipeGraph &graph) const {
  std::map<std::string, size_t> ranks;
  for (const auto &action : graph.VertexIds(VertexKind::kAction)) {
    ranks[action] = ClauseNumberOf(graph, action);
  }
  return ranks;
}

void Annotator::LinkTemporal(RecipeGraph &graph, const std::set<Arc> &blocked) const {
  std::vector<std::pair<size_t, std::string>> ordered;
  for (const auto &[action, number] : ClauseRanks(graph)) {
    if (number > 0) ordered.emplace_back(number, action);
  }
  std::sort(ordered.begin(), ordered.end());

  std::vector<std::vector<std::string>> steps;
  std::vector<Arc> arcs;
  for (size_t k = 0; k < ordered.size(); ++k) {
    const auto &[number, action] = ordered[k];
    const Clause &clause = analysis_.clauses[number - 1];
    bool join = false;
    if (k > 0) {
      const auto &[prev_number, prev] = ordered[k - 1];
      const Clause &prev_clause = analysis_.clauses[prev_number - 1];
      if (prev_clause.temporal_marker == TemporalMarker::kWhile && prev_clause.sentence_initial &&
          !clause.sentence_initial) {
        // "While A, B": A runs during B.
        arcs.push_back({prev, action, ArcLabel::kIsDuring});
        join = true;
      } else if (clause.temporal_marker == TemporalMarker::kMeanwhile ||
                 (clause.temporal_marker == TemporalMarker::kWhile && !clause.sentence_initial)) {
        arcs.push_back({action, prev, ArcLabel::kIsDuring});
        join = true;
      }
    }
    if (join) {
      steps.back().push_back(action);
    } else {
      steps.push_back({action});
    }
  }
  for (size_t s = 0; s + 1 < steps.size(); ++s) {
    for (const auto &a : steps[s]) {
      for (const auto &b : steps[s + 1]) arcs.push_back({a, b, ArcLabel::kIsBefore});
    }
  }
  for (const auto &arc : arcs) {
    if (!graph.HasArc(arc) && !blocked.count(arc)) graph.AddArc(arc);
  }
}

std::optional<std::string> Annotator::AnnotateClause(RecipeGraph &graph, const Clause &clause,
                                                     const IdHints *hints) const {
  const Chunk *vp = clause.verb_phrase();
  if (!vp) return std::nullopt;
  const auto &tokens = analysis_.tokens;
  std::vector<std::string> words;
  for (size_t t = vp->head; t <= clause.last_token && words.size() < 6; ++t) {
    words.push_back(tokens[t].token.lower);
  }
  const auto matches = ontology_.LexicalLookup(words, Hierarchy::kAction);
  if (matches.empty()) return std::nullopt;
  const LexicalMatch &match = matches.front();

  std::string lexeme;
  for (size_t i = 0; i < match.length; ++i) {
    if (i > 0) lexeme += '_';
    lexeme += words[i];
  }
  // Inflected intransitive uses ("the rice cooks") keep the base form in ids.
  if (lexeme.size() > 2 && lexeme.back() == 's') {
    std::vector<std::string> base = words;
    base[match.length - 1].pop_back();
    const auto again = ontology_.LexicalLookup(base, Hierarchy::kAction);
    if (!again.empty() && again.front().concept_id == match.concept_id &&
        again.front().length == match.length) {
      lexeme.pop_back();
    }
  }
  const ActionSchema *schema = ontology_.Schema(match.concept_id);
  if (!schema) {
    throw Error(ErrorCode::kInternal, "ontology has no schema for action '" + match.concept_id + "'");
  }

  std::string id = "Action:" + lexeme + "_" + std::to_string(clause.number);
  if (graph.FindVertex(id)) id = graph.NewId(VertexKind::kAction, lexeme);
  Vertex v;
  v.id = id;
  v.kind = VertexKind::kAction;
  v.concept_id = match.concept_id;
  graph.AddVertex(std::move(v));
  graph.AddArc({id, "Clause:" + clause.id, ArcLabel::kIsRelatedToClause});
  LinkTemporal(graph, blocked_);
  AttachInputs(graph, id, &clause, *schema, false, hints);
  AttachOutputs(graph, id, *schema, hints);
  return id;
}

namespace {

// Concept carried by an action's outputs: its single direct object, else
// its single complement when there is no direct object.
std::optional<std::string> PrincipalConcept(const RecipeGraph &graph, const std::string &action) {
  const auto direct = graph.Targets(action, ArcLabel::kHasDOInput);
  const auto complement = graph.Targets(action, ArcLabel::kHasPCInput);
  if (direct.size() == 1) return graph.GetVertex(direct.front()).concept_id;
  if (direct.empty() && complement.size() == 1) return graph.GetVertex(complement.front()).concept_id;
  return std::nullopt;
}

}  // namespace

void Annotator::CompleteAction(RecipeGraph &graph, const std::string &action,
                               const IdHints *hints) const {
  const Vertex &v = graph.GetVertex(action);
  if (v.kind != VertexKind::kAction || !v.concept_id) return;
  const ActionSchema *schema = ontology_.Schema(*v.concept_id);
  if (!schema) return;
  const Clause *clause = nullptr;
  if (auto clause_id = graph.ClauseOf(action)) clause = FindClause(*clause_id);
  const auto inputs_before = graph.InputsOf(action);
  AttachInputs(graph, action, clause, *schema, true, hints);
  // New inputs can change what the existing outputs are made of.
  if (graph.InputsOf(action) != inputs_before) {
    const auto principal = PrincipalConcept(graph, action);
    for (const auto &out : graph.OutputsOf(action)) {
      if (graph.GetVertex(out).origin == FoodOrigin::kActionOutput) graph.SetConcept(out, principal);
    }
  }
  AttachOutputs(graph, action, *schema, hints);
}

void Annotator::AttachInputs(RecipeGraph &graph, const std::string &action, const Clause *clause,
                             const ActionSchema &schema, bool only_missing,
                             const IdHints *hints) const {
  ResolutionContext context;
  context.action = action;
  context.frontier = AvailabilityFrontier(graph, action);
  for (const auto &in : graph.InputsOf(action)) context.taken.insert(in);

  // When completing, only required slots that are still empty are filled.
  const bool need_do = graph.Targets(action, ArcLabel::kHasDOInput).empty() &&
                       (!only_missing || schema.requires_direct_object);
  const bool need_pc = graph.Targets(action, ArcLabel::kHasPCInput).empty() &&
                       (!only_missing || schema.requires_prepositional_complement);
  const bool read_text = clause && (need_do || need_pc);

  auto attach = [&](const FoodReference &ref, ArcLabel label) {
    for (const auto &f : ref.foods) {
      Arc arc{action, f, label};
      if (blocked_.count(arc)) continue;
      if (!graph.HasArc(arc)) graph.AddArc(arc);
      context.taken.insert(f);
    }
    if (ref.foods.empty() && ref.mentioned_concept) {
      const std::string role = IdRoleMention(action, *ref.mentioned_concept);
      auto hinted = Hint(hints, role, graph);
      std::string id = hinted ? *hinted
                              : graph.NewId(VertexKind::kFood,
                                            ontology_.Lexeme(*ref.mentioned_concept));
      Vertex v;
      v.id = id;
      v.kind = VertexKind::kFood;
      v.concept_id = *ref.mentioned_concept;
      v.origin = FoodOrigin::kTextMention;
      graph.AddVertex(std::move(v));
      graph.AddArc({action, id, label});
      context.taken.insert(id);
    }
  };

  if (read_text) {
    const Chunk *vp = clause->verb_phrase();
    const auto &tokens = analysis_.tokens;
    if (vp && need_do) {
      std::vector<const Chunk *> objects;
      for (const auto &chunk : clause->chunks) {
        if (chunk.kind == ChunkKind::kNP && chunk.first > vp->last) objects.push_back(&chunk);
      }
      if (objects.empty()) {
        // Intransitive use with a subject ("the rice cooks").
        for (const auto &chunk : clause->chunks) {
          if (chunk.kind == ChunkKind::kNP && chunk.last < vp->first) objects.push_back(&chunk);
        }
      }
      for (const Chunk *np : objects) {
        attach(ResolveFoodReference(tokens, np->first, np->last, graph, context, ontology_),
               ArcLabel::kHasDOInput);
      }
    }
    if (vp && need_pc) {
      for (const auto &chunk : clause->chunks) {
        if (chunk.kind != ChunkKind::kPP || chunk.first <= vp->last) continue;
        if (!schema.AllowsPreposition(chunk.preposition)) continue;
        attach(ResolveFoodReference(tokens, chunk.first + 1, chunk.last, graph, context, ontology_),
               ArcLabel::kHasPCInput);
      }
    }
  }

  const auto ranks = ClauseRanks(graph);
  auto fill = [&](Slot slot, ArcLabel label, bool required) {
    if (!required || !graph.Targets(action, label).empty()) return;
    auto food = ResolveAnaphora(slot, graph, context, ranks);
    if (food && !blocked_.count(Arc{action, *food, label})) {
      graph.AddArc({action, *food, label});
      context.taken.insert(*food);
    }
  };
  fill(Slot::kDirectObject, ArcLabel::kHasDOInput, schema.requires_direct_object);
  fill(Slot::kPrepositionalComplement, ArcLabel::kHasPCInput,
       schema.requires_prepositional_complement);
}

void Annotator::AttachOutputs(RecipeGraph &graph, const std::string &action,
                              const ActionSchema &schema, const IdHints *hints) const {
  const int existing = static_cast<int>(graph.OutputsOf(action).size());
  if (existing >= schema.output_count) return;

  const auto principal = PrincipalConcept(graph, action);
  const std::string lexeme = ActionLexeme(action) + "_out";
  for (int k = existing; k < schema.output_count; ++k) {
    auto hinted = Hint(hints, IdRoleOutput(action, k), graph);
    std::string id = hinted ? *hinted : graph.NewId(VertexKind::kFood, lexeme);
    Vertex v;
    v.id = id;
    v.kind = VertexKind::kFood;
    v.concept_id = principal;
    v.origin = FoodOrigin::kActionOutput;
    graph.AddVertex(std::move(v));
    graph.AddArc({action, id, ArcLabel::kHasOutput});
  }
}

RecipeGraph Annotate(const Recipe &recipe, const Ontology &ontology) {
  return Annotator(recipe, ontology).Run();
}

}  // namespace recipegraph
