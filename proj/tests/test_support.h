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


#ifndef RECIPEGRAPH_TESTS_TEST_SUPPORT_H_
#define RECIPEGRAPH_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegraph/annotator.h"
#include "recipegraph/graph.h"
#include "recipegraph/ontology.h"

namespace recipegraph::testing {

inline std::string DataPath(const std::string &name) {
  return std::string(RECIPEGRAPH_DATA_DIR) + "/" + name;
}

inline std::string FixturePath(const std::string &name) {
  return std::string(RECIPEGRAPH_FIXTURE_DIR) + "/recipes/" + name + ".json";
}

inline nlohmann::json OntologyDocument() {
  std::ifstream in(DataPath("ontology.json"));
  return nlohmann::json::parse(in);
}

inline const Ontology &SampleOntology() {
  static const Ontology ontology = Ontology::LoadFile(DataPath("ontology.json"));
  return ontology;
}

// The sample ontology with the words of one action concept removed, so the
// verb goes unrecognized while the concept stays available for editing.
inline Ontology OntologyWithoutVerb(const std::string &concept_id) {
  auto doc = OntologyDocument();
  for (auto &c : doc["hierarchies"]["action"]) {
    if (c["id"] == concept_id) c["variants"] = nlohmann::json::array();
  }
  return Ontology::FromJson(doc);
}

inline Recipe Fixture(const std::string &name) { return LoadRecipeFile(FixturePath(name)); }

inline std::vector<std::string> FixtureNames() {
  std::vector<std::string> names;
  for (const auto &entry :
       std::filesystem::directory_iterator(std::string(RECIPEGRAPH_FIXTURE_DIR) + "/recipes")) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

inline size_t CountKind(const RecipeGraph &graph, VertexKind kind) {
  return graph.VertexIds(kind).size();
}

// Random recipe-shaped graphs -------------------------------------------------
//
// Actions are created in a generation order; every temporal arc and every
// input points forward in that order, so the temporal relation is acyclic
// and no food is consumed by an action that must run before its producer.

struct RandomGraphOptions {
  int max_actions = 8;
  int max_ingredients = 4;
  double before_probability = 0.35;
  double during_probability = 0.1;
  // Allow a food to be consumed by more than one action.
  bool allow_reuse = true;
  // Chain consecutive actions so the order is total apart from isDuring.
  bool chain = false;
};

inline const std::vector<std::string> &RandomFoodConcepts() {
  static const std::vector<std::string> pool{"Mango", "Flour", "Sugar",  "Butter",
                                             "Egg",   "Milk",  "Tomato", "Rice"};
  return pool;
}

inline RecipeGraph RandomGraph(std::mt19937 &rng, const RandomGraphOptions &options) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  static const std::vector<std::string> verbs{"Mix", "Slice", "Bake", "Add", "Stir", "Peel"};

  RecipeGraph graph("random");
  std::vector<std::string> foods;
  std::set<std::string> consumed;
  const int ingredients = uniform(1, options.max_ingredients);
  for (int i = 0; i < ingredients; ++i) {
    const auto &concept_id = RandomFoodConcepts()[uniform(0, RandomFoodConcepts().size() - 1)];
    std::string id = graph.NewId(VertexKind::kFood, ToLower(concept_id));
    graph.AddVertex({id, VertexKind::kFood, concept_id, FoodOrigin::kIngredientList, {}});
    foods.push_back(id);
  }
  std::vector<std::string> actions;
  const int count = uniform(1, options.max_actions);
  for (int a = 0; a < count; ++a) {
    const auto &verb = verbs[uniform(0, verbs.size() - 1)];
    std::string clause = "Clause:c_" + std::to_string(a + 1);
    graph.AddVertex({clause, VertexKind::kClause, {}, {}, TextSpan{size_t(a) * 10, size_t(a) * 10 + 9}});
    std::string id = "Action:" + ToLower(verb) + "_" + std::to_string(a + 1);
    graph.AddVertex({id, VertexKind::kAction, verb, {}, {}});
    graph.AddArc({id, clause, ArcLabel::kIsRelatedToClause});
    for (size_t i = 0; i < actions.size(); ++i) {
      const bool last = i + 1 == actions.size();
      if ((options.chain && last) || coin(options.before_probability)) {
        graph.AddArc({actions[i], id, ArcLabel::kIsBefore});
      } else if (coin(options.during_probability)) {
        graph.AddArc({actions[i], id, ArcLabel::kIsDuring});
      }
    }
    std::vector<std::string> pool;
    for (const auto &f : foods) {
      if (options.allow_reuse || !consumed.count(f)) pool.push_back(f);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    const int inputs = std::min<int>(pool.size(), uniform(0, 3));
    for (int k = 0; k < inputs; ++k) {
      graph.AddArc({id, pool[k], k == 0 ? ArcLabel::kHasDOInput : ArcLabel::kHasPCInput});
      consumed.insert(pool[k]);
    }
    std::string out = graph.NewId(VertexKind::kFood, ToLower(verb) + "_out");
    graph.AddVertex({out, VertexKind::kFood, std::nullopt, FoodOrigin::kActionOutput, {}});
    graph.AddArc({id, out, ArcLabel::kHasOutput});
    foods.push_back(out);
    actions.push_back(id);
  }
  return graph;
}

}  // namespace recipegraph::testing

#endif  // RECIPEGRAPH_TESTS_TEST_SUPPORT_H_
