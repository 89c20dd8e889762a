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


#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "recipegraph/error.h"
#include "recipegraph/ontology.h"
#include "test_support.h"

namespace recipegraph {
namespace {

using testing::OntologyDocument;
using testing::SampleOntology;

nlohmann::json Minimal() {
  return nlohmann::json::parse(R"({
    "hierarchies": {
      "food": [
        {"id": "Food", "parents": []},
        {"id": "Fruit", "parents": ["Food"], "variants": ["fruit"]},
        {"id": "Berry", "parents": ["Fruit"], "variants": ["berry", "berries"]},
        {"id": "Raspberry", "parents": ["Berry"], "variants": ["raspberry"]},
        {"id": "Blueberry", "parents": ["Berry"], "variants": ["blueberry"]}
      ],
      "dish-type": [{"id": "DishType", "parents": []}],
      "dish-moment": [{"id": "DishMoment", "parents": []}],
      "location": [{"id": "Location", "parents": []}],
      "diet": [{"id": "Diet", "parents": []}],
      "action": [{"id": "CookingAction", "parents": []},
                 {"id": "Mix", "parents": ["CookingAction"], "variants": ["mix"]}]
    },
    "action_schemas": {
      "CookingAction": {"requires_do": false},
      "Mix": {"requires_do": true}
    },
    "target_sets": {}
  })");
}

ErrorCode LoadError(const nlohmann::json &doc) {
  try {
    Ontology::FromJson(doc);
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(Ontology, MinimalDocumentLoads) {
  const auto o = Ontology::FromJson(Minimal());
  EXPECT_TRUE(o.IsA("Raspberry", "Fruit"));
  EXPECT_TRUE(o.IsA("Raspberry", "Berry"));
  EXPECT_FALSE(o.IsA("Fruit", "Raspberry"));
  EXPECT_EQ(o.Root(Hierarchy::kFood), "Food");
}

TEST(Ontology, RejectsCycle) {
  auto doc = Minimal();
  doc["hierarchies"]["food"][1]["parents"] = {"Raspberry"};
  EXPECT_EQ(LoadError(doc), ErrorCode::kInvalidInput);
}

TEST(Ontology, RejectsDanglingParent) {
  auto doc = Minimal();
  doc["hierarchies"]["food"][2]["parents"] = {"Vegetable"};
  EXPECT_EQ(LoadError(doc), ErrorCode::kInvalidInput);
}

TEST(Ontology, RejectsCrossHierarchyParent) {
  auto doc = Minimal();
  doc["hierarchies"]["food"][2]["parents"] = {"Mix"};
  EXPECT_EQ(LoadError(doc), ErrorCode::kInvalidInput);
}

TEST(Ontology, RejectsDuplicateId) {
  auto doc = Minimal();
  doc["hierarchies"]["action"].push_back({{"id", "Berry"}, {"parents", {"CookingAction"}}});
  EXPECT_EQ(LoadError(doc), ErrorCode::kInvalidInput);
}

TEST(Ontology, RejectsActionWithoutSchema) {
  auto doc = Minimal();
  doc["action_schemas"].erase("Mix");
  EXPECT_EQ(LoadError(doc), ErrorCode::kInvalidInput);
}

TEST(Ontology, IsAAcrossHierarchiesThrows) {
  const auto o = Ontology::FromJson(Minimal());
  EXPECT_THROW(o.IsA("Mix", "Fruit"), Error);
  EXPECT_THROW(o.IsA("Nope", "Fruit"), Error);
  EXPECT_FALSE(o.Subsumes("Fruit", "Mix"));
}

TEST(Ontology, SampleBerryFacts) {
  const auto &o = SampleOntology();
  EXPECT_TRUE(o.IsA("Raspberry", "Fruit"));
  EXPECT_TRUE(o.IsA("Raspberry", "Berry"));
  EXPECT_TRUE(o.IsLeaf("Strawberry"));
  EXPECT_FALSE(o.IsLeaf("Berry"));
}

// Every variant checked against every prefix of the input, independently of
// the first-word index the library uses.
std::vector<LexicalMatch> BruteLookup(const Ontology &o, const std::vector<std::string> &words,
                                      Hierarchy h) {
  std::vector<LexicalMatch> out;
  for (const Concept *c : o.ConceptsIn(h)) {
    for (const auto &variant : c->lexical_variants) {
      if (variant.size() > words.size()) continue;
      bool equal = true;
      for (size_t i = 0; i < variant.size(); ++i) equal = equal && ToLower(words[i]) == variant[i];
      if (equal) out.push_back({c->id, variant.size()});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return std::pair(-static_cast<long>(a.length), a.concept_id) <
           std::pair(-static_cast<long>(b.length), b.concept_id);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TEST(Ontology, LexicalLookupGlutinousRice) {
  const auto &o = SampleOntology();
  const std::vector<std::string> words{"glutinous", "rice"};
  const auto got = o.LexicalLookup(words, Hierarchy::kFood);
  EXPECT_EQ(got, BruteLookup(o, words, Hierarchy::kFood));
  // Matches are anchored at the first word, so "rice" alone only matches
  // when it leads the phrase.
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], (LexicalMatch{"GlutinousRice", 2}));
  const std::vector<std::string> tail{"rice", "flour"};
  EXPECT_EQ(o.LexicalLookup(tail, Hierarchy::kFood), (std::vector<LexicalMatch>{{"Rice", 1}}));
}

TEST(Ontology, LexicalLookupFig) {
  const std::vector<std::string> words{"fig"};
  const auto got = SampleOntology().LexicalLookup(words, Hierarchy::kFood);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], (LexicalMatch{"Fig", 1}));
}

TEST(Ontology, LexicalLookupIsCaseInsensitive) {
  const std::vector<std::string> words{"Coconut", "MILK", "please"};
  const auto got = SampleOntology().LexicalLookup(words, Hierarchy::kFood);
  ASSERT_FALSE(got.empty());
  EXPECT_EQ(got[0].concept_id, "CoconutMilk");
}

TEST(Ontology, LexicalLookupMatchesBruteForceOnRandomPhrases) {
  const auto &o = SampleOntology();
  std::vector<std::string> vocabulary;
  for (const Concept *c : o.ConceptsIn(Hierarchy::kFood)) {
    for (const auto &v : c->lexical_variants) vocabulary.insert(vocabulary.end(), v.begin(), v.end());
  }
  vocabulary.push_back("the");
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> words;
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < n; ++i) {
      words.push_back(vocabulary[std::uniform_int_distribution<size_t>(0, vocabulary.size() - 1)(rng)]);
    }
    const auto got = o.LexicalLookup(words, Hierarchy::kFood);
    ASSERT_EQ(got, BruteLookup(o, words, Hierarchy::kFood));
    for (size_t i = 1; i < got.size(); ++i) ASSERT_GE(got[0].length, got[i].length);
  }
}

TEST(Ontology, SubstitutionOtherBerries) {
  const auto got = SampleOntology().SubstitutionCandidates("Strawberry", {"Strawberry"});
  const std::vector<SubstitutionCandidate> want{
      {"Blackberry", 1}, {"Blueberry", 1}, {"Raspberry", 1}};
  EXPECT_EQ(got, want);
}

// Breadth-first distances upwards from the target; a leaf costs the least
// distance of any of its ancestors (itself included) that was reached.
std::vector<SubstitutionCandidate> BruteSubstitution(const Ontology &o, const std::string &target,
                                                     const std::set<std::string> &forbidden) {
  std::map<std::string, int> distance{{target, 0}};
  std::deque<std::string> queue{target};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (const auto &p : o.Get(cur).parents) {
      if (!distance.count(p)) {
        distance[p] = distance[cur] + 1;
        queue.push_back(p);
      }
    }
  }
  std::vector<SubstitutionCandidate> out;
  for (const Concept *c : o.ConceptsIn(Hierarchy::kFood)) {
    if (!o.IsLeaf(c->id) || c->id == target) continue;
    bool banned = false;
    for (const auto &f : forbidden) banned = banned || o.IsA(c->id, f);
    if (banned) continue;
    int best = -1;
    for (const auto &[a, d] : distance) {
      if (d > 0 && o.IsA(c->id, a) && (best < 0 || d < best)) best = d;
    }
    if (best > 0) out.push_back({c->id, best});
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return std::pair(a.cost, a.concept_id) < std::pair(b.cost, b.concept_id);
  });
  // Only the cheapest tier is kept.
  if (!out.empty()) {
    const int cheapest = out.front().cost;
    std::erase_if(out, [&](const auto &c) { return c.cost != cheapest; });
  }
  return out;
}

TEST(Ontology, SubstitutionAboveForbiddenCategory) {
  const auto &o = SampleOntology();
  const auto got = o.SubstitutionCandidates("Strawberry", {"Berry"});
  EXPECT_EQ(got, BruteSubstitution(o, "Strawberry", {"Berry"}));
  ASSERT_FALSE(got.empty());
  EXPECT_EQ(got.front().cost, 2);
  for (const auto &c : got) EXPECT_FALSE(o.IsA(c.concept_id, "Berry"));
}

TEST(Ontology, SubstitutionMatchesBruteForceForEveryLeaf) {
  const auto &o = SampleOntology();
  std::mt19937 rng(11);
  const auto foods = o.ConceptsIn(Hierarchy::kFood);
  for (const Concept *c : foods) {
    if (!o.IsLeaf(c->id)) continue;
    std::set<std::string> forbidden{c->id};
    const Concept *extra = foods[std::uniform_int_distribution<size_t>(0, foods.size() - 1)(rng)];
    if (!o.IsA(c->id, extra->id)) forbidden.insert(extra->id);
    const auto got = o.SubstitutionCandidates(c->id, forbidden);
    ASSERT_EQ(got, BruteSubstitution(o, c->id, forbidden)) << c->id;
    for (size_t i = 1; i < got.size(); ++i) ASSERT_LE(got[i - 1].cost, got[i].cost);
    for (const auto &s : got) {
      ASSERT_NE(s.concept_id, c->id);
      for (const auto &f : forbidden) ASSERT_FALSE(o.IsA(s.concept_id, f));
    }
  }
}

TEST(Ontology, SubsumptionIsReflexiveTransitiveAntisymmetric) {
  const auto &o = SampleOntology();
  for (Hierarchy h : {Hierarchy::kFood, Hierarchy::kAction, Hierarchy::kLocation}) {
    const auto all = o.ConceptsIn(h);
    for (const Concept *a : all) {
      ASSERT_TRUE(o.IsA(a->id, a->id));
      for (const Concept *b : all) {
        if (a != b) ASSERT_FALSE(o.IsA(a->id, b->id) && o.IsA(b->id, a->id));
        if (!o.IsA(a->id, b->id)) continue;
        for (const Concept *c : all) {
          if (o.IsA(b->id, c->id)) ASSERT_TRUE(o.IsA(a->id, c->id));
        }
      }
    }
  }
}

TEST(Ontology, JsonRoundTrip) {
  const auto &o = SampleOntology();
  const auto again = Ontology::FromJson(o.ToJson());
  EXPECT_EQ(again.ToJson(), o.ToJson());
  for (Hierarchy h : {Hierarchy::kFood, Hierarchy::kAction}) {
    for (const Concept *a : o.ConceptsIn(h)) {
      ASSERT_TRUE(again.Contains(a->id));
      EXPECT_EQ(again.Get(a->id).parents, a->parents);
      EXPECT_EQ(again.Get(a->id).lexical_variants, a->lexical_variants);
    }
  }
  ASSERT_NE(again.Schema("Remove"), nullptr);
  EXPECT_TRUE(again.Schema("Remove")->requires_prepositional_complement);
  EXPECT_EQ(again.target_sets().size(), o.target_sets().size());
}

TEST(Ontology, SchemasOfPaperVerbs) {
  const auto &o = SampleOntology();
  EXPECT_TRUE(o.Schema("Slice")->requires_direct_object);
  EXPECT_TRUE(o.Schema("Remove")->requires_prepositional_complement);
  EXPECT_TRUE(o.Schema("Add")->AllowsPreposition("to"));
}

TEST(Ontology, TargetSetWeights) {
  const TargetSet *batter = SampleOntology().FindTargetSet("batter");
  ASSERT_NE(batter, nullptr);
  EXPECT_DOUBLE_EQ(batter->WeightOf("Butter").value(), 0.9);
  EXPECT_FALSE(batter->WeightOf("Mango").has_value());
}

}  // namespace
}  // namespace recipegraph
