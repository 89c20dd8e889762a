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

#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>
#include <vector>

#include "recipegraph/adaptation.h"
#include "recipegraph/annotator.h"
#include "recipegraph/correction.h"
#include "recipegraph/graph.h"

namespace rg = recipegraph;

namespace {

const rg::Ontology &SampleOntology() {
  static const rg::Ontology ontology = rg::Ontology::LoadFile(RECIPEGRAPH_DATA_DIR "/ontology.json");
  return ontology;
}

rg::Recipe Fixture(const std::string &name) {
  return rg::LoadRecipeFile(RECIPEGRAPH_FIXTURE_DIR "/recipes/" + name + ".json");
}

// A recipe of n clauses that keeps folding one new ingredient into the
// running mixture.
rg::Recipe LongRecipe(int n) {
  static const char *kFoods[] = {"flour", "sugar", "egg", "milk", "butter", "honey", "salt"};
  static const char *kConcepts[] = {"Flour", "Sugar", "Egg", "Milk", "Butter", "Honey", "Salt"};
  rg::Recipe recipe{"long", "long", {}, ""};
  recipe.ingredients.push_back({"", "Flour"});
  recipe.preparation = "Sift the flour.";
  for (int i = 1; i < n; ++i) {
    recipe.ingredients.push_back({"", kConcepts[i % 7]});
    recipe.preparation += std::string(" Add the ") + kFoods[i % 7] + " to the mixture.";
  }
  return recipe;
}

}  // namespace

static void BM_AnnotateMango(benchmark::State &state) {
  const auto recipe = Fixture("mango-mini");
  for (auto _ : state) benchmark::DoNotOptimize(rg::Annotate(recipe, SampleOntology()));
}
BENCHMARK(BM_AnnotateMango);

static void BM_AnnotateCorpus(benchmark::State &state) {
  std::vector<rg::Recipe> corpus;
  for (const auto &entry : std::filesystem::directory_iterator(RECIPEGRAPH_FIXTURE_DIR "/recipes")) {
    corpus.push_back(rg::LoadRecipeFile(entry.path().string()));
  }
  for (auto _ : state) {
    for (const auto &recipe : corpus) benchmark::DoNotOptimize(rg::Annotate(recipe, SampleOntology()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(corpus.size()));
}
BENCHMARK(BM_AnnotateCorpus);

static void BM_AnnotateLong(benchmark::State &state) {
  const auto recipe = LongRecipe(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rg::Annotate(recipe, SampleOntology()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AnnotateLong)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_FrontierAtEnd(benchmark::State &state) {
  const auto graph = rg::Annotate(LongRecipe(static_cast<int>(state.range(0))), SampleOntology());
  for (auto _ : state) benchmark::DoNotOptimize(rg::AvailabilityFrontier(graph, rg::kEnd));
}
BENCHMARK(BM_FrontierAtEnd)->Arg(8)->Arg(32)->Arg(128);

static void BM_Validate(benchmark::State &state) {
  const auto graph = rg::Annotate(Fixture("chocolate-cookies"), SampleOntology());
  for (auto _ : state) benchmark::DoNotOptimize(rg::Validate(graph, SampleOntology()));
}
BENCHMARK(BM_Validate);

static void BM_Adapt(benchmark::State &state) {
  const auto recipe = Fixture("glutinous-rice-mango");
  const auto donor = Fixture("figs-honey");
  const auto graph = rg::Annotate(recipe, SampleOntology());
  const auto donor_graph = rg::Annotate(donor, SampleOntology());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rg::Adapt(recipe, graph, {"Mango", "Fig", donor.id}, donor, donor_graph, SampleOntology()));
  }
}
BENCHMARK(BM_Adapt);

static void BM_Repropagate(benchmark::State &state) {
  const auto recipe = Fixture("chocolate-cookies");
  const auto graph = rg::Annotate(recipe, SampleOntology());
  rg::Session session;
  session.validated_cursor = 1;
  for (auto _ : state) benchmark::DoNotOptimize(rg::Repropagate(recipe, graph, session, SampleOntology()));
}
BENCHMARK(BM_Repropagate);

static void BM_EquivalentUpToIds(benchmark::State &state) {
  const auto a = rg::Annotate(LongRecipe(static_cast<int>(state.range(0))), SampleOntology());
  const auto b = a;
  for (auto _ : state) benchmark::DoNotOptimize(rg::EquivalentUpToIds(a, b));
}
BENCHMARK(BM_EquivalentUpToIds)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
