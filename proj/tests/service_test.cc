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

#include "recipegraph/correction.h"
#include "recipegraph/error.h"
#include "service_harness.h"
#include "test_support.h"

namespace recipegraph {
namespace {

using nlohmann::json;
using testing::SampleOntology;

json EditJson(EditKind kind, const std::string &clause, const Arc &arc = {},
              const std::string &concept_id = "") {
  EditOperation e;
  e.kind = kind;
  e.anchor_clause = clause;
  e.arc = arc;
  if (!concept_id.empty()) e.concept_id = concept_id;
  return EditToJson(e);
}

json ButterEdits() {
  return json::array({EditJson(EditKind::kAddAction, "Clause:c_3", {}, "Melt"),
                      EditJson(EditKind::kAddArc, "Clause:c_3",
                               {"Action:melt_3", "Food:butter_1", ArcLabel::kHasDOInput}),
                      EditJson(EditKind::kAddArc, "Clause:c_3",
                               {"Action:melt_3", "Clause:c_3", ArcLabel::kIsRelatedToClause})});
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = testing::ScratchDir("svc");
    server_ = std::make_unique<testing::RunningService>(root_, without_melt_);
    for (const char *name : {"chocolate-cookies", "glutinous-rice-mango", "figs-honey"}) {
      auto [status, body] = server_->Post("/recipes", RecipeToJson(testing::Fixture(name)));
      ASSERT_EQ(status, 201) << body.dump();
    }
  }
  void TearDown() override {
    server_.reset();
    std::filesystem::remove_all(root_);
  }

  Ontology without_melt_ = testing::OntologyWithoutVerb("Melt");
  std::filesystem::path root_;
  std::unique_ptr<testing::RunningService> server_;
};

TEST_F(ServiceTest, RecipesCrud) {
  auto [status, list] = server_->Get("/recipes");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(list.size(), 3u);
  auto [again, err] = server_->Post("/recipes", RecipeToJson(testing::Fixture("figs-honey")));
  EXPECT_EQ(again, 409);
  EXPECT_EQ(err["reason"], "exists");
  EXPECT_EQ(server_->Get("/recipes/figs-honey").first, 200);
  auto [missing, body] = server_->Get("/recipes/nope");
  EXPECT_EQ(missing, 404);
  EXPECT_EQ(body["error"], "not_found");
  EXPECT_EQ(server_->Get("/recipes/figs-honey/graph").first, 404);
  EXPECT_EQ(server_->Post("/recipes", json{{"id", 3}}).first, 400);
  auto raw = server_->client().Post("/recipes", "{not json", "application/json");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 400);
  EXPECT_EQ(server_->Get("/ontology").first, 200);
}

TEST_F(ServiceTest, ButterScenarioEndToEnd) {
  auto [s1, graph] = server_->Post("/recipes/chocolate-cookies/annotate", json::object());
  ASSERT_EQ(s1, 200) << graph.dump();
  EXPECT_EQ(graph["version"], 1);
  auto [s2, report] = server_->Get("/recipes/chocolate-cookies/graph/validate");
  EXPECT_GE(report["component_count"].get<int>(), 2);

  auto [s3, zoom] = server_->Get("/recipes/chocolate-cookies/graph/zoom?focus=Action:cream_4");
  ASSERT_EQ(s3, 200) << zoom.dump();
  const auto zoomed = GraphFromJson(zoom);
  EXPECT_TRUE(zoomed.FindVertex("Food:butter_1"));

  auto [s4, edited] = server_->Post("/recipes/chocolate-cookies/edits",
                                    json{{"base_version", 1}, {"edits", ButterEdits()}});
  ASSERT_EQ(s4, 200) << edited.dump();
  EXPECT_EQ(edited["version"], 2);
  auto [s5, session] = server_->Get("/recipes/chocolate-cookies/session");
  EXPECT_EQ(session["validated_cursor"], 3);

  auto [s6, dry] = server_->Post("/recipes/chocolate-cookies/repropagate?dry_run=true", json::object());
  ASSERT_EQ(s6, 200) << dry.dump();
  EXPECT_FALSE(dry["stored"].get<bool>());
  EXPECT_EQ(server_->store().LatestVersion("chocolate-cookies"), 2);

  auto [s7, repro] = server_->Post("/recipes/chocolate-cookies/repropagate", json{{"base_version", 2}});
  ASSERT_EQ(s7, 200) << repro.dump();
  EXPECT_TRUE(repro["stored"].get<bool>());
  EXPECT_EQ(repro["graph"]["version"], 3);

  auto [s8, final_report] = server_->Get("/recipes/chocolate-cookies/graph/validate");
  EXPECT_EQ(final_report["component_count"], 1);
  EXPECT_TRUE(final_report["violations"].empty()) << final_report.dump();
  auto [s9, latest] = server_->Get("/recipes/chocolate-cookies/graph");
  EXPECT_TRUE(EquivalentUpToIds(GraphFromJson(latest),
                                Annotate(testing::Fixture("chocolate-cookies"), SampleOntology())));

  // Older versions stay readable.
  auto [s10, v1] = server_->Get("/recipes/chocolate-cookies/graph?version=1");
  EXPECT_EQ(s10, 200);
  EXPECT_EQ(v1["version"], 1);
  EXPECT_EQ(server_->Get("/recipes/chocolate-cookies/graph?version=9").first, 404);
  EXPECT_EQ(server_->Get("/recipes/chocolate-cookies/graph?version=x").first, 400);
}

TEST_F(ServiceTest, StaleVersionIsAConflictAndChangesNothing) {
  ASSERT_EQ(server_->Post("/recipes/chocolate-cookies/annotate", json::object()).first, 200);
  ASSERT_EQ(server_->Post("/recipes/chocolate-cookies/edits",
                          json{{"base_version", 1}, {"edits", ButterEdits()}})
                .first,
            200);
  const auto before = testing::Snapshot(root_);
  auto [status, body] = server_->Post("/recipes/chocolate-cookies/edits",
                                      json{{"base_version", 1}, {"edits", ButterEdits()}});
  EXPECT_EQ(status, 409);
  EXPECT_EQ(body["reason"], "version_mismatch");
  auto [rs, rb] = server_->Post("/recipes/chocolate-cookies/repropagate", json{{"base_version", 1}});
  EXPECT_EQ(rs, 409);
  EXPECT_EQ(testing::Snapshot(root_), before);
  EXPECT_EQ(server_->store().LatestVersion("chocolate-cookies"), 2);
}

TEST_F(ServiceTest, EditErrorsMapToStatuses) {
  ASSERT_EQ(server_->Post("/recipes/chocolate-cookies/annotate", json::object()).first, 200);
  ASSERT_EQ(server_->Post("/recipes/chocolate-cookies/edits",
                          json{{"base_version", 1}, {"edits", ButterEdits()}})
                .first,
            200);
  const auto before = testing::Snapshot(root_);
  auto early = json::array({EditJson(EditKind::kAddArc, "Clause:c_1",
                                     {"Action:sift_1", "Food:butter_1", ArcLabel::kHasPCInput})});
  auto [s1, b1] = server_->Post("/recipes/chocolate-cookies/edits", json{{"base_version", 2}, {"edits", early}});
  EXPECT_EQ(s1, 409);
  EXPECT_EQ(b1["reason"], "text_order");
  auto bad = json::array({EditJson(EditKind::kAddArc, "Clause:c_5",
                                   {"Action:melt_3", "Clause:c_5", ArcLabel::kHasDOInput})});
  auto [s2, b2] = server_->Post("/recipes/chocolate-cookies/edits", json{{"base_version", 2}, {"edits", bad}});
  EXPECT_EQ(s2, 422);
  EXPECT_EQ(b2["reason"], "typing");
  EXPECT_EQ(server_->Post("/recipes/chocolate-cookies/edits", json{{"edits", bad}}).first, 400);
  EXPECT_EQ(testing::Snapshot(root_), before);
}

TEST_F(ServiceTest, GetsAreSideEffectFree) {
  ASSERT_EQ(server_->Post("/recipes/chocolate-cookies/annotate", json::object()).first, 200);
  const auto before = testing::Snapshot(root_);
  for (const char *path : {"/recipes", "/recipes/chocolate-cookies", "/recipes/chocolate-cookies/graph",
                           "/recipes/chocolate-cookies/graph/validate",
                           "/recipes/chocolate-cookies/session",
                           "/recipes/chocolate-cookies/graph/zoom?focus=Action:sift_1"}) {
    auto first = server_->Get(path);
    auto second = server_->Get(path);
    EXPECT_EQ(first.first, 200) << path;
    EXPECT_EQ(first, second) << path;
  }
  EXPECT_EQ(testing::Snapshot(root_), before);
  EXPECT_EQ(server_->Get("/recipes/chocolate-cookies/graph/zoom").first, 400);
  EXPECT_EQ(server_->Get("/recipes/chocolate-cookies/graph/zoom?focus=Food:butter_1").first, 400);
}

TEST_F(ServiceTest, AdaptOverHttp) {
  auto [status, body] = server_->Post("/recipes/glutinous-rice-mango/adapt",
                                      json{{"alpha", "Mango"}, {"beta", "Fig"}, {"donor_id", "figs-honey"}});
  ASSERT_EQ(status, 200) << body.dump();
  for (const auto &t : Tokenize(body["text"].get<std::string>())) {
    EXPECT_EQ(t.lower.find("mango"), std::string::npos);
  }
  EXPECT_EQ(CountComponents(GraphFromJson(body["graph"])), 1u);
  auto [s2, b2] = server_->Post("/recipes/glutinous-rice-mango/adapt",
                                json{{"alpha", "Fig"}, {"beta", "Mango"}, {"donor_id", "figs-honey"}});
  EXPECT_EQ(s2, 422);
  EXPECT_EQ(server_->Post("/recipes/glutinous-rice-mango/adapt", json{{"alpha", "Mango"}}).first, 400);
  EXPECT_EQ(server_->Post("/recipes/glutinous-rice-mango/adapt",
                          json{{"alpha", "Mango"}, {"beta", "Fig"}, {"donor_id", "nope"}})
                .first,
            404);
}

// Store ---------------------------------------------------------------------

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = testing::ScratchDir("store");
    recipe_ = testing::Fixture("glutinous-rice-mango");
    graph_ = Annotate(recipe_, SampleOntology());
  }
  void TearDown() override { std::filesystem::remove_all(root_); }

  std::filesystem::path root_;
  Recipe recipe_;
  RecipeGraph graph_;
};

TEST_F(StoreTest, VersionsAreGapFree) {
  Store store(root_);
  store.CreateRecipe(recipe_);
  EXPECT_THROW(store.CreateRecipe(recipe_), Error);
  EXPECT_EQ(store.LatestVersion(recipe_.id), 0);
  for (int i = 1; i <= 5; ++i) {
    EXPECT_EQ(store.AppendGraph(graph_).version(), i);
  }
  for (int i = 1; i <= 5; ++i) {
    ASSERT_TRUE(store.GetGraph(recipe_.id, i)) << i;
    EXPECT_TRUE(store.GetGraph(recipe_.id, i)->SameContent(graph_));
  }
  EXPECT_EQ(Store(root_).LatestVersion(recipe_.id), 5);
  EXPECT_EQ(store.ListRecipes().size(), 1u);
  EXPECT_FALSE(Store::ValidId("../etc"));
  EXPECT_FALSE(Store::ValidId(""));
  EXPECT_TRUE(Store::ValidId("glutinous-rice-mango"));
}

TEST_F(StoreTest, BrokenHeadFallsBackToTheNewestLoadableVersion) {
  {
    Store store(root_);
    store.CreateRecipe(recipe_);
    for (int i = 0; i < 3; ++i) store.AppendGraph(graph_);
  }
  const auto dir = root_ / "graphs" / recipe_.id;
  // A torn write of the next version and a garbage pointer.
  std::ofstream(dir / "v4.json") << "{\"recipe_id\": \"glutinous";
  std::ofstream(dir / "HEAD") << "banana";
  Store store(root_);
  EXPECT_EQ(store.LatestVersion(recipe_.id), 3);
  ASSERT_TRUE(store.LatestGraph(recipe_.id));
  EXPECT_TRUE(store.LatestGraph(recipe_.id)->SameContent(graph_));
  // The next write goes on top of the last good version.
  EXPECT_EQ(store.AppendGraph(graph_).version(), 4);
  EXPECT_EQ(Store(root_).LatestVersion(recipe_.id), 4);
  EXPECT_TRUE(Store(root_).GetGraph(recipe_.id, 4));
}

TEST_F(StoreTest, KillDuringWritesLeavesALoadableLatestVersion) {
  {
    Store store(root_);
    store.CreateRecipe(recipe_);
    store.AppendGraph(graph_);
  }
  std::mt19937 rng(99);
  for (int round = 0; round < 8; ++round) {
    const auto delay = std::chrono::microseconds(std::uniform_int_distribution<int>(200, 20000)(rng));
    const bool killed = testing::KillDuringWrites(
        [&] {
          Store store(root_);
          Session session;
          session.recipe_id = recipe_.id;
          store.AppendGraph(graph_, &session);
        },
        delay);
    ASSERT_TRUE(killed);
    Store store(root_);
    const auto latest = store.LatestVersion(recipe_.id);
    ASSERT_GE(latest, 1);
    const auto graph = store.LatestGraph(recipe_.id);
    ASSERT_TRUE(graph) << "round " << round;
    EXPECT_EQ(graph->version(), latest);
    EXPECT_TRUE(graph->SameContent(graph_));
    for (int64_t v = 1; v <= latest; ++v) ASSERT_TRUE(store.GetGraph(recipe_.id, v)) << v;
  }
}

TEST(AtomicWrite, ReplacesWholeFiles) {
  const auto dir = testing::ScratchDir("atomic");
  WriteFileAtomic(dir / "a.txt", "one");
  WriteFileAtomic(dir / "a.txt", "two");
  std::ifstream in(dir / "a.txt");
  std::string content((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(content, "two");
  size_t files = 0;
  for (const auto &e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace recipegraph
