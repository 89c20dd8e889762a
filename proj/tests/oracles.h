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


// Brute-force reference implementations. They share no code with the
// library beyond the graph container, and trade speed for obviousness.

#ifndef RECIPEGRAPH_TESTS_ORACLES_H_
#define RECIPEGRAPH_TESTS_ORACLES_H_

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recipegraph/graph.h"
#include "recipegraph/ontology.h"

namespace recipegraph::testing {

inline std::vector<std::string> Direct(const RecipeGraph &graph, const std::string &action,
                                       bool inputs) {
  std::vector<std::string> out;
  for (const auto &arc : graph.arcs()) {
    if (arc.from != action) continue;
    const bool is_input = arc.label == ArcLabel::kHasDOInput || arc.label == ArcLabel::kHasPCInput;
    if (inputs ? is_input : arc.label == ArcLabel::kHasOutput) out.push_back(arc.to);
  }
  return out;
}

// Calls `visit` with every linear extension of the isBefore relation.
inline void ForEachLinearExtension(const RecipeGraph &graph,
                                   const std::function<void(const std::vector<std::string> &)> &visit) {
  std::vector<std::string> actions;
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind == VertexKind::kAction) actions.push_back(id);
  }
  std::map<std::string, std::vector<std::string>> preds;
  for (const auto &arc : graph.arcs()) {
    if (arc.label == ArcLabel::kIsBefore) preds[arc.to].push_back(arc.from);
  }
  std::vector<std::string> order;
  std::set<std::string> placed;
  std::function<void()> extend = [&] {
    if (order.size() == actions.size()) {
      visit(order);
      return;
    }
    for (const auto &a : actions) {
      if (placed.count(a)) continue;
      const auto &p = preds[a];
      if (!std::all_of(p.begin(), p.end(), [&](const auto &x) { return placed.count(x) > 0; })) {
        continue;
      }
      placed.insert(a);
      order.push_back(a);
      extend();
      order.pop_back();
      placed.erase(a);
    }
  };
  extend();
}

// Simulates the preparation in every admissible order, stopping just before
// `at` (or after the last action for "end"), and keeps the foods present in
// all of them.
inline std::set<std::string> ReplayFrontier(const RecipeGraph &graph, const std::string &at) {
  std::set<std::string> initial;
  std::set<std::string> produced;
  for (const auto &arc : graph.arcs()) {
    if (arc.label == ArcLabel::kHasOutput) produced.insert(arc.to);
  }
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind == VertexKind::kFood && !produced.count(id)) initial.insert(id);
  }
  std::optional<std::set<std::string>> common;
  ForEachLinearExtension(graph, [&](const std::vector<std::string> &order) {
    std::set<std::string> present = initial;
    for (const auto &a : order) {
      if (a == at) break;
      for (const auto &f : Direct(graph, a, true)) present.erase(f);
      for (const auto &f : Direct(graph, a, false)) present.insert(f);
    }
    if (!common) {
      common = present;
    } else {
      std::set<std::string> both;
      std::set_intersection(common->begin(), common->end(), present.begin(), present.end(),
                            std::inserter(both, both.end()));
      common = std::move(both);
    }
  });
  return common.value_or(initial);
}

// Weighted Jaccard written as sum(min)/sum(max) over per-concept weight
// vectors; a concept outside the target set weighs 1.
inline double BruteWeightedJaccard(const std::set<std::string> &provenance,
                                   const std::map<std::string, double> &target) {
  std::set<std::string> universe = provenance;
  for (const auto &[c, w] : target) universe.insert(c);
  double lo = 0.0;
  double hi = 0.0;
  for (const auto &c : universe) {
    const double weight = target.count(c) ? target.at(c) : 1.0;
    const double a = provenance.count(c) ? weight : 0.0;
    const double b = target.count(c) ? weight : 0.0;
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
  return hi == 0.0 ? 0.0 : lo / hi;
}

struct BranchOracle {
  bool nothing_to_cut = false;
  bool unique_maximum = true;
  std::set<std::string> actions;
  std::set<std::string> vertices;
  std::set<Arc> exits;
};

// Enumerates every action subset, keeps those where each action has inputs
// and all of them inside seeds + outputs of the subset, and every vertex is
// connected to a seed; returns the inclusion-maximal one.
inline BranchOracle ExhaustiveBranch(const RecipeGraph &graph, const std::string &concept_id,
                                     const Ontology &ontology) {
  std::set<std::string> seeds;
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind == VertexKind::kFood && v.origin == FoodOrigin::kIngredientList && v.concept_id &&
        ontology.IsA(*v.concept_id, concept_id)) {
      seeds.insert(id);
    }
  }
  std::vector<std::string> actions;
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind == VertexKind::kAction) actions.push_back(id);
  }
  auto members = [&](unsigned mask) {
    std::set<std::string> s;
    for (size_t i = 0; i < actions.size(); ++i) {
      if (mask & (1u << i)) s.insert(actions[i]);
    }
    return s;
  };
  auto foods_of = [&](const std::set<std::string> &s) {
    std::set<std::string> foods = seeds;
    for (const auto &a : s) {
      for (const auto &f : Direct(graph, a, false)) foods.insert(f);
    }
    return foods;
  };
  auto valid = [&](const std::set<std::string> &s) {
    const auto foods = foods_of(s);
    for (const auto &a : s) {
      const auto in = Direct(graph, a, true);
      if (in.empty()) return false;
      for (const auto &f : in) {
        if (!foods.count(f)) return false;
      }
    }
    // Connectivity to the seeds through input/output arcs inside the subset.
    std::set<std::string> reached = seeds;
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto &a : s) {
        if (reached.count(a)) continue;
        const auto in = Direct(graph, a, true);
        if (std::any_of(in.begin(), in.end(), [&](const auto &f) { return reached.count(f) > 0; })) {
          reached.insert(a);
          for (const auto &f : Direct(graph, a, false)) reached.insert(f);
          grew = true;
        }
      }
    }
    return std::all_of(s.begin(), s.end(), [&](const auto &a) { return reached.count(a) > 0; });
  };

  std::vector<std::set<std::string>> valid_sets;
  for (unsigned mask = 0; mask < (1u << actions.size()); ++mask) {
    auto s = members(mask);
    if (valid(s)) valid_sets.push_back(std::move(s));
  }
  std::vector<std::set<std::string>> maximal;
  for (const auto &s : valid_sets) {
    bool dominated = false;
    for (const auto &t : valid_sets) {
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        dominated = true;
      }
    }
    if (!dominated) maximal.push_back(s);
  }

  BranchOracle oracle;
  oracle.unique_maximum = maximal.size() == 1;
  oracle.actions = maximal.front();
  oracle.vertices = foods_of(oracle.actions);
  oracle.vertices.insert(oracle.actions.begin(), oracle.actions.end());
  for (const auto &[id, v] : graph.vertices()) {
    if (v.kind != VertexKind::kClause) continue;
    bool any = false;
    bool all = true;
    for (const auto &arc : graph.arcs()) {
      if (arc.to != id) continue;
      any = true;
      if (!oracle.actions.count(arc.from)) all = false;
    }
    if (any && all) oracle.vertices.insert(id);
  }
  for (const auto &arc : graph.arcs()) {
    const bool is_input = arc.label == ArcLabel::kHasDOInput || arc.label == ArcLabel::kHasPCInput;
    if (is_input && oracle.vertices.count(arc.to) && !oracle.vertices.count(arc.from)) {
      oracle.exits.insert(arc);
    }
  }
  oracle.nothing_to_cut = oracle.exits.empty();
  return oracle;
}

}  // namespace recipegraph::testing

#endif  // RECIPEGRAPH_TESTS_ORACLES_H_
