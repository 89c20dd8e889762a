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

#include "recipegraph/adaptation.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "recipegraph/error.h"

namespace recipegraph {
namespace {

size_t ClauseNumber(const std::string &clause_id) {
  const size_t underscore = clause_id.rfind('_');
  if (underscore == std::string::npos) return 0;
  try {
    return std::stoul(clause_id.substr(underscore + 1));
  } catch (...) {
    return 0;
  }
}

size_t ActionRank(const RecipeGraph &graph, const std::string &action) {
  auto clause = graph.ClauseOf(action);
  return clause ? ClauseNumber(*clause) : 0;
}

std::string LexemeOf(const std::string &id) {
  const size_t colon = id.find(':');
  const size_t underscore = id.rfind('_');
  if (colon == std::string::npos || underscore == std::string::npos || underscore <= colon) {
    return "x";
  }
  return id.substr(colon + 1, underscore - colon - 1);
}

bool IsSeparator(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == ';' || c == ':' ||
         c == '.' || c == '!' || c == '?';
}

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

// One separator run at a seam reduced to its strongest mark.
std::string NormalizeRun(const std::string &run, bool at_start, bool at_end) {
  if (at_start) return "";
  const size_t terminal = run.find_first_of(".!?");
  if (at_end) return terminal == std::string::npos ? "" : std::string(1, run[terminal]);
  if (terminal != std::string::npos) return std::string(1, run[terminal]) + " ";
  if (run.find(';') != std::string::npos) return "; ";
  if (run.find(',') != std::string::npos) return ", ";
  if (run.find(':') != std::string::npos) return ": ";
  return " ";
}

size_t LeadingConjunction(const std::string &text) {
  for (std::string_view word : {"and then ", "and ", "then ", "but "}) {
    if (text.size() > word.size()) {
      bool match = true;
      for (size_t i = 0; i < word.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) != word[i]) {
          match = false;
          break;
        }
      }
      if (match) return word.size();
    }
  }
  return 0;
}

nlohmann::json ArcJson(const Arc &arc) {
  return {{"from", arc.from}, {"to", arc.to}, {"label", ArcLabelName(arc.label)}};
}

nlohmann::json BranchJson(const Branch &branch) {
  nlohmann::json exits = nlohmann::json::array();
  for (const auto &arc : branch.exits) exits.push_back(ArcJson(arc));
  return {{"seeds", branch.seeds},
          {"vertices", branch.vertices},
          {"actions", branch.actions},
          {"clauses", branch.clauses},
          {"exits", std::move(exits)}};
}

struct SpanGroup {
  size_t start = 0;
  size_t end = 0;
  std::vector<std::string> clauses;
};

// Clause spans in text order, merged when only separators lie between them.
std::vector<SpanGroup> GroupClauses(const RecipeGraph &graph,
                                    const std::vector<std::string> &clauses,
                                    const std::string &text) {
  std::vector<std::pair<TextSpan, std::string>> spans;
  for (const auto &c : clauses) {
    const Vertex &v = graph.GetVertex(c);
    if (!v.text_span || v.text_span->end > text.size() || v.text_span->start > v.text_span->end) {
      throw Error(ErrorCode::kInvalidInput, "clause " + c + " has no valid text span");
    }
    spans.emplace_back(*v.text_span, c);
  }
  std::sort(spans.begin(), spans.end(), [](const auto &a, const auto &b) {
    return std::pair(a.first.start, a.second) < std::pair(b.first.start, b.second);
  });
  std::vector<SpanGroup> groups;
  for (const auto &[span, id] : spans) {
    if (!groups.empty()) {
      SpanGroup &last = groups.back();
      bool joined = span.start <= last.end;
      if (!joined) {
        joined = std::all_of(text.begin() + last.end, text.begin() + span.start, IsSeparator);
      }
      if (joined) {
        last.end = std::max(last.end, span.end);
        last.clauses.push_back(id);
        continue;
      }
    }
    groups.push_back({span.start, span.end, {id}});
  }
  return groups;
}

// Copy of `graph` with vertex ids renamed and clause spans replaced.
RecipeGraph Rebuild(const RecipeGraph &graph, const std::map<std::string, std::string> &rename,
                    const std::map<std::string, TextSpan> &spans) {
  auto id_of = [&](const std::string &id) {
    auto it = rename.find(id);
    return it == rename.end() ? id : it->second;
  };
  RecipeGraph out(graph.recipe_id());
  out.set_version(graph.version());
  for (const auto &[key, value] : graph.counters()) out.RestoreCounter(key, value);
  for (const auto &[id, v] : graph.vertices()) {
    Vertex copy = v;
    copy.id = id_of(id);
    if (auto it = spans.find(id); it != spans.end()) copy.text_span = it->second;
    out.AddVertex(std::move(copy));
  }
  for (const auto &arc : graph.arcs()) out.AddArc({id_of(arc.from), id_of(arc.to), arc.label});
  return out;
}

}  // namespace

Branch ExtractBranch(const RecipeGraph &graph, const std::string &concept_id,
                     const Ontology &ontology) {
  Branch branch;
  for (const auto &food : graph.VertexIds(VertexKind::kFood)) {
    const Vertex &v = graph.GetVertex(food);
    if (v.origin == FoodOrigin::kIngredientList && v.concept_id &&
        ontology.Subsumes(concept_id, *v.concept_id)) {
      branch.seeds.push_back(food);
    }
  }
  if (branch.seeds.empty()) {
    throw Error(ErrorCode::kInvalidInput,
                "no ingredient of " + graph.recipe_id() + " is a " + concept_id);
  }
  branch.vertices.insert(branch.seeds.begin(), branch.seeds.end());

  const auto actions = graph.VertexIds(VertexKind::kAction);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &action : actions) {
      if (branch.vertices.count(action)) continue;
      const auto inputs = graph.InputsOf(action);
      if (inputs.empty()) continue;
      if (!std::all_of(inputs.begin(), inputs.end(),
                       [&](const std::string &f) { return branch.vertices.count(f) > 0; })) {
        continue;
      }
      branch.vertices.insert(action);
      for (const auto &out : graph.OutputsOf(action)) branch.vertices.insert(out);
      branch.actions.push_back(action);
      changed = true;
    }
  }
  std::sort(branch.actions.begin(), branch.actions.end(), [&](const auto &a, const auto &b) {
    return std::pair(ActionRank(graph, a), a) < std::pair(ActionRank(graph, b), b);
  });

  std::set<std::string> clauses;
  for (const auto &action : branch.actions) {
    auto clause = graph.ClauseOf(action);
    if (!clause || clauses.count(*clause)) continue;
    bool owned = true;
    for (const auto &arc : graph.InArcs(*clause)) {
      if (!branch.vertices.count(arc.from)) owned = false;
    }
    if (owned) clauses.insert(*clause);
  }
  branch.clauses.assign(clauses.begin(), clauses.end());
  std::sort(branch.clauses.begin(), branch.clauses.end(), [](const auto &a, const auto &b) {
    return ClauseNumber(a) < ClauseNumber(b);
  });
  branch.vertices.insert(clauses.begin(), clauses.end());

  for (const auto &id : branch.vertices) {
    if (graph.GetVertex(id).kind != VertexKind::kFood) continue;
    for (const auto &arc : graph.InArcs(id)) {
      if (IsInputLabel(arc.label) && !branch.vertices.count(arc.from)) branch.exits.push_back(arc);
    }
  }
  if (branch.exits.empty()) {
    throw Error(ErrorCode::kInvalidInput,
                "the " + concept_id + " branch never joins the rest of the recipe: nothing to cut");
  }
  std::sort(branch.exits.begin(), branch.exits.end(), [&](const Arc &a, const Arc &b) {
    return std::pair(ActionRank(graph, a.from), a) < std::pair(ActionRank(graph, b.from), b);
  });
  return branch;
}

// Text splicing --------------------------------------------------------------

std::optional<size_t> PatchedText::MapOriginal(size_t pos) const {
  for (const auto &piece : pieces_) {
    if (piece.kind != Piece::kKept) continue;
    if (pos >= piece.cut_from && pos < piece.source) return piece.out;
    if (pos >= piece.source && pos <= piece.source + piece.text.size()) {
      return piece.out + (pos - piece.source);
    }
  }
  return std::nullopt;
}

std::optional<size_t> PatchedText::MapInserted(size_t index, size_t pos) const {
  for (const auto &piece : pieces_) {
    if (piece.kind != Piece::kInserted || piece.patch != index) continue;
    if (pos >= piece.cut_from && pos < piece.source) return piece.out;
    if (pos >= piece.source && pos <= piece.source + piece.text.size()) {
      return piece.out + (pos - piece.source);
    }
  }
  return std::nullopt;
}

PatchedText ApplyTextPatchesMapped(std::string_view text, std::vector<TextPatch> patches) {
  using Piece = PatchedText::Piece;
  PatchedText result;
  std::stable_sort(patches.begin(), patches.end(),
                   [](const auto &a, const auto &b) { return a.start < b.start; });
  for (size_t i = 0; i < patches.size(); ++i) {
    if (patches[i].start > patches[i].end || patches[i].end > text.size()) {
      throw Error(ErrorCode::kInvalidInput, "text patch out of range");
    }
    if (i > 0 && patches[i].start < patches[i - 1].end) {
      throw Error(ErrorCode::kInvalidInput, "overlapping text patches");
    }
  }
  if (patches.empty()) {
    result.text_ = std::string(text);
    result.pieces_.push_back({Piece::kKept, result.text_, 0, 0, 0, 0, false});
    return result;
  }

  std::vector<Piece> raw;
  size_t pos = 0;
  for (size_t i = 0; i < patches.size(); ++i) {
    raw.push_back({Piece::kKept, std::string(text.substr(pos, patches[i].start - pos)), pos, pos,
                   0, 0, false});
    raw.push_back({Piece::kInserted, patches[i].replacement, 0, 0, i, 0, false});
    pos = patches[i].end;
  }
  raw.push_back({Piece::kKept, std::string(text.substr(pos)), pos, pos, 0, 0, false});

  std::vector<Piece> out;
  std::string run;
  bool seam = false;
  auto cut_tail = [](Piece &p) {
    size_t n = p.text.size();
    while (n > 0 && IsSeparator(p.text[n - 1])) --n;
    std::string tail = p.text.substr(n);
    p.text.resize(n);
    return tail;
  };
  auto cut_lead = [](Piece &p) {
    size_t n = 0;
    while (n < p.text.size() && IsSeparator(p.text[n])) ++n;
    std::string lead = p.text.substr(0, n);
    p.text.erase(0, n);
    p.source += n;
    return lead;
  };
  auto emit_separator = [&](bool at_end) {
    std::string sep = NormalizeRun(run, out.empty(), at_end);
    if (!sep.empty()) out.push_back({Piece::kSeparator, sep, 0, 0, 0, 0, false});
    run.clear();
  };

  for (auto &piece : raw) {
    if (piece.kind == Piece::kInserted) {
      if (!seam) {
        seam = true;
        if (!out.empty()) run += cut_tail(out.back());
      }
      run += cut_lead(piece);
      if (piece.text.empty()) continue;
      emit_separator(false);
      piece.seam_lead = true;
      out.push_back(piece);
      run = cut_tail(out.back());
      continue;
    }
    if (!seam) {
      if (!piece.text.empty()) out.push_back(piece);
      continue;
    }
    run += cut_lead(piece);
    if (piece.text.empty()) continue;
    emit_separator(false);
    piece.seam_lead = true;
    out.push_back(piece);
    seam = false;
  }
  if (seam) {
    if (!out.empty()) run = cut_tail(out.back()) + run;
    emit_separator(true);
  }

  // Case and conjunctions at the seams.
  bool sentence_start = true;
  for (auto &piece : out) {
    if (piece.kind == Piece::kSeparator) {
      sentence_start = piece.text.find_first_of(".!?") != std::string::npos;
      continue;
    }
    if (piece.seam_lead && sentence_start) {
      if (const size_t n = LeadingConjunction(piece.text)) {
        piece.text.erase(0, n);
        piece.source += n;
      }
      if (!piece.text.empty()) {
        piece.text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(piece.text[0])));
      }
    } else if (piece.kind == Piece::kInserted && !piece.text.empty()) {
      piece.text[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(piece.text[0])));
    }
    sentence_start = false;
  }

  // Final period.
  if (!out.empty()) {
    Piece &last = out.back();
    size_t n = last.text.size();
    while (n > 0 && std::isspace(static_cast<unsigned char>(last.text[n - 1]))) --n;
    if (n > 0 && !IsTerminal(last.text[n - 1])) {
      if (last.kind == Piece::kSeparator) {
        last.text.insert(n, ".");
      } else {
        last.text.resize(n);
        out.push_back({Piece::kSeparator, ".", 0, 0, 0, 0, false});
      }
    }
  }

  for (auto &piece : out) {
    piece.out = result.text_.size();
    result.text_ += piece.text;
  }
  result.pieces_ = std::move(out);
  return result;
}

std::string ApplyTextPatches(std::string_view text, const std::vector<TextPatch> &patches) {
  return ApplyTextPatchesMapped(text, patches).text();
}

// Prune and graft ----------------------------------------------------------

AdaptationResult Adapt(const Recipe &recipe, const RecipeGraph &graph,
                       const AdaptationRequest &request, const Recipe &donor,
                       const RecipeGraph &donor_graph, const Ontology &ontology) {
  AdaptationResult result;
  result.pruned = ExtractBranch(graph, request.alpha, ontology);
  result.grafted = ExtractBranch(donor_graph, request.beta, ontology);
  const Branch &alpha = result.pruned;
  const Branch &beta = result.grafted;

  const std::set<std::string> alpha_actions(alpha.actions.begin(), alpha.actions.end());
  const std::set<std::string> beta_actions(beta.actions.begin(), beta.actions.end());
  std::vector<std::string> outside;
  std::map<std::string, std::set<std::string>> before;
  for (const auto &action : graph.VertexIds(VertexKind::kAction)) {
    before[action] = ActionsBefore(graph, action);
    if (!alpha_actions.count(action)) outside.push_back(action);
  }

  auto crossing = [](const Arc &arc, const std::set<std::string> &inside) {
    return arc.label == ArcLabel::kIsDuring && inside.count(arc.from) != inside.count(arc.to);
  };
  for (const auto &arc : graph.arcs()) {
    if (crossing(arc, alpha_actions)) result.dropped_arcs.push_back(arc);
  }
  for (const auto &arc : donor_graph.arcs()) {
    if (crossing(arc, beta_actions)) result.dropped_arcs.push_back(arc);
  }

  // Outside actions right before and right after the pruned branch.
  std::set<std::string> preceding, following;
  for (const auto &o : outside) {
    for (const auto &a : alpha_actions) {
      if (before[a].count(o)) preceding.insert(o);
      if (before[o].count(a)) following.insert(o);
    }
  }
  std::vector<std::string> last_before, first_after;
  for (const auto &p : preceding) {
    if (std::none_of(preceding.begin(), preceding.end(),
                     [&](const std::string &q) { return before[q].count(p) > 0; })) {
      last_before.push_back(p);
    }
  }
  for (const auto &s : following) {
    if (std::none_of(following.begin(), following.end(),
                     [&](const std::string &q) { return before[s].count(q) > 0; })) {
      first_after.push_back(s);
    }
  }

  RecipeGraph g = graph;
  for (const auto &id : alpha.vertices) g.RemoveVertex(id);

  // Import the donor branch under fresh ids, foods first.
  std::map<std::string, std::string> imported;
  for (VertexKind kind : {VertexKind::kFood, VertexKind::kAction, VertexKind::kClause}) {
    for (const auto &id : beta.vertices) {
      const Vertex &source = donor_graph.GetVertex(id);
      if (source.kind != kind) continue;
      Vertex copy = source;
      copy.id = g.NewId(kind, LexemeOf(id));
      imported[id] = copy.id;
      g.AddVertex(std::move(copy));
    }
  }
  for (const auto &arc : donor_graph.arcs()) {
    if (imported.count(arc.from) && imported.count(arc.to)) {
      g.AddArc({imported[arc.from], imported[arc.to], arc.label});
    }
  }

  const std::string &graft_output = imported.at(beta.cut_arc().to);
  for (const auto &exit : alpha.exits) {
    Arc arc{exit.from, graft_output, exit.label};
    if (!g.HasArc(arc)) g.AddArc(arc);
  }

  // Temporal stitching.
  std::vector<std::string> graft_first, graft_last;
  for (const auto &a : beta.actions) {
    bool has_pred = false, has_succ = false;
    for (const auto &b : beta.actions) {
      if (donor_graph.HasArc({b, a, ArcLabel::kIsBefore})) has_pred = true;
      if (donor_graph.HasArc({a, b, ArcLabel::kIsBefore})) has_succ = true;
    }
    if (!has_pred) graft_first.push_back(imported.at(a));
    if (!has_succ) graft_last.push_back(imported.at(a));
  }
  auto link = [&](const std::string &from, const std::string &to) {
    Arc arc{from, to, ArcLabel::kIsBefore};
    if (!g.HasArc(arc)) g.AddArc(arc);
  };
  if (graft_first.empty()) {
    for (const auto &p : last_before) {
      for (const auto &s : first_after) link(p, s);
    }
  } else {
    for (const auto &p : last_before) {
      for (const auto &b : graft_first) link(p, b);
    }
    for (const auto &b : graft_last) {
      for (const auto &s : first_after) link(b, s);
    }
  }
  // Orderings between outside actions that only held through the branch.
  for (const auto &y : outside) {
    for (const auto &x : outside) {
      if (before[y].count(x) && !ActionsBefore(g, y).count(x)) link(x, y);
    }
  }

  // Outputs that inherited the removed ingredient's concept.
  std::vector<std::string> order = g.VertexIds(VertexKind::kAction);
  std::sort(order.begin(), order.end(), [&](const auto &a, const auto &b) {
    return std::pair(ActionRank(g, a), a) < std::pair(ActionRank(g, b), b);
  });
  for (const auto &action : order) {
    for (const auto &out : g.OutputsOf(action)) {
      const auto &c = g.GetVertex(out).concept_id;
      if (!c || !ontology.Subsumes(request.alpha, *c)) continue;
      std::optional<std::string> principal;
      const auto direct = g.Targets(action, ArcLabel::kHasDOInput);
      const auto complement = g.Targets(action, ArcLabel::kHasPCInput);
      if (direct.size() == 1) {
        principal = g.GetVertex(direct.front()).concept_id;
      } else if (direct.empty() && complement.size() == 1) {
        principal = g.GetVertex(complement.front()).concept_id;
      }
      g.SetConcept(out, principal);
    }
  }

  // Text: drop the pruned clauses, insert the donor clauses at the first gap.
  const auto removed = GroupClauses(graph, alpha.clauses, recipe.preparation);
  const auto inserted = GroupClauses(donor_graph, beta.clauses, donor.preparation);
  std::string replacement;
  std::map<std::string, size_t> offset_in_replacement;
  for (const auto &group : inserted) {
    if (!replacement.empty()) replacement += ", ";
    const size_t base = replacement.size();
    replacement += donor.preparation.substr(group.start, group.end - group.start);
    for (const auto &c : group.clauses) {
      offset_in_replacement[c] = base + donor_graph.GetVertex(c).text_span->start - group.start;
    }
  }
  if (removed.empty() && !replacement.empty()) {
    throw Error(ErrorCode::kInvalidInput,
                "the " + request.alpha + " branch has no clause to put the donor text in");
  }
  for (size_t i = 0; i < removed.size(); ++i) {
    result.patches.push_back({removed[i].start, removed[i].end, i == 0 ? replacement : ""});
  }
  const PatchedText patched = ApplyTextPatchesMapped(recipe.preparation, result.patches);

  std::map<std::string, TextSpan> spans;
  std::map<std::string, std::string> source_of;
  for (const auto &[from, to] : imported) source_of[to] = from;
  for (const auto &clause : g.VertexIds(VertexKind::kClause)) {
    const TextSpan old = *g.GetVertex(clause).text_span;
    std::optional<size_t> start, end;
    if (auto it = source_of.find(clause); it != source_of.end()) {
      const size_t offset = offset_in_replacement.at(it->second);
      const TextSpan donor_span = *donor_graph.GetVertex(it->second).text_span;
      start = patched.MapInserted(0, offset);
      end = patched.MapInserted(0, offset + donor_span.end - donor_span.start);
    } else {
      start = patched.MapOriginal(old.start);
      end = patched.MapOriginal(old.end);
    }
    if (!start || !end || *end < *start) {
      throw Error(ErrorCode::kInternal, "lost the text span of " + clause + " while splicing");
    }
    spans[clause] = {*start, *end};
  }

  // Renumber clauses in text order.
  std::vector<std::string> clauses = g.VertexIds(VertexKind::kClause);
  std::sort(clauses.begin(), clauses.end(), [&](const auto &a, const auto &b) {
    return std::pair(spans[a].start, a) < std::pair(spans[b].start, b);
  });
  std::map<std::string, std::string> rename;
  for (size_t i = 0; i < clauses.size(); ++i) {
    rename[clauses[i]] = "Clause:c_" + std::to_string(i + 1);
  }
  result.graph = Rebuild(g, rename, spans);
  result.graph.set_version(1);

  result.recipe = recipe;
  result.recipe.preparation = patched.text();
  std::vector<Ingredient> ingredients;
  bool placed = false;
  for (const auto &ing : recipe.ingredients) {
    if (!ontology.Subsumes(request.alpha, ing.concept_id)) {
      ingredients.push_back(ing);
      continue;
    }
    if (placed) continue;
    placed = true;
    for (const auto &d : donor.ingredients) {
      if (ontology.Subsumes(request.beta, d.concept_id)) ingredients.push_back(d);
    }
  }
  result.recipe.ingredients = std::move(ingredients);
  return result;
}

nlohmann::json TextPatchToJson(const TextPatch &patch) {
  return {{"start", patch.start}, {"end", patch.end}, {"replacement", patch.replacement}};
}

nlohmann::json AdaptationResultToJson(const AdaptationResult &result) {
  nlohmann::json patches = nlohmann::json::array();
  for (const auto &p : result.patches) patches.push_back(TextPatchToJson(p));
  nlohmann::json dropped = nlohmann::json::array();
  for (const auto &arc : result.dropped_arcs) dropped.push_back(ArcJson(arc));
  return {{"graph", GraphToJson(result.graph)},
          {"text", result.recipe.preparation},
          {"recipe", RecipeToJson(result.recipe)},
          {"patches", std::move(patches)},
          {"dropped_arcs", std::move(dropped)},
          {"pruned", BranchJson(result.pruned)},
          {"grafted", BranchJson(result.grafted)}};
}

}  // namespace recipegraph
