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

// recipegraph: batch driver for annotation, validation, adaptation and the
// HTTP service.
//
// Exit codes: 0 success, 1 validation violations, 2 usage, 3 input errors.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "recipegraph/adaptation.h"
#include "recipegraph/annotator.h"
#include "recipegraph/error.h"
#include "recipegraph/graph.h"
#include "recipegraph/service.h"
#include "recipegraph/textproc.h"

namespace rg = recipegraph;

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

std::string ReadFileOrThrow(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rg::Error(rg::ErrorCode::kInvalidInput, "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

rg::RecipeGraph LoadGraph(const std::string &path) {
  const std::string content = ReadFileOrThrow(path);
  if (content.find_first_not_of(" \t\r\n") == std::string::npos) return rg::RecipeGraph();
  try {
    return rg::GraphFromJson(nlohmann::json::parse(content));
  } catch (const nlohmann::json::exception &e) {
    throw rg::Error(rg::ErrorCode::kInvalidInput, path + " is not JSON: " + e.what());
  }
}

void Emit(const std::string &content, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw rg::Error(rg::ErrorCode::kInvalidInput, "cannot write " + out_path);
  out << content;
}

void Summarize(const rg::ValidationReport &report) {
  for (const auto &v : report.violations) {
    std::cerr << v.rule << (v.severity == rg::Severity::kWarning ? " (warning)" : "") << ": "
              << v.message << "\n";
  }
}

rg::Service *g_service = nullptr;

void HandleSignal(int) {
  if (g_service) g_service->Stop();
}

std::string EnvOr(const char *name, const std::string &fallback) {
  const char *value = std::getenv(name);
  return value && *value ? value : fallback;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Recipe procedural text to semantic action graphs"};
  app.require_subcommand(1);

  std::string ontology_path, recipe_path, graph_path, out_path, text_path;
  std::string alpha, beta, donor_recipe_path, donor_graph_path;
  std::string store_dir, listen, static_dir;

  auto *annotate = app.add_subcommand("annotate", "Build the graph of a recipe");
  annotate->add_option("--ontology", ontology_path)->required();
  annotate->add_option("--recipe", recipe_path)->required();
  annotate->add_option("--out", out_path, "Output file (default stdout)");

  auto *validate = app.add_subcommand("validate", "Check a graph; exit 1 on violations");
  validate->add_option("--ontology", ontology_path)->required();
  validate->add_option("--graph", graph_path)->required();

  auto *adapt = app.add_subcommand("adapt", "Replace one ingredient using a donor recipe");
  adapt->add_option("--ontology", ontology_path)->required();
  adapt->add_option("--recipe", recipe_path)->required();
  adapt->add_option("--graph", graph_path)->required();
  adapt->add_option("--alpha", alpha, "Food concept to remove")->required();
  adapt->add_option("--beta", beta, "Food concept to bring in")->required();
  adapt->add_option("--donor-recipe", donor_recipe_path)->required();
  adapt->add_option("--donor-graph", donor_graph_path)->required();

  auto *dot = app.add_subcommand("export-dot", "Print a graph in Graphviz format");
  dot->add_option("--graph", graph_path)->required();

  auto *nlp = app.add_subcommand("debug-nlp", "Dump tokens, tags, chunks and clauses");
  nlp->add_option("--ontology", ontology_path)->required();
  nlp->add_option("--text", text_path)->required();

  auto *serve = app.add_subcommand("serve", "Run the HTTP service");
  ontology_path = EnvOr("RECIPEGRAPH_ONTOLOGY", "");
  store_dir = EnvOr("RECIPEGRAPH_STORE", "");
  listen = EnvOr("RECIPEGRAPH_LISTEN", "127.0.0.1:8080");
  static_dir = EnvOr("RECIPEGRAPH_STATIC", "");
  serve->add_option("--ontology", ontology_path);
  serve->add_option("--store", store_dir);
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--static", static_dir, "Directory served under /ui");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*annotate) {
      const auto ontology = rg::Ontology::LoadFile(ontology_path);
      const auto graph = rg::Annotate(rg::LoadRecipeFile(recipe_path), ontology);
      Summarize(rg::Validate(graph, ontology));
      Emit(rg::GraphToJson(graph).dump(1) + "\n", out_path);
      return 0;
    }
    if (*validate) {
      const auto ontology = rg::Ontology::LoadFile(ontology_path);
      const auto report = rg::Validate(LoadGraph(graph_path), ontology);
      std::cout << rg::ReportToJson(report).dump(1) << "\n";
      Summarize(report);
      return report.clean() ? 0 : kExitViolations;
    }
    if (*adapt) {
      const auto ontology = rg::Ontology::LoadFile(ontology_path);
      const auto recipe = rg::LoadRecipeFile(recipe_path);
      const auto donor = rg::LoadRecipeFile(donor_recipe_path);
      const auto result = rg::Adapt(recipe, LoadGraph(graph_path), {alpha, beta, donor.id}, donor,
                                    LoadGraph(donor_graph_path), ontology);
      std::cout << rg::AdaptationResultToJson(result).dump(1) << "\n";
      return 0;
    }
    if (*dot) {
      std::cout << rg::ExportDot(LoadGraph(graph_path));
      return 0;
    }
    if (*nlp) {
      const auto ontology = rg::Ontology::LoadFile(ontology_path);
      const std::string text = ReadFileOrThrow(text_path);
      std::cout << rg::DebugDump(text, rg::Analyze(text, ontology));
      return 0;
    }
    if (*serve) {
      if (ontology_path.empty() || store_dir.empty()) {
        std::cerr << "serve needs --ontology and --store (or RECIPEGRAPH_ONTOLOGY/RECIPEGRAPH_STORE)\n";
        return kExitUsage;
      }
      rg::ServiceOptions options;
      const size_t colon = listen.rfind(':');
      if (colon == std::string::npos) {
        std::cerr << "--listen expects host:port\n";
        return kExitUsage;
      }
      options.host = listen.substr(0, colon);
      try {
        options.port = std::stoi(listen.substr(colon + 1));
      } catch (...) {
        std::cerr << "--listen expects host:port\n";
        return kExitUsage;
      }
      if (!static_dir.empty()) options.static_dir = static_dir;
      const auto ontology = rg::Ontology::LoadFile(ontology_path);
      rg::Store store(store_dir);
      rg::Service service(store, ontology, options);
      const int port = service.Bind();
      std::cerr << "listening on " << options.host << ":" << port << "\n";
      g_service = &service;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      service.Run();
      g_service = nullptr;
      return 0;
    }
  } catch (const rg::Error &e) {
    std::cerr << "error (" << rg::ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
