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

#include "recipegraph/service.h"

#include <functional>

#include "httplib.h"
#include "recipegraph/adaptation.h"
#include "recipegraph/annotator.h"
#include "recipegraph/correction.h"
#include "recipegraph/error.h"
#include "recipegraph/graph.h"

namespace recipegraph {
namespace {

using nlohmann::json;

// An error carrying its HTTP status and machine-readable reason.
struct HttpError {
  int status;
  std::string reason;
  std::string message;
};

HttpError FromError(const Error &e) {
  switch (e.code()) {
    case ErrorCode::kNotFound: return {404, "not_found", e.what()};
    case ErrorCode::kConflict: return {409, "version_mismatch", e.what()};
    case ErrorCode::kTextOrder: return {409, "text_order", e.what()};
    case ErrorCode::kTyping: return {422, "typing", e.what()};
    case ErrorCode::kInvalidInput: return {400, "invalid_input", e.what()};
    case ErrorCode::kInternal: break;
  }
  return {500, "internal", e.what()};
}

json ParseBody(const httplib::Request &req, bool allow_empty = false) {
  if (req.body.empty()) {
    if (allow_empty) return json::object();
    throw HttpError{400, "invalid_input", "request body is empty"};
  }
  try {
    json doc = json::parse(req.body);
    if (!doc.is_object()) throw HttpError{400, "invalid_input", "request body must be an object"};
    return doc;
  } catch (const json::parse_error &e) {
    throw HttpError{400, "invalid_input", std::string("request body is not JSON: ") + e.what()};
  }
}

}  // namespace

struct Service::Impl {
  Store &store;
  const Ontology &ontology;
  ServiceOptions options;
  httplib::Server server;
  int port = -1;

  Impl(Store &s, const Ontology &o, ServiceOptions opts)
      : store(s), ontology(o), options(std::move(opts)) {}

  using Handler = std::function<json(const httplib::Request &, httplib::Response &)>;

  // Runs `handler` and turns its result or error into a JSON response.
  httplib::Server::Handler Wrap(Handler handler) {
    return [handler = std::move(handler)](const httplib::Request &req, httplib::Response &res) {
      try {
        res.status = 200;
        json body = handler(req, res);
        res.set_content(body.dump(), "application/json");
      } catch (const HttpError &e) {
        res.status = e.status;
        res.set_content(json{{"error", e.reason}, {"reason", e.reason}, {"message", e.message}}.dump(),
                        "application/json");
      } catch (const Error &err) {
        HttpError e = FromError(err);
        res.status = e.status;
        res.set_content(json{{"error", e.reason}, {"reason", e.reason}, {"message", e.message}}.dump(),
                        "application/json");
      } catch (const std::exception &err) {
        res.status = 500;
        res.set_content(json{{"error", "internal"}, {"reason", "internal"}, {"message", err.what()}}.dump(),
                        "application/json");
      }
    };
  }

  Recipe RequireRecipe(const std::string &id) {
    auto recipe = store.GetRecipe(id);
    if (!recipe) throw HttpError{404, "not_found", "unknown recipe '" + id + "'"};
    return *recipe;
  }

  RecipeGraph RequireGraph(const std::string &id) {
    RequireRecipe(id);
    auto graph = store.LatestGraph(id);
    if (!graph) throw HttpError{404, "not_found", "recipe '" + id + "' has no graph yet"};
    return *graph;
  }

  Session CurrentSession(const std::string &id, const RecipeGraph &graph) {
    Session session = store.GetSession(id).value_or(Session{});
    session.recipe_id = id;
    session.base_version = graph.version();
    return session;
  }

  // Graph of `id`, annotated in memory when none is stored.
  RecipeGraph GraphOrAnnotate(const Recipe &recipe) {
    if (auto graph = store.LatestGraph(recipe.id)) return *graph;
    return Annotate(recipe, ontology);
  }

  void Routes() {
    server.Get("/ontology", Wrap([this](const auto &, auto &) { return ontology.ToJson(); }));

    server.Get("/recipes", Wrap([this](const auto &, auto &) {
      json list = json::array();
      for (const auto &r : store.ListRecipes()) list.push_back({{"id", r.id}, {"title", r.title}});
      return list;
    }));

    server.Post("/recipes", Wrap([this](const httplib::Request &req, httplib::Response &res) {
      Recipe recipe = RecipeFromJson(ParseBody(req));
      try {
        store.CreateRecipe(recipe);
      } catch (const Error &e) {
        if (e.code() == ErrorCode::kConflict) throw HttpError{409, "exists", e.what()};
        throw;
      }
      res.status = 201;
      return RecipeToJson(recipe);
    }));

    server.Get(R"(/recipes/([^/]+))", Wrap([this](const httplib::Request &req, auto &) {
      return RecipeToJson(RequireRecipe(req.matches[1]));
    }));

    server.Post(R"(/recipes/([^/]+)/annotate)", Wrap([this](const httplib::Request &req, auto &) {
      const std::string id = req.matches[1];
      std::lock_guard<std::mutex> lock(store.RecipeLock(id));
      Recipe recipe = RequireRecipe(id);
      RecipeGraph graph = Annotate(recipe, ontology);
      Session session;
      session.recipe_id = id;
      return GraphToJson(store.AppendGraph(std::move(graph), &session));
    }));

    server.Get(R"(/recipes/([^/]+)/graph)", Wrap([this](const httplib::Request &req, auto &) {
      const std::string id = req.matches[1];
      if (req.has_param("version")) {
        RequireRecipe(id);
        int64_t version = 0;
        try {
          version = std::stoll(req.get_param_value("version"));
        } catch (...) {
          throw HttpError{400, "invalid_input", "version must be an integer"};
        }
        auto graph = store.GetGraph(id, version);
        if (!graph) throw HttpError{404, "not_found", "no such version"};
        return GraphToJson(*graph);
      }
      return GraphToJson(RequireGraph(id));
    }));

    server.Get(R"(/recipes/([^/]+)/graph/validate)",
               Wrap([this](const httplib::Request &req, auto &) {
                 return ReportToJson(Validate(RequireGraph(req.matches[1]), ontology));
               }));

    server.Get(R"(/recipes/([^/]+)/graph/zoom)", Wrap([this](const httplib::Request &req, auto &) {
      if (!req.has_param("focus")) throw HttpError{400, "invalid_input", "missing focus parameter"};
      return GraphToJson(Zoom(RequireGraph(req.matches[1]), req.get_param_value("focus")));
    }));

    server.Get(R"(/recipes/([^/]+)/session)", Wrap([this](const httplib::Request &req, auto &) {
      const std::string id = req.matches[1];
      return SessionToJson(CurrentSession(id, RequireGraph(id)));
    }));

    server.Post(R"(/recipes/([^/]+)/edits)", Wrap([this](const httplib::Request &req, auto &) {
      const std::string id = req.matches[1];
      json body = ParseBody(req);
      if (!body.contains("base_version") || !body["base_version"].is_number_integer() ||
          !body.contains("edits") || !body["edits"].is_array()) {
        throw HttpError{400, "invalid_input", "expected {base_version, edits:[...]}"};
      }
      std::vector<EditOperation> edits;
      for (const auto &e : body["edits"]) edits.push_back(EditFromJson(e));

      std::lock_guard<std::mutex> lock(store.RecipeLock(id));
      RecipeGraph graph = RequireGraph(id);
      const int64_t base = body["base_version"].get<int64_t>();
      if (base != graph.version()) {
        throw HttpError{409, "version_mismatch",
                        "base_version " + std::to_string(base) + " but the latest is " +
                            std::to_string(graph.version())};
      }
      Session session = CurrentSession(id, graph);
      for (const auto &edit : edits) graph = ApplyEdit(graph, edit, session, ontology);
      return GraphToJson(store.AppendGraph(std::move(graph), &session));
    }));

    server.Post(R"(/recipes/([^/]+)/repropagate)",
                Wrap([this](const httplib::Request &req, auto &) {
                  const std::string id = req.matches[1];
                  json body = ParseBody(req, true);
                  const bool dry_run =
                      req.has_param("dry_run") && req.get_param_value("dry_run") != "false";
                  std::lock_guard<std::mutex> lock(store.RecipeLock(id));
                  Recipe recipe = RequireRecipe(id);
                  RecipeGraph graph = RequireGraph(id);
                  if (body.contains("base_version") &&
                      body["base_version"].get<int64_t>() != graph.version()) {
                    throw HttpError{409, "version_mismatch", "stale base_version"};
                  }
                  Session session = CurrentSession(id, graph);
                  Repropagation result = Repropagate(recipe, graph, session, ontology);
                  bool stored = false;
                  if (!result.changes.empty() && !dry_run) {
                    result.graph = store.AppendGraph(std::move(result.graph), &session);
                    stored = true;
                  }
                  return json{{"graph", GraphToJson(result.graph)},
                              {"changes", ChangeSetToJson(result.changes)},
                              {"stored", stored}};
                }));

    server.Post(R"(/recipes/([^/]+)/adapt)", Wrap([this](const httplib::Request &req, auto &) {
      const std::string id = req.matches[1];
      json body = ParseBody(req);
      AdaptationRequest request;
      try {
        request.alpha = body.at("alpha").get<std::string>();
        request.beta = body.at("beta").get<std::string>();
        request.donor_recipe_id = body.at("donor_id").get<std::string>();
      } catch (const json::exception &) {
        throw HttpError{400, "invalid_input", "expected {alpha, beta, donor_id}"};
      }
      Recipe recipe = RequireRecipe(id);
      Recipe donor = RequireRecipe(request.donor_recipe_id);
      RecipeGraph graph = GraphOrAnnotate(recipe);
      RecipeGraph donor_graph = GraphOrAnnotate(donor);
      try {
        return AdaptationResultToJson(Adapt(recipe, graph, request, donor, donor_graph, ontology));
      } catch (const Error &e) {
        if (e.code() == ErrorCode::kInvalidInput) throw HttpError{422, "adaptation", e.what()};
        throw;
      }
    }));

    if (options.static_dir) server.set_mount_point("/ui", options.static_dir->string());
  }
};

Service::Service(Store &store, const Ontology &ontology, ServiceOptions options)
    : impl_(std::make_unique<Impl>(store, ontology, std::move(options))) {
  impl_->Routes();
}

Service::~Service() { Stop(); }

int Service::Bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  }
  if (impl_->port <= 0) {
    throw Error(ErrorCode::kInternal, "cannot listen on " + impl_->options.host + ":" +
                                          std::to_string(impl_->options.port));
  }
  return impl_->port;
}

void Service::Run() { impl_->server.listen_after_bind(); }

void Service::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void Service::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace recipegraph
