// Copyright 2026 The IntentMine Authors.
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


#include "intentmine/http_api.h"

#include <charconv>
#include <functional>
#include <limits>
#include <string>

#include "intentmine/common.h"
#include "intentmine/corpus.h"
#include "intentmine/metrics.h"
#include "intentmine/pipeline.h"
#include "intentmine/summarize.h"

namespace intentmine {

namespace {

using Json = nlohmann::json;
using Handler = std::function<Json(const httplib::Request&, httplib::Response&)>;

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs `fn` and turns its result or exception into a JSON response.
httplib::Server::Handler Wrap(Handler fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      Json body = fn(req, res);
      Reply(res, res.status == -1 ? 200 : res.status, body);
    } catch (const ValidationError& e) {
      Reply(res, 400, {{"error", e.what()}});
    } catch (const FormatError& e) {
      Reply(res, 400, {{"error", e.what()}});
    } catch (const Json::exception& e) {
      Reply(res, 400, {{"error", std::string("bad JSON: ") + e.what()}});
    } catch (const NotFoundError& e) {
      Reply(res, 404, {{"error", e.what()}});
    } catch (const ConflictError& e) {
      Reply(res, 409, {{"error", e.what()}});
    } catch (const std::exception& e) {
      Reply(res, 500, {{"error", e.what()}});
    }
  };
}

Json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw ValidationError("request body is not valid JSON");
  if (!body.is_object()) throw ValidationError("request body must be a JSON object");
  return body;
}

size_t ParseCount(std::string_view text, const char* name) {
  size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError(std::string(name) + " must be a non-negative integer");
  }
  return value;
}

size_t QueryCount(const httplib::Request& req, const char* name, size_t fallback) {
  if (!req.has_param(name)) return fallback;
  return ParseCount(req.get_param_value(name), name);
}

int PathCluster(const httplib::Request& req) {
  const size_t cid = ParseCount(req.path_params.at("cid"), "cluster id");
  if (cid > static_cast<size_t>(std::numeric_limits<int>::max())) {
    throw NotFoundError("unknown cluster " + req.path_params.at("cid"));
  }
  return static_cast<int>(cid);
}

std::string RequireLabel(const Json& body) {
  auto it = body.find("label");
  if (it == body.end() || !it->is_string()) throw ValidationError("label must be a string");
  return it->get<std::string>();
}

Json LabelUpdateJson(const LabelUpdate& u) {
  return {{"labeled_count", u.labeled_count},
          {"revision", u.revision},
          {"labeled_fraction", u.labeled_fraction}};
}

Json DocJson(const Document& d) {
  return {{"id", d.id}, {"text", d.text}, {"label", d.label ? Json(*d.label) : Json(nullptr)}};
}

}  // namespace

TrainConfig TrainConfigFromJson(const nlohmann::json& body) {
  TrainConfig cfg;
  if (!body.is_object()) throw ValidationError("train config must be a JSON object");
  cfg.projection_dim = body.value("projection_dim", cfg.projection_dim);
  cfg.learning_rate = body.value("learning_rate", cfg.learning_rate);
  cfg.epochs = body.value("epochs", cfg.epochs);
  cfg.batch_size = body.value("batch_size", cfg.batch_size);
  cfg.seed = body.value("seed", cfg.seed);
  cfg.labeled_fraction_threshold =
      body.value("labeled_fraction_threshold", cfg.labeled_fraction_threshold);
  cfg.Validate();
  return cfg;
}

void RegisterRoutes(httplib::Server& server, Service& service) {
  auto project = [&service](const httplib::Request& req) {
    return service.Get(req.path_params.at("id"));
  };

  server.Post("/projects", Wrap([&service](const auto& req, auto&) -> Json {
                const Json body = ParseBody(req);
                const std::string name = body.value("name", std::string());
                return {{"project_id", service.CreateProject(name)}};
              }));

  server.Get("/projects/:id", Wrap([project](const auto& req, auto&) -> Json {
               auto p = project(req);
               Json j = p->Status().ToJson();
               j["project_id"] = p->id();
               j["name"] = p->name();
               return j;
             }));

  server.Post("/projects/:id/corpus", Wrap([project](const auto& req, auto&) -> Json {
                auto p = project(req);
                return {{"n_docs", p->SetCorpus(ParseCorpus(req.body))}};
              }));

  server.Post("/projects/:id/jobs", Wrap([project](const auto& req, auto&) -> Json {
                auto p = project(req);
                return {{"job_id", p->SubmitJob(ClusterJobRequest::FromJson(ParseBody(req)))}};
              }));

  server.Get("/projects/:id/jobs/:job", Wrap([project](const auto& req, auto&) -> Json {
               return project(req)->GetJob(req.path_params.at("job")).ToJson();
             }));

  server.Get("/projects/:id/clusters", Wrap([project](const auto& req, auto&) -> Json {
               auto p = project(req);
               const size_t max = QueryCount(req, "max", std::numeric_limits<size_t>::max());
               const size_t top = QueryCount(req, "top_bigrams", p->config().n_top);
               if (top == 0) throw ValidationError("top_bigrams must be >= 1");
               if (req.has_param("parent")) {
                 const size_t parent = ParseCount(req.get_param_value("parent"), "parent");
                 return ToJson(p->Subclusters(static_cast<int>(parent), max, top));
               }
               return ToJson(p->Clusters(max, top));
             }));

  server.Get("/projects/:id/clusters/:cid/docs", Wrap([project](const auto& req, auto&) -> Json {
               auto p = project(req);
               const size_t offset = QueryCount(req, "offset", 0);
               const size_t limit = QueryCount(req, "limit", 50);
               const DocPage page = p->ClusterDocs(PathCluster(req), offset, limit);
               Json docs = Json::array();
               for (const auto& d : page.docs) docs.push_back(DocJson(d));
               return {{"total", page.total}, {"offset", offset}, {"docs", docs}};
             }));

  server.Post("/projects/:id/labels", Wrap([project](const auto& req, auto&) -> Json {
                auto p = project(req);
                const Json body = ParseBody(req);
                const std::string label = RequireLabel(body);
                const bool by_cluster = body.contains("cluster_id");
                const bool by_docs = body.contains("doc_ids");
                if (by_cluster == by_docs) {
                  throw ValidationError("give exactly one of cluster_id or doc_ids");
                }
                if (by_cluster) {
                  const Json& cid = body["cluster_id"];
                  if (!cid.is_number_integer()) throw ValidationError("cluster_id must be an integer");
                  return LabelUpdateJson(p->BulkLabel(cid.get<int>(), label));
                }
                const Json& ids = body["doc_ids"];
                if (!ids.is_array()) throw ValidationError("doc_ids must be an array of strings");
                std::vector<std::string> doc_ids;
                for (const auto& id : ids) {
                  if (!id.is_string()) throw ValidationError("doc_ids must be an array of strings");
                  doc_ids.push_back(id.get<std::string>());
                }
                return LabelUpdateJson(p->LabelDocuments(doc_ids, label));
              }));

  server.Get("/projects/:id/labels", Wrap([project](const auto& req, auto&) -> Json {
               auto p = project(req);
               const auto status = p->Status();
               return {{"revision", status.revision},
                       {"labeled_fraction", status.labeled_fraction},
                       {"labels", p->Labels()}};
             }));

  server.Post("/projects/:id/clusters/:cid/subcluster",
              Wrap([project](const auto& req, auto&) -> Json {
                auto p = project(req);
                const int cid = PathCluster(req);
                ClusterJobRequest job = ClusterJobRequest::FromJson(ParseBody(req));
                if (job.scope) throw ValidationError("sub-cluster scope is set by the cluster");
                return {{"job_id", p->SubmitSubcluster(cid, std::move(job))}};
              }));

  server.Post("/projects/:id/adapt", Wrap([project](const auto& req, auto&) -> Json {
                auto p = project(req);
                return {{"adapter_stats", p->RetrainAdapter(TrainConfigFromJson(ParseBody(req))).ToJson()}};
              }));

  server.Get("/projects/:id/metrics", Wrap([project](const auto& req, auto&) -> Json {
               return ToJson(project(req)->Metrics());
             }));
}

}  // namespace intentmine
