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

#include "intentmine/pipeline.h"

#include <chrono>
#include <numeric>

#include "intentmine/common.h"
#include "intentmine/community.h"
#include "intentmine/kmeans.h"
#include "intentmine/knn.h"

namespace intentmine {

namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

size_t CountField(const nlohmann::json& body, const char* name, size_t fallback) {
  auto it = body.find(name);
  if (it == body.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    throw ValidationError(std::string("field \"") + name + "\" must be a non-negative integer");
  }
  return it->get<size_t>();
}

}  // namespace

ClusterJobRequest ClusterJobRequest::FromJson(const nlohmann::json& body) {
  if (!body.is_object()) throw ValidationError("job request must be a JSON object");
  ClusterJobRequest req;
  const std::string mode = body.value("mode", std::string("auto"));
  if (mode == "auto") {
    req.mode = JobMode::kAuto;
  } else if (mode == "fixed_k") {
    req.mode = JobMode::kFixedK;
  } else {
    throw ValidationError("mode must be \"auto\" or \"fixed_k\"");
  }
  req.k = CountField(body, "k", req.mode == JobMode::kFixedK ? kDefaultKmeansK : 0);
  if (req.mode == JobMode::kFixedK && req.k < 1) throw ValidationError("fixed_k requires k >= 1");
  req.knn_k = CountField(body, "knn_k", kDefaultKnnK);
  if (req.knn_k < 1) throw ValidationError("knn_k must be >= 1");
  if (auto it = body.find("seed"); it != body.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ValidationError("seed must be an integer");
    req.seed = it->get<uint64_t>();
  }
  if (auto it = body.find("scope"); it != body.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("scope must be an array of document ids");
    std::vector<std::string> ids;
    for (const auto& id : *it) {
      if (!id.is_string()) throw ValidationError("scope must be an array of document ids");
      ids.push_back(id.get<std::string>());
    }
    req.scope = std::move(ids);
  }
  return req;
}

nlohmann::json ClusterJobRequest::ToJson() const {
  nlohmann::json j = {{"mode", mode == JobMode::kAuto ? "auto" : "fixed_k"},
                      {"knn_k", knn_k},
                      {"seed", seed}};
  if (mode == JobMode::kFixedK) j["k"] = k;
  if (scope) j["scope"] = *scope;
  return j;
}

nlohmann::json ToJson(const PhaseTimings& t) {
  return {{"embed_ms", t.embed_ms},
          {"knn_ms", t.knn_ms},
          {"cluster_ms", t.cluster_ms},
          {"total_ms", t.total_ms}};
}

ClusterOutcome RunClusterJob(const Corpus& corpus, const EmbeddingMatrix& embeddings,
                             const LabelColumn& reference, const ClusterJobRequest& req,
                             const PipelineOptions& options) {
  const auto start = Clock::now();
  if (embeddings.rows() != corpus.size()) {
    throw ValidationError("embeddings have " + std::to_string(embeddings.rows()) +
                          " rows for " + std::to_string(corpus.size()) + " documents");
  }

  ClusterOutcome out;
  if (req.scope) {
    out.scope.reserve(req.scope->size());
    for (const auto& id : *req.scope) {
      auto idx = corpus.IndexOf(id);
      if (!idx) throw ValidationError("unknown document id \"" + id + "\" in scope");
      out.scope.push_back(*idx);
    }
  } else {
    out.scope.resize(corpus.size());
    std::iota(out.scope.begin(), out.scope.end(), size_t{0});
  }
  const size_t n = out.scope.size();
  if (n < 2) throw ValidationError("scope must contain at least 2 documents");
  if (req.mode == JobMode::kFixedK && (req.k < 1 || req.k > n)) {
    throw ValidationError("k = " + std::to_string(req.k) + " is outside [1, " +
                          std::to_string(n) + "] for this scope");
  }

  const EmbeddingMatrix rows = embeddings.SelectRows(out.scope);
  out.timings.embed_ms = MillisSince(start);

  if (req.mode == JobMode::kAuto) {
    out.knn_k_used = std::min(req.knn_k, n - 1);
    auto t = Clock::now();
    KnnOptions knn_options;
    knn_options.threads = options.threads;
    const KnnGraph graph = BuildKnnGraph(rows, out.knn_k_used, knn_options);
    out.timings.knn_ms = MillisSince(t);

    t = Clock::now();
    LouvainOptions louvain;
    louvain.seed = req.seed;
    out.partition = Louvain(WeightedGraph::FromKnnGraph(graph), louvain);
    out.timings.cluster_ms = MillisSince(t);
  } else {
    const auto t = Clock::now();
    KmeansOptions kmeans;
    kmeans.seed = req.seed;
    kmeans.threads = options.threads;
    kmeans.max_iter = options.kmeans_max_iter;
    out.partition = Kmeans(rows, req.k, kmeans).partition;
    out.timings.cluster_ms = MillisSince(t);
  }

  SummaryOptions summary;
  summary.n_top = options.n_top;
  out.summaries = SummarizePartition(corpus, out.partition, summary, out.scope);

  if (reference.size() == corpus.size()) {
    LabelColumn scoped;
    scoped.reserve(n);
    bool covered = true;
    for (size_t idx : out.scope) {
      if (!reference[idx]) {
        covered = false;
        break;
      }
      scoped.push_back(reference[idx]);
    }
    if (covered) out.eval = Evaluate(out.partition, scoped);
  }
  out.timings.total_ms = MillisSince(start);
  return out;
}

std::string DigestEmbeddings(const EmbeddingMatrix& m) {
  std::string bytes(reinterpret_cast<const char*>(m.values().data()),
                    m.values().size() * sizeof(float));
  uint64_t h = Fnv1a64(std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  return ToHex64(Fnv1a64(bytes, h));
}

}  // namespace intentmine
