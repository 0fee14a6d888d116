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

// One clustering job: pick the rows in scope, then either build the k-NN
// graph and run Louvain (cluster count unknown) or run k-means (count
// given), and attach bigram summaries and, when reference labels cover the
// scope, an evaluation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "intentmine/corpus.h"
#include "intentmine/metrics.h"
#include "intentmine/partition.h"
#include "intentmine/summarize.h"
#include "json.hpp"

namespace intentmine {

enum class JobMode { kAuto, kFixedK };

inline constexpr size_t kDefaultKnnK = 10;
// k used when the analyst asks for k-means without choosing k.
inline constexpr size_t kDefaultKmeansK = 250;

struct ClusterJobRequest {
  JobMode mode = JobMode::kAuto;
  size_t k = 0;  // fixed_k only
  size_t knn_k = kDefaultKnnK;
  uint64_t seed = 0;
  std::optional<std::vector<std::string>> scope;  // doc ids; nullopt = all

  // Fills defaults; throws ValidationError on bad fields.
  static ClusterJobRequest FromJson(const nlohmann::json& body);
  nlohmann::json ToJson() const;
};

struct PhaseTimings {
  double embed_ms = 0.0;
  double knn_ms = 0.0;
  double cluster_ms = 0.0;
  double total_ms = 0.0;
};

nlohmann::json ToJson(const PhaseTimings& t);

struct ClusterOutcome {
  std::vector<size_t> scope;  // corpus index of each partition node
  Partition partition;
  std::vector<ClusterSummary> summaries;  // all clusters, largest first
  std::optional<EvalReport> eval;
  PhaseTimings timings;
  size_t knn_k_used = 0;
};

struct PipelineOptions {
  size_t threads = 1;
  size_t n_top = 5;
  size_t kmeans_max_iter = 100;
};

// Runs a job over `embeddings` (one row per corpus document). The scope
// must hold at least two documents. In auto mode knn_k is capped at
// scope size - 1.
ClusterOutcome RunClusterJob(const Corpus& corpus, const EmbeddingMatrix& embeddings,
                             const LabelColumn& reference, const ClusterJobRequest& req,
                             const PipelineOptions& options = {});

// Bitwise digest of a matrix, recorded with jobs so replays can be checked.
std::string DigestEmbeddings(const EmbeddingMatrix& m);

}  // namespace intentmine
