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

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "intentmine/corpus.h"
#include "intentmine/partition.h"
#include "json.hpp"

namespace intentmine {

using BigramCount = std::pair<std::string, size_t>;

struct SummaryOptions {
  size_t n_top = 5;
  size_t max_clusters = std::numeric_limits<size_t>::max();
  // Bigrams touching any of these tokens are skipped. Empty by default.
  std::unordered_set<std::string> stopwords;
};

struct ClusterSummary {
  int cluster_id = 0;
  size_t size = 0;
  std::vector<BigramCount> top_bigrams;

  bool operator==(const ClusterSummary&) const = default;
};

// Most frequent adjacent token pairs ("a b"), counted within documents
// only. Ordered by count descending, then lexicographically.
std::vector<BigramCount> TopBigrams(std::span<const Document* const> docs, size_t n_top,
                                    const std::unordered_set<std::string>& stopwords = {});
std::vector<BigramCount> TopBigrams(std::span<const Document> docs, size_t n_top);

// Summaries of the `max_clusters` largest clusters, largest first (ties by
// cluster id). Node i of the partition is corpus document scope[i]; an
// empty scope means node i is document i.
std::vector<ClusterSummary> SummarizePartition(const Corpus& corpus, const Partition& p,
                                               const SummaryOptions& options = {},
                                               std::span<const size_t> scope = {});

nlohmann::json ToJson(const ClusterSummary& s);
nlohmann::json ToJson(const std::vector<ClusterSummary>& summaries);

}  // namespace intentmine
