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

#include "intentmine/summarize.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "intentmine/common.h"

namespace intentmine {

std::vector<BigramCount> TopBigrams(std::span<const Document* const> docs, size_t n_top,
                                    const std::unordered_set<std::string>& stopwords) {
  if (n_top == 0) throw ValidationError("n_top must be >= 1");
  std::unordered_map<std::string, size_t> counts;
  std::string key;
  for (const Document* doc : docs) {
    const auto& t = doc->tokens;
    for (size_t i = 0; i + 1 < t.size(); ++i) {
      if (!stopwords.empty() && (stopwords.count(t[i]) || stopwords.count(t[i + 1]))) {
        continue;
      }
      key.assign(t[i]);
      key.push_back(' ');
      key.append(t[i + 1]);
      ++counts[key];
    }
  }
  std::vector<BigramCount> ranked(counts.begin(), counts.end());
  auto order = [](const BigramCount& a, const BigramCount& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const size_t keep = std::min(n_top, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranked.end(), order);
  ranked.resize(keep);
  return ranked;
}

std::vector<BigramCount> TopBigrams(std::span<const Document> docs, size_t n_top) {
  std::vector<const Document*> ptrs;
  ptrs.reserve(docs.size());
  for (const auto& d : docs) ptrs.push_back(&d);
  return TopBigrams(ptrs, n_top);
}

std::vector<ClusterSummary> SummarizePartition(const Corpus& corpus, const Partition& p,
                                               const SummaryOptions& options,
                                               std::span<const size_t> scope) {
  const size_t nodes = p.size();
  if (scope.empty() ? nodes != corpus.size() : nodes != scope.size()) {
    throw ValidationError("partition does not cover the summarized documents");
  }
  const auto members = p.Members();
  std::vector<int> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return members[a].size() > members[b].size();
  });
  if (order.size() > options.max_clusters) order.resize(options.max_clusters);

  std::vector<ClusterSummary> out;
  out.reserve(order.size());
  std::vector<const Document*> docs;
  for (int c : order) {
    docs.clear();
    for (size_t node : members[c]) {
      docs.push_back(&corpus[scope.empty() ? node : scope[node]]);
    }
    out.push_back({c, members[c].size(), TopBigrams(docs, options.n_top, options.stopwords)});
  }
  return out;
}

nlohmann::json ToJson(const ClusterSummary& s) {
  nlohmann::json bigrams = nlohmann::json::array();
  for (const auto& [text, count] : s.top_bigrams) {
    bigrams.push_back({{"bigram", text}, {"count", count}});
  }
  return {{"cluster_id", s.cluster_id}, {"size", s.size}, {"top_bigrams", bigrams}};
}

nlohmann::json ToJson(const std::vector<ClusterSummary>& summaries) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : summaries) out.push_back(ToJson(s));
  return out;
}

}  // namespace intentmine
