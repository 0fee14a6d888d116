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


#include "intentmine/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iterator>
#include <map>
#include <sstream>

#include "intentmine/common.h"
#include "intentmine/community.h"
#include "intentmine/embed.h"
#include "intentmine/knn.h"
#include "intentmine/synthetic.h"

namespace intentmine {

namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

BenchReport RunBench(const std::vector<size_t>& sizes, const std::vector<size_t>& threads,
                     const BenchConfig& config) {
  if (sizes.empty() || threads.empty()) throw ValidationError("bench needs sizes and threads");
  for (size_t s : sizes) {
    if (s <= config.knn_k) throw ValidationError("bench size must exceed knn_k");
  }
  for (size_t t : threads) {
    if (t == 0) throw ValidationError("thread counts must be >= 1");
  }

  BenchReport report;
  for (size_t size : sizes) {
    synthetic::PlantedCorpusConfig corpus_cfg;
    corpus_cfg.n_docs = size;
    corpus_cfg.seed = config.seed;
    const Corpus corpus = synthetic::PlantedCorpus(corpus_cfg);

    std::optional<std::string> first_digest;
    for (size_t t : threads) {
      BenchRow row;
      row.size = size;
      row.threads = t;
      const auto start = Clock::now();

      auto phase = Clock::now();
      const EmbeddingMatrix emb = BaseEmbed(corpus, config.embed_dim, config.seed, t);
      row.embed_ms = MillisSince(phase);

      phase = Clock::now();
      KnnOptions knn;
      knn.threads = t;
      const KnnGraph graph = BuildKnnGraph(emb, config.knn_k, knn);
      row.knn_ms = MillisSince(phase);

      phase = Clock::now();
      LouvainOptions louvain;
      louvain.seed = config.seed;
      const Partition p = Louvain(WeightedGraph::FromKnnGraph(graph), louvain);
      row.cluster_ms = MillisSince(phase);
      row.total_ms = MillisSince(start);

      row.n_clusters = p.num_clusters();
      row.partition_digest = p.Digest();
      if (!first_digest) first_digest = row.partition_digest;
      if (*first_digest != row.partition_digest) report.partitions_match = false;
      report.rows.push_back(std::move(row));
    }
  }

  const size_t largest = *std::max_element(sizes.begin(), sizes.end());
  std::optional<double> knn1, knn4;
  for (const auto& r : report.rows) {
    if (r.size != largest) continue;
    if (r.threads == 1) knn1 = r.knn_ms;
    if (r.threads == 4) knn4 = r.knn_ms;
  }
  if (knn1 && knn4 && *knn1 > 0.0) report.knn_thread_ratio = *knn4 / *knn1;
  return report;
}

std::string BenchCsv(const BenchReport& report) {
  std::ostringstream out;
  out << "size,threads,embed_ms,knn_ms,cluster_ms,total_ms\n";
  char line[160];
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%zu,%zu,%.3f,%.3f,%.3f,%.3f\n", r.size, r.threads,
                  r.embed_ms, r.knn_ms, r.cluster_ms, r.total_ms);
    out << line;
  }
  return out.str();
}

std::string BenchSummary(const BenchReport& report) {
  std::ostringstream out;
  out << "partitions identical across thread counts: "
      << (report.partitions_match ? "yes" : "NO") << "\n";
  if (report.knn_thread_ratio) {
    out << "knn_ms ratio threads=4 / threads=1: " << *report.knn_thread_ratio << "\n";
  } else {
    out << "knn_ms ratio threads=4 / threads=1: not measured\n";
  }
  // Growth of total_ms between consecutive sizes, single-thread rows only.
  std::map<size_t, double> single;
  for (const auto& r : report.rows) {
    if (r.threads == report.rows.front().threads) single[r.size] = r.total_ms;
  }
  for (auto it = single.begin(); it != single.end() && std::next(it) != single.end(); ++it) {
    const auto next = std::next(it);
    out << "total_ms " << it->first << " -> " << next->first << ": x"
        << next->second / it->second << " for x"
        << static_cast<double>(next->first) / static_cast<double>(it->first) << " docs\n";
  }
  return out.str();
}

}  // namespace intentmine
