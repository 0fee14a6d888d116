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


// End-to-end timing harness on planted synthetic corpora.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace intentmine {

struct BenchConfig {
  size_t embed_dim = 64;
  size_t knn_k = 10;
  uint64_t seed = 0;
};

struct BenchRow {
  size_t size = 0;
  size_t threads = 0;
  double embed_ms = 0.0;
  double knn_ms = 0.0;
  double cluster_ms = 0.0;
  double total_ms = 0.0;
  size_t n_clusters = 0;
  std::string partition_digest;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  // Per size: did every thread count produce the same partition?
  bool partitions_match = true;
  // knn_ms(threads=4) / knn_ms(threads=1) at the largest size, when both ran.
  std::optional<double> knn_thread_ratio;
};

// One auto-mode run (embed, k-NN graph, Louvain) per (size, threads) pair.
BenchReport RunBench(const std::vector<size_t>& sizes, const std::vector<size_t>& threads,
                     const BenchConfig& config = {});

// "size,threads,embed_ms,knn_ms,cluster_ms,total_ms" header plus one row each.
std::string BenchCsv(const BenchReport& report);

// Human-readable notes: thread ratio, growth between sizes, determinism.
std::string BenchSummary(const BenchReport& report);

}  // namespace intentmine
