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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "intentmine/corpus.h"

namespace intentmine {

struct Neighbor {
  uint32_t index = 0;
  double distance = 0.0;  // squared L2

  bool operator==(const Neighbor&) const = default;
};

// k neighbors per row, stored contiguously.
struct KnnResult {
  size_t n = 0;
  size_t k = 0;
  std::vector<Neighbor> neighbors;  // n * k

  std::span<const Neighbor> of(size_t row) const {
    return {neighbors.data() + row * k, k};
  }
};

struct KnnOptions {
  size_t query_block = 128;
  size_t corpus_block = 1024;
  size_t threads = 1;
};

// Exact k nearest neighbors (self excluded) under squared L2, ascending by
// distance with ties broken by the smaller index.
//
// Distances are screened block by block through a matrix product using
// |x-y|^2 = |x|^2 + |y|^2 - 2 x.y (negative rounding clamped to 0); every
// candidate within a rounding-error margin of the running k-th distance is
// then re-ranked with the directly summed squared difference, so output
// does not depend on block sizes or thread count.
KnnResult KnnSearch(const EmbeddingMatrix& m, size_t k,
                    const KnnOptions& options = {});

// Squared L2 distance accumulated in double in coordinate order. This is the
// distance KnnSearch reports.
double SquaredDistance(std::span<const float> a, std::span<const float> b);

struct Edge {
  uint32_t i = 0;
  uint32_t j = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

// Undirected graph with i < j on every edge, edges sorted by (i, j).
struct KnnGraph {
  size_t n_nodes = 0;
  size_t k_used = 0;
  std::vector<Edge> edges;
};

// Union-symmetrized k-NN graph with unit weights.
KnnGraph BuildKnnGraph(const KnnResult& knn);
KnnGraph BuildKnnGraph(const EmbeddingMatrix& m, size_t k,
                       const KnnOptions& options = {});

// "i j weight" per line.
std::string DumpGraph(const KnnGraph& g);
void SaveGraph(const KnnGraph& g, const std::filesystem::path& path);

}  // namespace intentmine
