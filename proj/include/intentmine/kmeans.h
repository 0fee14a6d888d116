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
#include <functional>
#include <span>
#include <vector>

#include "intentmine/corpus.h"
#include "intentmine/partition.h"

namespace intentmine {

struct KmeansOptions {
  uint64_t seed = 0;
  size_t max_iter = 100;
  size_t n_init = 1;  // restarts; the lowest inertia wins
  size_t threads = 1;
  // Called after each Lloyd assignment step with (iteration, inertia).
  std::function<void(size_t, double)> on_iteration;
};

struct KmeansResult {
  Partition partition;
  std::vector<double> centroids;  // k x D, row-major
  size_t dim = 0;
  double inertia = 0.0;
  size_t iterations = 0;
  std::vector<double> inertia_history;  // one entry per iteration

  std::span<const double> centroid(size_t c) const {
    return {centroids.data() + c * dim, dim};
  }
};

// k-means++ seeding then Lloyd iterations until the assignment stops
// changing or max_iter is reached. Ties go to the smaller centroid index;
// a cluster left empty is re-seeded with the point farthest from its
// assigned centroid. Throws ValidationError unless 1 <= k <= N.
KmeansResult Kmeans(const EmbeddingMatrix& m, size_t k,
                    const KmeansOptions& options = {});

}  // namespace intentmine
