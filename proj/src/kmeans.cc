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

#include "intentmine/kmeans.h"

#include <algorithm>
#include <limits>
#include <string>

#include "intentmine/common.h"
#include "intentmine/parallel.h"

namespace intentmine {

namespace {

constexpr size_t kAssignChunk = 1024;

double Distance2(const double* a, const double* b, size_t dim) {
  double sum = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

std::vector<double> SeedPlusPlus(const std::vector<double>& x, size_t n, size_t dim,
                                 size_t k, Rng& rng) {
  std::vector<double> centroids(k * dim);
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  size_t pick = static_cast<size_t>(rng.Below(n));
  for (size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (size_t i = 0; i < n; ++i) total += nearest[i];
      pick = n;
      if (total > 0.0) {
        const double target = rng.Uniform() * total;
        double cumulative = 0.0;
        for (size_t i = 0; i < n; ++i) {
          if (nearest[i] <= 0.0) continue;
          cumulative += nearest[i];
          pick = i;
          if (cumulative > target) break;
        }
      } else {
        // Every remaining point coincides with a centroid.
        for (size_t i = 0; i < n; ++i) {
          if (!chosen[i]) {
            pick = i;
            break;
          }
        }
      }
    }
    chosen[pick] = true;
    std::copy_n(x.data() + pick * dim, dim, centroids.data() + c * dim);
    for (size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], Distance2(x.data() + i * dim,
                                                  centroids.data() + c * dim, dim));
    }
  }
  return centroids;
}

KmeansResult RunOnce(const std::vector<double>& x, size_t n, size_t dim, size_t k,
                     uint64_t seed, const KmeansOptions& options) {
  Rng rng(seed);
  KmeansResult result;
  result.dim = dim;
  result.centroids = SeedPlusPlus(x, n, dim, k, rng);
  auto& centroids = result.centroids;

  std::vector<int> assign(n, -1), previous;
  std::vector<double> dist(n);
  std::vector<size_t> counts(k);
  const size_t chunks = (n + kAssignChunk - 1) / kAssignChunk;

  for (size_t iter = 1; iter <= options.max_iter; ++iter) {
    ParallelFor(chunks, options.threads, [&](size_t chunk) {
      const size_t end = std::min(n, (chunk + 1) * kAssignChunk);
      for (size_t i = chunk * kAssignChunk; i < end; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (size_t c = 0; c < k; ++c) {
          const double d = Distance2(x.data() + i * dim, centroids.data() + c * dim, dim);
          if (d < best) {
            best = d;
            best_c = static_cast<int>(c);
          }
        }
        assign[i] = best_c;
        dist[i] = best;
      }
    });

    std::fill(counts.begin(), counts.end(), 0);
    for (int c : assign) ++counts[c];
    bool reseeded = false;
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      size_t far = n;
      for (size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      }
      --counts[assign[far]];
      assign[far] = static_cast<int>(c);
      counts[c] = 1;
      dist[far] = 0.0;
      std::copy_n(x.data() + far * dim, dim, centroids.data() + c * dim);
      reseeded = true;
    }

    double inertia = 0.0;
    for (double d : dist) inertia += d;
    result.inertia_history.push_back(inertia);
    result.iterations = iter;
    if (options.on_iteration) options.on_iteration(iter, inertia);

    if (!reseeded && assign == previous) break;
    previous = assign;

    std::fill(centroids.begin(), centroids.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      double* c = centroids.data() + static_cast<size_t>(assign[i]) * dim;
      for (size_t d = 0; d < dim; ++d) c[d] += x[i * dim + d];
    }
    for (size_t c = 0; c < k; ++c) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (size_t d = 0; d < dim; ++d) centroids[c * dim + d] *= inv;
    }
  }

  result.inertia = 0.0;
  for (size_t i = 0; i < n; ++i) {
    result.inertia += Distance2(x.data() + i * dim,
                                centroids.data() + static_cast<size_t>(assign[i]) * dim, dim);
  }
  result.partition.method = ClusterMethod::kKmeans;
  result.partition.assignment = std::move(assign);
  return result;
}

}  // namespace

KmeansResult Kmeans(const EmbeddingMatrix& m, size_t k, const KmeansOptions& options) {
  const size_t n = m.rows();
  if (k == 0) throw ValidationError("k must be >= 1");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the number of points (" +
                          std::to_string(n) + ")");
  }
  if (options.max_iter == 0) throw ValidationError("max_iter must be >= 1");

  const size_t dim = m.cols();
  std::vector<double> x(m.values().begin(), m.values().end());
  KmeansResult best;
  const size_t restarts = std::max<size_t>(1, options.n_init);
  for (size_t r = 0; r < restarts; ++r) {
    auto run = RunOnce(x, n, dim, k, options.seed + r * 0x9e3779b97f4a7c15ULL, options);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

}  // namespace intentmine
