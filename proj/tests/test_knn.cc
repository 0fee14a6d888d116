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


#include <cmath>
#include <set>
#include <string>

#include "doctest.h"
#include "intentmine/common.h"
#include "intentmine/knn.h"
#include "intentmine/synthetic.h"
#include "oracles.h"

using namespace intentmine;

namespace {

oracle::Points ToPoints(const EmbeddingMatrix& m) {
  oracle::Points p(m.rows());
  for (size_t i = 0; i < m.rows(); ++i) p[i].assign(m.row(i).begin(), m.row(i).end());
  return p;
}

EmbeddingMatrix RandomMatrix(size_t n, size_t d, Rng& rng, bool grid) {
  EmbeddingMatrix m(n, d);
  for (auto& v : m.values()) {
    v = grid ? static_cast<float>(rng.Below(3)) : static_cast<float>(rng.Normal() * 3.0);
  }
  return m;
}

std::vector<std::vector<size_t>> Indices(const KnnResult& r) {
  std::vector<std::vector<size_t>> out(r.n);
  for (size_t i = 0; i < r.n; ++i) {
    for (const auto& nb : r.of(i)) out[i].push_back(nb.index);
  }
  return out;
}

std::set<std::pair<uint32_t, uint32_t>> EdgeSet(const KnnGraph& g) {
  std::set<std::pair<uint32_t, uint32_t>> s;
  for (const auto& e : g.edges) s.insert({e.i, e.j});
  return s;
}

}  // namespace

TEST_SUITE("knn") {

TEST_CASE("line example") {
  EmbeddingMatrix m(3, 1, {0.0f, 1.0f, 3.0f});
  const KnnResult r = KnnSearch(m, 1);
  CHECK(r.of(0)[0].index == 1);
  CHECK(r.of(1)[0].index == 0);
  CHECK(r.of(2)[0].index == 1);
  CHECK(r.of(2)[0].distance == 4.0);
  const KnnGraph g = BuildKnnGraph(m, 1);
  CHECK(EdgeSet(g) == std::set<std::pair<uint32_t, uint32_t>>{{0, 1}, {1, 2}});
  CHECK(DumpGraph(g) == "0 1 1\n1 2 1\n");
}

TEST_CASE("duplicates pick each other, ties by index") {
  EmbeddingMatrix m(4, 2, {5, 5, 0, 0, 5, 5, 0, 0});
  const KnnResult r = KnnSearch(m, 1);
  CHECK(r.of(0)[0].index == 2);
  CHECK(r.of(2)[0].index == 0);
  CHECK(r.of(1)[0].index == 3);
  CHECK(r.of(0)[0].distance == 0.0);
  // Equidistant neighbors: 1 sees 0 and 2 at distance 1, takes 0.
  EmbeddingMatrix line(3, 1, {0, 1, 2});
  CHECK(KnnSearch(line, 1).of(1)[0].index == 0);
}

TEST_CASE("two points") {
  EmbeddingMatrix m(2, 3, {0, 0, 0, 1, 1, 1});
  const KnnGraph g = BuildKnnGraph(m, 1);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == Edge{0, 1, 1.0});
}

TEST_CASE("preconditions") {
  EmbeddingMatrix m(3, 2);
  CHECK_THROWS_AS(KnnSearch(m, 0), ValidationError);
  try {
    KnnSearch(m, 3);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()) == "k must be < N");
  }
}

TEST_CASE("matches the naive oracle for any block size and thread count") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t n = 2 + rng.Below(250);
    const size_t d = 1 + rng.Below(12);
    const size_t k = 1 + rng.Below(std::min<size_t>(n - 1, 12));
    const bool grid = trial % 3 == 0;  // many exact ties
    const EmbeddingMatrix m = RandomMatrix(n, d, rng, grid);
    const auto expect = oracle::NaiveKnn(ToPoints(m), k);

    KnnOptions options;
    options.query_block = 1 + rng.Below(70);
    options.corpus_block = 1 + rng.Below(90);
    options.threads = 1 + rng.Below(4);
    const KnnResult r = KnnSearch(m, k, options);
    CHECK(Indices(r) == expect);
    CHECK(Indices(KnnSearch(m, k)) == expect);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < k; ++j) {
        CHECK(r.of(i)[j].distance == oracle::Dist2(ToPoints(m)[i], ToPoints(m)[expect[i][j]]));
      }
    }
  }
}

TEST_CASE("graph is the union of neighbor lists") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 2 + rng.Below(120);
    const size_t k = 1 + rng.Below(std::min<size_t>(n - 1, 8));
    const EmbeddingMatrix m = RandomMatrix(n, 4, rng, trial % 2 == 0);
    const auto lists = oracle::NaiveKnn(ToPoints(m), k);
    std::set<std::pair<uint32_t, uint32_t>> expect;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j : lists[i]) {
        expect.insert({static_cast<uint32_t>(std::min(i, j)), static_cast<uint32_t>(std::max(i, j))});
      }
    }
    const KnnGraph g = BuildKnnGraph(m, k);
    CHECK(g.n_nodes == n);
    CHECK(g.k_used == k);
    CHECK(g.edges.size() == expect.size());
    CHECK(EdgeSet(g) == expect);
    std::vector<size_t> degree(n, 0);
    for (const auto& e : g.edges) {
      CHECK(e.i < e.j);
      CHECK(e.weight == 1.0);
      ++degree[e.i];
      ++degree[e.j];
    }
    // Each node keeps its own k edges; in-edges can push a hub past 2k, so
    // only the mean degree is bounded by 2k.
    size_t sum = 0;
    for (size_t deg : degree) {
      CHECK(deg >= k);
      CHECK(deg <= n - 1);
      sum += deg;
    }
    CHECK(g.edges.size() <= n * k);
    CHECK(sum <= 2 * k * n);
  }
}

TEST_CASE("a hub can have more than 2k neighbors") {
  // Five points on the unit circle are farther from each other (chord
  // 2 sin 36deg > 1) than from the center, so all pick the center at k = 1.
  EmbeddingMatrix m(6, 2);
  for (int p = 0; p < 5; ++p) {
    m.at(p + 1, 0) = static_cast<float>(std::cos(2 * M_PI * p / 5));
    m.at(p + 1, 1) = static_cast<float>(std::sin(2 * M_PI * p / 5));
  }
  const KnnGraph g = BuildKnnGraph(m, 1);
  size_t center = 0;
  for (const auto& e : g.edges) center += e.i == 0;
  CHECK(center == 5);
  CHECK(g.edges.size() == 5);
}

TEST_CASE("graph is invariant under relabeling") {
  Rng rng(41);
  const EmbeddingMatrix m = RandomMatrix(60, 3, rng, false);
  std::vector<size_t> perm(60);
  for (size_t i = 0; i < 60; ++i) perm[i] = i;
  rng.Shuffle(perm);
  EmbeddingMatrix pm(60, 3);
  for (size_t i = 0; i < 60; ++i) {
    for (size_t d = 0; d < 3; ++d) pm.at(perm[i], d) = m.at(i, d);
  }
  std::set<std::pair<uint32_t, uint32_t>> mapped;
  for (const auto& e : BuildKnnGraph(m, 4).edges) {
    const auto a = static_cast<uint32_t>(perm[e.i]), b = static_cast<uint32_t>(perm[e.j]);
    mapped.insert({std::min(a, b), std::max(a, b)});
  }
  CHECK(EdgeSet(BuildKnnGraph(pm, 4)) == mapped);
}

TEST_CASE("separated blobs have no crossing edges") {
  const auto blobs = synthetic::GaussianBlobs(2, 10, 5, 50.0, 0.5, 3);
  const KnnGraph g = BuildKnnGraph(blobs.points, 3);
  for (const auto& e : g.edges) CHECK(blobs.labels[e.i] == blobs.labels[e.j]);
}

}  // TEST_SUITE
