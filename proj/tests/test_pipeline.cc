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


#include <set>
#include <string>

#include "doctest.h"
#include "intentmine/common.h"
#include "intentmine/embed.h"
#include "intentmine/pipeline.h"
#include "intentmine/synthetic.h"

using namespace intentmine;

namespace {

Corpus Placeholder(size_t n) {
  std::vector<Document> docs;
  for (size_t i = 0; i < n; ++i) docs.push_back(MakeDocument("d" + std::to_string(i), "x y"));
  return Corpus(docs);
}

Corpus ThreeTopics() {
  synthetic::PlantedCorpusConfig cfg;
  cfg.n_docs = 150;
  cfg.n_groups = 3;
  cfg.group_token_prob = 0.8;
  cfg.seed = 2;
  return synthetic::PlantedCorpus(cfg);
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("auto mode on a three-topic corpus") {
  const Corpus c = ThreeTopics();
  const EmbeddingMatrix emb = BaseEmbed(c, 64, 0);
  const ClusterOutcome out = RunClusterJob(c, emb, c.Labels(), ClusterJobRequest{});
  CHECK(out.partition.num_clusters() == 3);
  REQUIRE(out.eval.has_value());
  CHECK(out.eval->purity == 1.0);
  CHECK(out.knn_k_used == kDefaultKnnK);
  CHECK(out.summaries.size() == 3);
  CHECK(out.timings.total_ms >= out.timings.cluster_ms);
  CHECK(out.timings.knn_ms > 0.0);
}

TEST_CASE("fixed k equal to scope size gives singletons") {
  const Corpus c = ThreeTopics();
  const EmbeddingMatrix emb = BaseEmbed(c, 16, 0);
  ClusterJobRequest req;
  req.mode = JobMode::kFixedK;
  req.k = 20;
  req.scope = std::vector<std::string>();
  for (size_t i = 0; i < 20; ++i) req.scope->push_back(c[i].id);
  const ClusterOutcome out = RunClusterJob(c, emb, {}, req);
  CHECK(out.partition.num_clusters() == 20);
  CHECK(out.partition.method == ClusterMethod::kKmeans);
  CHECK_FALSE(out.eval.has_value());
}

TEST_CASE("same seed, same result") {
  const Corpus c = ThreeTopics();
  const EmbeddingMatrix emb = BaseEmbed(c, 32, 1);
  ClusterJobRequest req;
  req.seed = 99;
  const auto a = RunClusterJob(c, emb, c.Labels(), req);
  const auto b = RunClusterJob(c, emb, c.Labels(), req);
  CHECK(a.partition == b.partition);
  CHECK(a.summaries == b.summaries);
  req.mode = JobMode::kFixedK;
  req.k = 5;
  CHECK(RunClusterJob(c, emb, {}, req).partition == RunClusterJob(c, emb, {}, req).partition);
}

TEST_CASE("errors") {
  const Corpus c = Placeholder(5);
  const EmbeddingMatrix emb(5, 3);
  ClusterJobRequest req;
  req.scope = std::vector<std::string>{"d0"};
  CHECK_THROWS_AS(RunClusterJob(c, emb, {}, req), ValidationError);
  req.scope = std::vector<std::string>{"d0", "nope"};
  try {
    RunClusterJob(c, emb, {}, req);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("\"nope\"") != std::string::npos);
  }
  req.scope.reset();
  req.mode = JobMode::kFixedK;
  req.k = 6;
  CHECK_THROWS_AS(RunClusterJob(c, emb, {}, req), ValidationError);
  CHECK_THROWS_AS(RunClusterJob(c, EmbeddingMatrix(4, 3), {}, ClusterJobRequest{}),
                  ValidationError);
}

TEST_CASE("small scopes cap knn_k") {
  const Corpus c = ThreeTopics();
  const EmbeddingMatrix emb = BaseEmbed(c, 16, 0);
  ClusterJobRequest req;
  req.knn_k = 1;
  req.scope = std::vector<std::string>{c[0].id, c[1].id};
  const auto two = RunClusterJob(c, emb, {}, req);
  CHECK(two.partition.num_clusters() <= 2);
  req.knn_k = 10;
  req.scope = std::vector<std::string>{c[0].id, c[1].id, c[2].id};
  CHECK(RunClusterJob(c, emb, {}, req).knn_k_used == 2);
}

TEST_CASE("evaluation only when reference labels cover the scope") {
  Corpus c = ThreeTopics();
  const EmbeddingMatrix emb = BaseEmbed(c, 16, 0);
  LabelColumn partial = c.Labels();
  partial[7].reset();
  CHECK_FALSE(RunClusterJob(c, emb, partial, ClusterJobRequest{}).eval.has_value());
  ClusterJobRequest req;
  req.scope = std::vector<std::string>{c[0].id, c[1].id, c[2].id, c[3].id};
  CHECK(RunClusterJob(c, emb, partial, req).eval.has_value());
}

TEST_CASE("sub-clustering a super-blob finds its two sub-blobs") {
  // Two super-blobs far apart, each made of two sub-blobs.
  Rng rng(5);
  const size_t per = 40, dim = 6;
  EmbeddingMatrix emb(4 * per, dim);
  std::vector<int> sub(4 * per);
  for (size_t s = 0; s < 4; ++s) {
    std::vector<double> center(dim, 0.0);
    center[0] = s < 2 ? -200.0 : 200.0;
    center[1] = s % 2 == 0 ? -20.0 : 20.0;
    for (size_t p = 0; p < per; ++p) {
      const size_t row = s * per + p;
      sub[row] = static_cast<int>(s);
      for (size_t d = 0; d < dim; ++d) {
        emb.at(row, d) = static_cast<float>(center[d] + rng.Normal());
      }
    }
  }
  const Corpus c = Placeholder(4 * per);
  ClusterJobRequest req;
  req.scope = std::vector<std::string>();
  for (size_t i = 0; i < 2 * per; ++i) req.scope->push_back(c[i].id);
  const auto out = RunClusterJob(c, emb, synthetic::ToLabelColumn(sub), req);
  CHECK(out.partition.num_clusters() == 2);
  REQUIRE(out.eval.has_value());
  CHECK(out.eval->purity == 1.0);
  std::set<size_t> covered(out.scope.begin(), out.scope.end());
  CHECK(covered.size() == 2 * per);
}

TEST_CASE("request json") {
  auto req = ClusterJobRequest::FromJson({{"mode", "fixed_k"}});
  CHECK(req.k == kDefaultKmeansK);
  req = ClusterJobRequest::FromJson({{"mode", "fixed_k"}, {"k", 7}, {"seed", 3}});
  CHECK(req.k == 7);
  CHECK(req.seed == 3);
  req = ClusterJobRequest::FromJson(nlohmann::json::object());
  CHECK(req.mode == JobMode::kAuto);
  CHECK(req.knn_k == kDefaultKnnK);
  CHECK_FALSE(req.scope.has_value());
  req = ClusterJobRequest::FromJson({{"scope", {"a", "b"}}, {"knn_k", 4}});
  CHECK(req.scope == std::vector<std::string>{"a", "b"});
  const auto round = ClusterJobRequest::FromJson(req.ToJson());
  CHECK(round.scope == req.scope);
  CHECK(round.knn_k == 4);

  CHECK_THROWS_AS(ClusterJobRequest::FromJson({{"mode", "fixed_k"}, {"k", 0}}), ValidationError);
  CHECK_THROWS_AS(ClusterJobRequest::FromJson({{"mode", "fixed_k"}, {"k", -2}}), ValidationError);
  CHECK_THROWS_AS(ClusterJobRequest::FromJson({{"mode", "spectral"}}), ValidationError);
  CHECK_THROWS_AS(ClusterJobRequest::FromJson({{"knn_k", 0}}), ValidationError);
  CHECK_THROWS_AS(ClusterJobRequest::FromJson({{"scope", "all"}}), ValidationError);
  CHECK_THROWS_AS(ClusterJobRequest::FromJson(nlohmann::json::array()), ValidationError);
}

TEST_CASE("embedding digest tracks content") {
  EmbeddingMatrix a(2, 2, {1, 2, 3, 4});
  EmbeddingMatrix b = a;
  CHECK(DigestEmbeddings(a) == DigestEmbeddings(b));
  b.values()[3] = 4.0001f;
  CHECK(DigestEmbeddings(a) != DigestEmbeddings(b));
  CHECK(DigestEmbeddings(EmbeddingMatrix(1, 4)) != DigestEmbeddings(EmbeddingMatrix(4, 1)));
}

}  // TEST_SUITE
