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


#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "doctest.h"
#include "intentmine/corpus.h"
#include "intentmine/partition.h"
#include "json.hpp"
#include "test_util.h"

using namespace intentmine;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with `args` (already shell-quoted) inside `dir`.
Run Cli(const testutil::TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt";
  const auto err = dir.path() / "stderr.txt";
  const std::string cmd = "cd '" + dir.path().string() + "' && '" INTENTMINE_CLI_PATH "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFileBytes(out);
  r.err = ReadFileBytes(err);
  return r;
}

void WriteCorpus(const testutil::TempDir& dir) {
  std::string text;
  const char* topics[] = {"billing invoice charge card", "weather rain forecast cloud",
                          "football goal match league"};
  for (int i = 0; i < 12; ++i) {
    nlohmann::json line = {{"id", "d" + std::to_string(i)},
                           {"text", std::string(topics[i % 3]) + " item" + std::to_string(i)},
                           {"label", "t" + std::to_string(i % 3)}};
    text += line.dump() + "\n";
  }
  WriteFileBytes(dir.path() / "corpus.jsonl", text);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("embed, cluster, eval, summarize") {
  testutil::TempDir dir;
  WriteCorpus(dir);
  Run r = Cli(dir, "--seed 3 embed --corpus corpus.jsonl --out base.emb --dim 32");
  REQUIRE(r.code == 0);
  const EmbeddingMatrix m = LoadEmbeddings(dir.path() / "base.emb");
  CHECK(m.rows() == 12);
  CHECK(m.cols() == 32);

  r = Cli(dir, "cluster --embeddings base.emb --mode fixed_k --k 3 --out km.txt");
  REQUIRE(r.code == 0);
  CHECK(LoadPartition(dir.path() / "km.txt").num_clusters() == 3);

  r = Cli(dir, "cluster --embeddings base.emb --knn-k 3 --out lv.txt --graph-out g.txt");
  REQUIRE(r.code == 0);
  const Partition lv = LoadPartition(dir.path() / "lv.txt");
  CHECK(lv.size() == 12);
  CHECK(lv.method == ClusterMethod::kLouvain);
  CHECK_FALSE(ReadFileBytes(dir.path() / "g.txt").empty());

  r = Cli(dir, "cluster --embeddings base.emb --knn-k 3");
  CHECK(r.code == 0);
  CHECK(r.out == ReadFileBytes(dir.path() / "lv.txt"));

  r = Cli(dir, "eval --corpus corpus.jsonl --partition km.txt");
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report.at("purity") == 1.0);

  r = Cli(dir, "summarize --corpus corpus.jsonl --partition km.txt --top 2 --max 2");
  REQUIRE(r.code == 0);
  const auto cards = nlohmann::json::parse(r.out);
  CHECK(cards.size() == 2);
  CHECK(cards[0].at("top_bigrams").size() == 2);

  r = Cli(dir, "adapt --corpus corpus.jsonl --embeddings base.emb --out a.adp --epochs 10");
  REQUIRE(r.code == 0);
  r = Cli(dir, "embed --corpus corpus.jsonl --out adapted.emb --dim 32 --adapter a.adp");
  REQUIRE(r.code == 0);
  CHECK(LoadEmbeddings(dir.path() / "adapted.emb").rows() == 12);
}

TEST_CASE("bench writes the CSV") {
  testutil::TempDir dir;
  const Run r = Cli(dir, "bench --sizes 60,120 --threads 1,2 --out bench.csv");
  REQUIRE(r.code == 0);
  const std::string csv = ReadFileBytes(dir.path() / "bench.csv");
  CHECK(csv.rfind("size,threads,embed_ms,knn_ms,cluster_ms,total_ms\n", 0) == 0);
  size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 5);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("exit codes") {
  testutil::TempDir dir;
  WriteCorpus(dir);
  CHECK(Cli(dir, "").code == 2);
  CHECK(Cli(dir, "frobnicate").code == 2);
  CHECK(Cli(dir, "embed --corpus corpus.jsonl").code == 2);
  CHECK(Cli(dir, "serve").code == 2);
  CHECK(Cli(dir, "--help").code == 0);

  WriteFileBytes(dir.path() / "bad.jsonl", "{\"id\": \"a\", \"text\": \"x\"}\n{oops\n");
  Run r = Cli(dir, "embed --corpus bad.jsonl --out x.emb");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  REQUIRE(Cli(dir, "embed --corpus corpus.jsonl --out base.emb --dim 8").code == 0);
  CHECK(Cli(dir, "cluster --embeddings base.emb --mode fixed_k").code == 2);
  CHECK(Cli(dir, "cluster --embeddings base.emb --mode fixed_k --k 13").code == 2);
  CHECK(Cli(dir, "cluster --embeddings base.emb --mode spectral").code == 2);
  CHECK(Cli(dir, "cluster --embeddings base.emb --knn-k 12").code == 2);
  WriteFileBytes(dir.path() / "junk.emb", "EMB0");
  CHECK(Cli(dir, "cluster --embeddings junk.emb").code == 2);
  WriteFileBytes(dir.path() / "short.txt", "# method=kmeans levels=0 nodes=2 clusters=1\n0 0\n1 0\n");
  CHECK(Cli(dir, "eval --corpus corpus.jsonl --partition short.txt").code == 2);
  CHECK(Cli(dir, "embed --corpus missing.jsonl --out y.emb").code != 0);
}

}  // TEST_SUITE
