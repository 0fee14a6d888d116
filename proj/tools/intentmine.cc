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


// intentmine command-line tool.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "intentmine/bench.h"
#include "intentmine/common.h"
#include "intentmine/community.h"
#include "intentmine/corpus.h"
#include "intentmine/embed.h"
#include "intentmine/http_api.h"
#include "intentmine/kmeans.h"
#include "intentmine/knn.h"
#include "intentmine/metrics.h"
#include "intentmine/partition.h"
#include "intentmine/service.h"
#include "intentmine/summarize.h"

#include "httplib.h"

namespace {

using namespace intentmine;

constexpr int kValidationExit = 2;

httplib::Server* g_server = nullptr;

void StopServer(int) {
  if (g_server) g_server->stop();
}

void WriteOrPrint(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFileBytes(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embed, cluster, evaluate and summarize short-text corpora"};
  app.require_subcommand(1);
  uint64_t seed = 0;
  size_t threads = 1;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  // embed
  auto* embed = app.add_subcommand("embed", "Compute document embeddings");
  std::string embed_corpus, embed_out, embed_adapter;
  size_t embed_dim = 64;
  embed->add_option("--corpus", embed_corpus, "Corpus file (JSON lines)")->required();
  embed->add_option("--out", embed_out, "Output embedding file")->required();
  embed->add_option("--dim", embed_dim, "Embedding dimension")->capture_default_str();
  embed->add_option("--adapter", embed_adapter, "Apply this adapter file");

  // adapt
  auto* adapt = app.add_subcommand("adapt", "Train an adapter from corpus labels");
  std::string adapt_corpus, adapt_emb, adapt_out;
  TrainConfig train;
  adapt->add_option("--corpus", adapt_corpus, "Corpus file; its labels are the targets")
      ->required();
  adapt->add_option("--embeddings", adapt_emb, "Base embedding file")->required();
  adapt->add_option("--out", adapt_out, "Output adapter file")->required();
  adapt->add_option("--epochs", train.epochs)->capture_default_str();
  adapt->add_option("--learning-rate", train.learning_rate)->capture_default_str();
  adapt->add_option("--batch-size", train.batch_size)->capture_default_str();
  adapt->add_option("--projection-dim", train.projection_dim, "0 = input dimension")
      ->capture_default_str();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster an embedding file");
  std::string cluster_emb, cluster_out, cluster_graph, cluster_mode = "auto";
  size_t cluster_k = 0, knn_k = 10;
  cluster->add_option("--embeddings", cluster_emb, "Embedding file")->required();
  cluster->add_option("--mode", cluster_mode, "auto (k-NN + Louvain) or fixed_k (k-means)")
      ->check(CLI::IsMember({"auto", "fixed_k"}))
      ->capture_default_str();
  cluster->add_option("--k", cluster_k, "Cluster count for fixed_k");
  cluster->add_option("--knn-k", knn_k, "Neighbors per node for auto")->capture_default_str();
  cluster->add_option("--out", cluster_out, "Partition file (default stdout)");
  cluster->add_option("--graph-out", cluster_graph, "Also write the k-NN graph (auto only)");

  // eval
  auto* eval = app.add_subcommand("eval", "Purity and NMI against corpus labels");
  std::string eval_corpus, eval_partition;
  eval->add_option("--corpus", eval_corpus, "Corpus file with labels")->required();
  eval->add_option("--partition", eval_partition, "Partition file")->required();

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Top bigrams per cluster");
  std::string sum_corpus, sum_partition;
  size_t sum_top = 5, sum_max = 0;
  summarize->add_option("--corpus", sum_corpus, "Corpus file")->required();
  summarize->add_option("--partition", sum_partition, "Partition file")->required();
  summarize->add_option("--top", sum_top, "Bigrams per cluster")->capture_default_str();
  summarize->add_option("--max", sum_max, "Largest clusters to show (0 = all)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1", data_dir;
  size_t serve_dim = 64;
  serve->add_option("--port", port, "TCP port")->required();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Persist projects here (default: memory only)");
  serve->add_option("--dim", serve_dim, "Embedding dimension for new projects")
      ->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Phase timings on synthetic corpora");
  std::vector<size_t> bench_sizes{1000, 10000, 50000}, bench_threads{1, 4};
  std::string bench_out;
  bench->add_option("--sizes", bench_sizes, "Corpus sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--threads", bench_threads, "Thread counts")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--out", bench_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationExit;
  }

  try {
    if (*embed) {
      const Corpus corpus = LoadCorpus(embed_corpus);
      EmbeddingMatrix m = BaseEmbed(corpus, embed_dim, seed, threads);
      if (!embed_adapter.empty()) m = ApplyAdapter(m, LoadAdapter(embed_adapter));
      SaveEmbeddings(m, embed_out);
      std::cerr << "embedded " << m.rows() << " documents, dim " << m.cols() << "\n";
    } else if (*adapt) {
      const Corpus corpus = LoadCorpus(adapt_corpus);
      const EmbeddingMatrix base = LoadEmbeddings(adapt_emb);
      if (base.rows() != corpus.size()) {
        throw ValidationError("embedding file has " + std::to_string(base.rows()) +
                              " rows for " + std::to_string(corpus.size()) + " documents");
      }
      train.seed = seed;
      const Adapter a = TrainAdapter(base, corpus.Labels(), train);
      SaveAdapter(a, adapt_out);
      std::cerr << "trained on " << a.trained_on << " documents, final loss " << a.final_loss()
                << "\n";
    } else if (*cluster) {
      const EmbeddingMatrix m = LoadEmbeddings(cluster_emb);
      Partition p;
      if (cluster_mode == "auto") {
        KnnOptions knn;
        knn.threads = threads;
        const KnnGraph graph = BuildKnnGraph(m, knn_k, knn);
        if (!cluster_graph.empty()) SaveGraph(graph, cluster_graph);
        LouvainOptions louvain;
        louvain.seed = seed;
        p = Louvain(WeightedGraph::FromKnnGraph(graph), louvain);
      } else {
        if (cluster_k == 0) throw ValidationError("fixed_k requires --k >= 1");
        KmeansOptions kmeans;
        kmeans.seed = seed;
        kmeans.threads = threads;
        p = Kmeans(m, cluster_k, kmeans).partition;
      }
      WriteOrPrint(cluster_out, DumpPartition(p));
    } else if (*eval) {
      const Corpus corpus = LoadCorpus(eval_corpus);
      const Partition p = LoadPartition(eval_partition);
      if (p.size() != corpus.size()) {
        throw ValidationError("partition has " + std::to_string(p.size()) + " nodes for " +
                              std::to_string(corpus.size()) + " documents");
      }
      std::cout << ToJson(Evaluate(p, corpus.Labels())).dump(2) << "\n";
    } else if (*summarize) {
      const Corpus corpus = LoadCorpus(sum_corpus);
      const Partition p = LoadPartition(sum_partition);
      if (p.size() != corpus.size()) {
        throw ValidationError("partition has " + std::to_string(p.size()) + " nodes for " +
                              std::to_string(corpus.size()) + " documents");
      }
      SummaryOptions options;
      options.n_top = sum_top;
      if (sum_max > 0) options.max_clusters = sum_max;
      std::cout << ToJson(SummarizePartition(corpus, p, options)).dump(2) << "\n";
    } else if (*serve) {
      ServiceConfig config;
      config.data_dir = data_dir;
      config.project.embed_dim = serve_dim;
      config.project.embed_seed = seed;
      config.project.threads = threads;
      Service service(config);
      httplib::Server server;
      RegisterRoutes(server, service);
      g_server = &server;
      std::signal(SIGINT, StopServer);
      std::signal(SIGTERM, StopServer);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
    } else if (*bench) {
      BenchConfig config;
      config.seed = seed;
      const BenchReport report = RunBench(bench_sizes, bench_threads, config);
      WriteOrPrint(bench_out, BenchCsv(report));
      std::cerr << BenchSummary(report);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationExit;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
