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

// Analyst-facing project state and the label/recluster loop.
//
// A Project owns one corpus, its base embeddings, an optional adapter with
// the adapted embeddings, the analyst label store and the clustering
// results. Clustering jobs run one at a time on a per-project worker
// thread and read immutable snapshots; label writes are serialized under
// the project lock. Jobs never touch labels and labeling never touches
// partitions.
//
// On-disk layout of a persisted project directory:
//   project.json        id, name, config, counters
//   corpus.jsonl        corpus as uploaded (file labels = reference labels)
//   base.emb            base embeddings
//   adapter.adp         adapter (only when trained)
//   adapted.emb         adapted embeddings (only when trained)
//   labels.json         {"revision": n, "labels": {doc_id: label}}
//   jobs.jsonl          one job record per line
//   partition.txt       latest top-level partition (+ partition.json: scope, levels)
//   sub/<cid>.txt       sub-cluster partitions (+ <cid>.json: scope, levels)

#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "intentmine/corpus.h"
#include "intentmine/embed.h"
#include "intentmine/metrics.h"
#include "intentmine/pipeline.h"
#include "json.hpp"

namespace intentmine {

struct ProjectConfig {
  size_t embed_dim = 64;
  uint64_t embed_seed = 0;
  size_t threads = 1;
  size_t n_top = 5;

  nlohmann::json ToJson() const;
  static ProjectConfig FromJson(const nlohmann::json& j);
};

enum class JobStatus { kQueued, kRunning, kDone, kFailed };
std::string_view JobStatusName(JobStatus s);

struct JobRecord {
  std::string id;
  ClusterJobRequest request;
  std::optional<int> parent_cluster;  // set for sub-cluster jobs
  JobStatus status = JobStatus::kQueued;
  PhaseTimings timings;
  std::string partition_digest;
  std::string embedding_digest;  // digest of the embeddings the job read
  bool adapted = false;
  size_t n_clusters = 0;
  std::string error;

  nlohmann::json ToJson() const;
  static JobRecord FromJson(const nlohmann::json& j);
};

struct LabelUpdate {
  size_t labeled_count = 0;  // documents touched by this update
  uint64_t revision = 0;
  double labeled_fraction = 0.0;  // of the whole corpus, after the update
};

struct AdapterStats {
  size_t trained_on = 0;
  size_t classes = 0;
  size_t epochs = 0;
  size_t input_dim = 0;
  size_t output_dim = 0;
  double first_loss = 0.0;
  double final_loss = 0.0;

  nlohmann::json ToJson() const;
};

struct ProjectStatus {
  size_t n_docs = 0;
  size_t labeled_docs = 0;
  double labeled_fraction = 0.0;
  uint64_t revision = 0;
  bool has_adapter = false;
  bool has_reference_labels = false;
  std::optional<std::string> latest_job;
  size_t n_clusters = 0;

  nlohmann::json ToJson() const;
};

struct DocPage {
  size_t total = 0;
  std::vector<Document> docs;
};

class Project {
 public:
  // An empty `dir` keeps the project in memory only.
  Project(std::string id, std::string name, ProjectConfig config,
          std::filesystem::path dir = {});
  ~Project();
  Project(const Project&) = delete;
  Project& operator=(const Project&) = delete;

  static std::unique_ptr<Project> Load(const std::filesystem::path& dir);

  const std::string& id() const { return id_; }
  const std::string& name() const { return name_; }
  const ProjectConfig& config() const { return config_; }

  // Replaces the corpus: recomputes base embeddings and clears labels,
  // adapter and partitions. Returns the document count.
  size_t SetCorpus(Corpus corpus);

  // Queues a clustering job and returns its id.
  std::string SubmitJob(ClusterJobRequest req);
  // Queues a job scoped to the members of `cluster_id` in the latest
  // top-level partition; the result is stored under that cluster.
  std::string SubmitSubcluster(int cluster_id, ClusterJobRequest req);
  JobRecord GetJob(const std::string& job_id) const;
  JobRecord WaitForJob(const std::string& job_id) const;
  std::vector<JobRecord> Jobs() const;

  // Submit + wait. Throws the job's error, if any, as ValidationError.
  std::shared_ptr<const ClusterOutcome> RunJob(ClusterJobRequest req);
  std::shared_ptr<const ClusterOutcome> RunSubcluster(int cluster_id, ClusterJobRequest req);

  // Re-executes a finished job from its record against the current
  // embeddings. Throws ConflictError if the embeddings changed since.
  Partition ReplayJob(const std::string& job_id) const;

  LabelUpdate BulkLabel(int cluster_id, const std::string& label);
  LabelUpdate LabelDocuments(const std::vector<std::string>& doc_ids, const std::string& label);
  std::map<std::string, std::string> Labels() const;
  uint64_t revision() const;

  // Trains a new adapter on the label store and swaps in adapted
  // embeddings for subsequent jobs.
  AdapterStats RetrainAdapter(const TrainConfig& cfg);

  std::vector<ClusterSummary> Clusters(size_t max_clusters, size_t n_top) const;
  std::vector<ClusterSummary> Subclusters(int cluster_id, size_t max_clusters, size_t n_top) const;
  DocPage ClusterDocs(int cluster_id, size_t offset, size_t limit) const;
  // NotFoundError when no reference labels cover the latest partition.
  EvalReport Metrics() const;
  ProjectStatus Status() const;

  std::shared_ptr<const ClusterOutcome> latest() const;
  std::shared_ptr<const ClusterOutcome> subcluster(int cluster_id) const;
  std::shared_ptr<const Corpus> corpus() const;
  // Adapted embeddings when an adapter exists, else base embeddings.
  std::shared_ptr<const EmbeddingMatrix> active_embeddings() const;
  std::optional<Adapter> adapter() const;

 private:
  struct QueuedJob {
    std::string id;
    ClusterJobRequest request;
    std::optional<int> parent;
    std::optional<std::string> parent_job;  // top-level job that made the parent
  };

  void WorkerLoop(std::stop_token stop);
  void Execute(const QueuedJob& job);
  std::string Enqueue(ClusterJobRequest req, std::optional<int> parent,
                      std::optional<std::string> parent_job);
  JobRecord& RecordLocked(const std::string& job_id);
  const JobRecord& RecordLocked(const std::string& job_id) const;
  void RequireCorpusLocked() const;
  LabelUpdate ApplyLabelsLocked(const std::vector<size_t>& docs, const std::string& label);
  std::shared_ptr<const ClusterOutcome> RebuildOutcome(Partition p, std::vector<size_t> scope) const;

  void SaveMeta() const;
  void SaveCorpusArtifacts() const;
  void SaveAdapterArtifacts() const;
  void SaveLabels() const;
  void SaveJobs() const;
  void SavePartitions() const;

  const std::string id_;
  const std::string name_;
  const ProjectConfig config_;
  const std::filesystem::path dir_;

  mutable std::shared_mutex mu_;
  mutable std::condition_variable_any job_done_;
  std::shared_ptr<const Corpus> corpus_;
  LabelColumn reference_;
  std::shared_ptr<const EmbeddingMatrix> base_;
  std::shared_ptr<const EmbeddingMatrix> adapted_;
  std::optional<Adapter> adapter_;
  std::map<std::string, std::string> labels_;
  uint64_t revision_ = 0;
  uint64_t corpus_generation_ = 0;
  std::shared_ptr<const ClusterOutcome> latest_;
  std::optional<std::string> latest_job_;
  std::map<int, std::shared_ptr<const ClusterOutcome>> children_;
  std::vector<JobRecord> jobs_;
  uint64_t next_job_ = 1;
  std::mutex adapt_mu_;  // one retraining at a time

  std::mutex queue_mu_;
  std::condition_variable_any queue_cv_;
  std::deque<QueuedJob> queue_;
  std::jthread worker_;
};

struct ServiceConfig {
  std::filesystem::path data_dir;  // empty = in-memory
  ProjectConfig project;
};

class Service {
 public:
  // Loads every project directory found under data_dir.
  explicit Service(ServiceConfig config = {});

  std::string CreateProject(const std::string& name);
  std::shared_ptr<Project> Get(const std::string& project_id) const;
  std::vector<std::string> ProjectIds() const;

 private:
  ServiceConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Project>> projects_;
  uint64_t next_id_ = 1;
};

}  // namespace intentmine
