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

#include "intentmine/service.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "intentmine/common.h"
#include "intentmine/partition.h"

namespace intentmine {

namespace fs = std::filesystem;

namespace {

void WriteAtomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  WriteFileBytes(tmp, bytes);
  fs::rename(tmp, path);
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string ValidLabel(const std::string& label) {
  std::string trimmed = Trim(label);
  if (trimmed.empty()) throw ValidationError("label must not be empty");
  return trimmed;
}

JobStatus ParseJobStatus(std::string_view s) {
  if (s == "queued") return JobStatus::kQueued;
  if (s == "running") return JobStatus::kRunning;
  if (s == "done") return JobStatus::kDone;
  if (s == "failed") return JobStatus::kFailed;
  throw FormatError("unknown job status \"" + std::string(s) + "\"");
}

bool HasAnyLabel(const LabelColumn& column) {
  return std::any_of(column.begin(), column.end(), [](const auto& l) { return l.has_value(); });
}

}  // namespace

nlohmann::json ProjectConfig::ToJson() const {
  return {{"embed_dim", embed_dim},
          {"embed_seed", embed_seed},
          {"threads", threads},
          {"n_top", n_top}};
}

ProjectConfig ProjectConfig::FromJson(const nlohmann::json& j) {
  ProjectConfig c;
  c.embed_dim = j.value("embed_dim", c.embed_dim);
  c.embed_seed = j.value("embed_seed", c.embed_seed);
  c.threads = j.value("threads", c.threads);
  c.n_top = j.value("n_top", c.n_top);
  return c;
}

std::string_view JobStatusName(JobStatus s) {
  switch (s) {
    case JobStatus::kQueued: return "queued";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "unknown";
}

nlohmann::json JobRecord::ToJson() const {
  nlohmann::json j = {{"job_id", id},
                      {"request", request.ToJson()},
                      {"seed", request.seed},
                      {"status", JobStatusName(status)},
                      {"timings", intentmine::ToJson(timings)},
                      {"partition_digest", partition_digest},
                      {"embedding_digest", embedding_digest},
                      {"adapted", adapted},
                      {"n_clusters", n_clusters}};
  if (parent_cluster) j["parent_cluster"] = *parent_cluster;
  if (!error.empty()) j["error"] = error;
  return j;
}

JobRecord JobRecord::FromJson(const nlohmann::json& j) {
  JobRecord r;
  r.id = j.at("job_id").get<std::string>();
  r.request = ClusterJobRequest::FromJson(j.at("request"));
  if (j.contains("parent_cluster")) r.parent_cluster = j["parent_cluster"].get<int>();
  r.status = ParseJobStatus(j.at("status").get<std::string>());
  const auto& t = j.at("timings");
  r.timings = {t.value("embed_ms", 0.0), t.value("knn_ms", 0.0), t.value("cluster_ms", 0.0),
               t.value("total_ms", 0.0)};
  r.partition_digest = j.value("partition_digest", "");
  r.embedding_digest = j.value("embedding_digest", "");
  r.adapted = j.value("adapted", false);
  r.n_clusters = j.value("n_clusters", size_t{0});
  r.error = j.value("error", "");
  return r;
}

nlohmann::json AdapterStats::ToJson() const {
  return {{"trained_on", trained_on}, {"classes", classes},       {"epochs", epochs},
          {"input_dim", input_dim},   {"output_dim", output_dim}, {"first_loss", first_loss},
          {"final_loss", final_loss}};
}

nlohmann::json ProjectStatus::ToJson() const {
  nlohmann::json j = {{"n_docs", n_docs},
                      {"labeled_docs", labeled_docs},
                      {"labeled_fraction", labeled_fraction},
                      {"revision", revision},
                      {"has_adapter", has_adapter},
                      {"has_reference_labels", has_reference_labels},
                      {"n_clusters", n_clusters}};
  j["latest_job"] = latest_job ? nlohmann::json(*latest_job) : nlohmann::json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Project

Project::Project(std::string id, std::string name, ProjectConfig config, fs::path dir)
    : id_(std::move(id)), name_(std::move(name)), config_(config), dir_(std::move(dir)) {
  if (config_.embed_dim < 2) throw ValidationError("embed_dim must be >= 2");
  if (!dir_.empty()) {
    fs::create_directories(dir_);
    SaveMeta();
  }
  worker_ = std::jthread([this](std::stop_token stop) { WorkerLoop(stop); });
}

Project::~Project() {
  worker_.request_stop();
  queue_cv_.notify_all();
}

void Project::WorkerLoop(std::stop_token stop) {
  while (true) {
    QueuedJob job;
    {
      std::unique_lock lock(queue_mu_);
      if (!queue_cv_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
      job = std::move(queue_.front());
      queue_.pop_front();
    }
    Execute(job);
  }
}

void Project::RequireCorpusLocked() const {
  if (!corpus_) throw ConflictError("project has no corpus; upload one first");
}

size_t Project::SetCorpus(Corpus corpus) {
  if (corpus.empty()) throw ValidationError("corpus is empty");
  auto shared = std::make_shared<const Corpus>(std::move(corpus));
  auto base = std::make_shared<const EmbeddingMatrix>(
      BaseEmbed(*shared, config_.embed_dim, config_.embed_seed, config_.threads));

  std::unique_lock lock(mu_);
  corpus_ = shared;
  reference_ = corpus_->Labels();
  base_ = base;
  adapted_.reset();
  adapter_.reset();
  if (!labels_.empty()) {
    labels_.clear();
    ++revision_;
  }
  latest_.reset();
  latest_job_.reset();
  children_.clear();
  ++corpus_generation_;
  SaveCorpusArtifacts();
  SaveAdapterArtifacts();
  SaveLabels();
  SavePartitions();
  return corpus_->size();
}

std::string Project::Enqueue(ClusterJobRequest req, std::optional<int> parent,
                             std::optional<std::string> parent_job) {
  std::string id;
  {
    std::unique_lock lock(mu_);
    RequireCorpusLocked();
    // Reject what the job would reject, so callers get the error up front.
    const size_t scope = req.scope ? req.scope->size() : corpus_->size();
    if (req.scope) {
      std::set<std::string_view> seen;
      for (const auto& doc_id : *req.scope) {
        if (!corpus_->IndexOf(doc_id)) {
          throw ValidationError("unknown document id \"" + doc_id + "\" in scope");
        }
        if (!seen.insert(doc_id).second) {
          throw ValidationError("document id \"" + doc_id + "\" repeated in scope");
        }
      }
    }
    if (scope < 2) throw ValidationError("scope must contain at least 2 documents");
    if (req.mode == JobMode::kFixedK && (req.k < 1 || req.k > scope)) {
      throw ValidationError("k = " + std::to_string(req.k) + " is outside [1, " +
                            std::to_string(scope) + "] for this scope");
    }
    id = "j" + std::to_string(next_job_++);
    JobRecord record;
    record.id = id;
    record.request = req;
    record.parent_cluster = parent;
    jobs_.push_back(record);
    SaveJobs();
  }
  {
    std::lock_guard lock(queue_mu_);
    queue_.push_back({id, std::move(req), parent, std::move(parent_job)});
  }
  queue_cv_.notify_one();
  return id;
}

std::string Project::SubmitJob(ClusterJobRequest req) {
  return Enqueue(std::move(req), std::nullopt, std::nullopt);
}

std::string Project::SubmitSubcluster(int cluster_id, ClusterJobRequest req) {
  std::optional<std::string> parent_job;
  {
    std::shared_lock lock(mu_);
    RequireCorpusLocked();
    if (!latest_) throw ConflictError("no partition yet; run a clustering job first");
    if (cluster_id < 0 || static_cast<size_t>(cluster_id) >= latest_->partition.num_clusters()) {
      throw NotFoundError("unknown cluster " + std::to_string(cluster_id));
    }
    std::vector<std::string> members;
    for (size_t node = 0; node < latest_->partition.size(); ++node) {
      if (latest_->partition.assignment[node] == cluster_id) {
        members.push_back((*corpus_)[latest_->scope[node]].id);
      }
    }
    if (members.size() < 2) throw ValidationError("nothing to sub-cluster");
    req.scope = std::move(members);
    parent_job = latest_job_;
  }
  return Enqueue(std::move(req), cluster_id, std::move(parent_job));
}

JobRecord& Project::RecordLocked(const std::string& job_id) {
  for (auto& r : jobs_) {
    if (r.id == job_id) return r;
  }
  throw NotFoundError("unknown job " + job_id);
}

const JobRecord& Project::RecordLocked(const std::string& job_id) const {
  for (const auto& r : jobs_) {
    if (r.id == job_id) return r;
  }
  throw NotFoundError("unknown job " + job_id);
}

void Project::Execute(const QueuedJob& job) {
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<const EmbeddingMatrix> embeddings;
  LabelColumn reference;
  uint64_t generation = 0;
  bool adapted = false;
  {
    std::unique_lock lock(mu_);
    RecordLocked(job.id).status = JobStatus::kRunning;
    corpus = corpus_;
    embeddings = adapted_ ? adapted_ : base_;
    adapted = adapted_ != nullptr;
    reference = reference_;
    generation = corpus_generation_;
  }

  std::shared_ptr<const ClusterOutcome> outcome;
  std::string error;
  try {
    if (!corpus) throw ConflictError("project has no corpus");
    PipelineOptions options;
    options.threads = config_.threads;
    options.n_top = config_.n_top;
    outcome = std::make_shared<const ClusterOutcome>(
        RunClusterJob(*corpus, *embeddings, reference, job.request, options));
  } catch (const std::exception& e) {
    error = e.what();
  }

  std::unique_lock lock(mu_);
  JobRecord& record = RecordLocked(job.id);
  if (error.empty() && generation != corpus_generation_) {
    error = "corpus was replaced while the job was running";
  }
  if (error.empty() && job.parent && latest_job_ != job.parent_job) {
    error = "parent partition was superseded while the job was running";
  }
  if (!error.empty()) {
    record.status = JobStatus::kFailed;
    record.error = error;
  } else {
    record.status = JobStatus::kDone;
    record.timings = outcome->timings;
    record.partition_digest = outcome->partition.Digest();
    record.embedding_digest = DigestEmbeddings(*embeddings);
    record.adapted = adapted;
    record.n_clusters = outcome->partition.num_clusters();
    if (job.parent) {
      children_[*job.parent] = outcome;
    } else {
      latest_ = outcome;
      latest_job_ = job.id;
      children_.clear();
    }
    SavePartitions();
  }
  SaveJobs();
  job_done_.notify_all();
}

JobRecord Project::GetJob(const std::string& job_id) const {
  std::shared_lock lock(mu_);
  return RecordLocked(job_id);
}

JobRecord Project::WaitForJob(const std::string& job_id) const {
  std::shared_lock lock(mu_);
  job_done_.wait(lock, [&] {
    const auto s = RecordLocked(job_id).status;
    return s == JobStatus::kDone || s == JobStatus::kFailed;
  });
  return RecordLocked(job_id);
}

std::vector<JobRecord> Project::Jobs() const {
  std::shared_lock lock(mu_);
  return jobs_;
}

std::shared_ptr<const ClusterOutcome> Project::RunJob(ClusterJobRequest req) {
  const auto record = WaitForJob(SubmitJob(std::move(req)));
  if (record.status == JobStatus::kFailed) throw ValidationError(record.error);
  return latest();
}

std::shared_ptr<const ClusterOutcome> Project::RunSubcluster(int cluster_id,
                                                             ClusterJobRequest req) {
  const auto record = WaitForJob(SubmitSubcluster(cluster_id, std::move(req)));
  if (record.status == JobStatus::kFailed) throw ValidationError(record.error);
  return subcluster(cluster_id);
}

Partition Project::ReplayJob(const std::string& job_id) const {
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<const EmbeddingMatrix> embeddings;
  JobRecord record;
  {
    std::shared_lock lock(mu_);
    record = RecordLocked(job_id);
    corpus = corpus_;
    embeddings = adapted_ ? adapted_ : base_;
  }
  if (record.status != JobStatus::kDone) {
    throw ConflictError("job " + job_id + " did not finish successfully");
  }
  if (!embeddings || DigestEmbeddings(*embeddings) != record.embedding_digest) {
    throw ConflictError("embeddings changed since job " + job_id + " ran");
  }
  PipelineOptions options;
  options.threads = config_.threads;
  options.n_top = config_.n_top;
  return RunClusterJob(*corpus, *embeddings, {}, record.request, options).partition;
}

LabelUpdate Project::ApplyLabelsLocked(const std::vector<size_t>& docs,
                                       const std::string& label) {
  for (size_t idx : docs) labels_[(*corpus_)[idx].id] = label;
  ++revision_;
  SaveLabels();
  LabelUpdate update;
  update.labeled_count = docs.size();
  update.revision = revision_;
  update.labeled_fraction =
      static_cast<double>(labels_.size()) / static_cast<double>(corpus_->size());
  return update;
}

LabelUpdate Project::BulkLabel(int cluster_id, const std::string& label) {
  const std::string clean = ValidLabel(label);
  std::unique_lock lock(mu_);
  RequireCorpusLocked();
  if (!latest_) throw ConflictError("no partition yet; run a clustering job first");
  if (cluster_id < 0 || static_cast<size_t>(cluster_id) >= latest_->partition.num_clusters()) {
    throw NotFoundError("unknown cluster " + std::to_string(cluster_id));
  }
  std::vector<size_t> docs;
  for (size_t node = 0; node < latest_->partition.size(); ++node) {
    if (latest_->partition.assignment[node] == cluster_id) docs.push_back(latest_->scope[node]);
  }
  return ApplyLabelsLocked(docs, clean);
}

LabelUpdate Project::LabelDocuments(const std::vector<std::string>& doc_ids,
                                    const std::string& label) {
  const std::string clean = ValidLabel(label);
  std::unique_lock lock(mu_);
  RequireCorpusLocked();
  if (doc_ids.empty()) throw ValidationError("doc_ids must not be empty");
  std::set<size_t> docs;
  for (const auto& id : doc_ids) {
    auto idx = corpus_->IndexOf(id);
    if (!idx) throw ValidationError("unknown document id \"" + id + "\"");
    docs.insert(*idx);
  }
  return ApplyLabelsLocked({docs.begin(), docs.end()}, clean);
}

std::map<std::string, std::string> Project::Labels() const {
  std::shared_lock lock(mu_);
  return labels_;
}

uint64_t Project::revision() const {
  std::shared_lock lock(mu_);
  return revision_;
}

AdapterStats Project::RetrainAdapter(const TrainConfig& cfg) {
  cfg.Validate();
  std::lock_guard adapt_lock(adapt_mu_);
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<const EmbeddingMatrix> base;
  std::map<std::string, std::string> labels;
  uint64_t generation = 0;
  {
    std::shared_lock lock(mu_);
    RequireCorpusLocked();
    corpus = corpus_;
    base = base_;
    labels = labels_;
    generation = corpus_generation_;
  }
  const double fraction =
      static_cast<double>(labels.size()) / static_cast<double>(corpus->size());
  if (fraction < cfg.labeled_fraction_threshold) {
    std::ostringstream msg;
    msg << "labeled fraction " << fraction << " is below the threshold "
        << cfg.labeled_fraction_threshold;
    throw ValidationError(msg.str());
  }
  std::vector<std::string> ids;
  ids.reserve(corpus->size());
  for (const auto& d : *corpus) ids.push_back(d.id);
  Adapter adapter = TrainAdapter(*base, ids, labels, cfg);
  auto adapted = std::make_shared<const EmbeddingMatrix>(ApplyAdapter(*base, adapter));

  AdapterStats stats;
  stats.trained_on = adapter.trained_on;
  stats.classes = adapter.classes.size();
  stats.epochs = adapter.loss_history.size();
  stats.input_dim = adapter.input_dim;
  stats.output_dim = adapter.output_dim;
  stats.first_loss = adapter.loss_history.front();
  stats.final_loss = adapter.loss_history.back();

  std::unique_lock lock(mu_);
  if (generation != corpus_generation_) {
    throw ConflictError("corpus was replaced during adapter training");
  }
  adapter_ = std::move(adapter);
  adapted_ = std::move(adapted);
  SaveAdapterArtifacts();
  return stats;
}

std::vector<ClusterSummary> Project::Clusters(size_t max_clusters, size_t n_top) const {
  std::shared_lock lock(mu_);
  if (!latest_) return {};
  SummaryOptions options;
  options.n_top = n_top;
  options.max_clusters = max_clusters;
  return SummarizePartition(*corpus_, latest_->partition, options, latest_->scope);
}

std::vector<ClusterSummary> Project::Subclusters(int cluster_id, size_t max_clusters,
                                                 size_t n_top) const {
  std::shared_lock lock(mu_);
  auto it = children_.find(cluster_id);
  if (it == children_.end()) {
    throw NotFoundError("cluster " + std::to_string(cluster_id) + " has no sub-clusters");
  }
  SummaryOptions options;
  options.n_top = n_top;
  options.max_clusters = max_clusters;
  return SummarizePartition(*corpus_, it->second->partition, options, it->second->scope);
}

DocPage Project::ClusterDocs(int cluster_id, size_t offset, size_t limit) const {
  std::shared_lock lock(mu_);
  if (!latest_) throw ConflictError("no partition yet; run a clustering job first");
  if (cluster_id < 0 || static_cast<size_t>(cluster_id) >= latest_->partition.num_clusters()) {
    throw NotFoundError("unknown cluster " + std::to_string(cluster_id));
  }
  DocPage page;
  for (size_t node = 0; node < latest_->partition.size(); ++node) {
    if (latest_->partition.assignment[node] != cluster_id) continue;
    if (page.total >= offset && page.docs.size() < limit) {
      Document doc = (*corpus_)[latest_->scope[node]];
      auto label = labels_.find(doc.id);
      doc.label = label == labels_.end() ? std::nullopt : std::optional(label->second);
      page.docs.push_back(std::move(doc));
    }
    ++page.total;
  }
  return page;
}

EvalReport Project::Metrics() const {
  std::shared_lock lock(mu_);
  if (!HasAnyLabel(reference_)) throw NotFoundError("project has no reference labels");
  if (!latest_) throw ConflictError("no partition yet; run a clustering job first");
  if (!latest_->eval) {
    throw NotFoundError("reference labels do not cover the clustered documents");
  }
  return *latest_->eval;
}

ProjectStatus Project::Status() const {
  std::shared_lock lock(mu_);
  ProjectStatus s;
  s.n_docs = corpus_ ? corpus_->size() : 0;
  s.labeled_docs = labels_.size();
  s.labeled_fraction =
      s.n_docs == 0 ? 0.0 : static_cast<double>(labels_.size()) / static_cast<double>(s.n_docs);
  s.revision = revision_;
  s.has_adapter = adapter_.has_value();
  s.has_reference_labels = HasAnyLabel(reference_);
  s.latest_job = latest_job_;
  s.n_clusters = latest_ ? latest_->partition.num_clusters() : 0;
  return s;
}

std::shared_ptr<const ClusterOutcome> Project::latest() const {
  std::shared_lock lock(mu_);
  return latest_;
}

std::shared_ptr<const ClusterOutcome> Project::subcluster(int cluster_id) const {
  std::shared_lock lock(mu_);
  auto it = children_.find(cluster_id);
  return it == children_.end() ? nullptr : it->second;
}

std::shared_ptr<const Corpus> Project::corpus() const {
  std::shared_lock lock(mu_);
  return corpus_;
}

std::shared_ptr<const EmbeddingMatrix> Project::active_embeddings() const {
  std::shared_lock lock(mu_);
  return adapted_ ? adapted_ : base_;
}

std::optional<Adapter> Project::adapter() const {
  std::shared_lock lock(mu_);
  return adapter_;
}

// ---------------------------------------------------------------------------
// Persistence. Callers hold mu_.

void Project::SaveMeta() const {
  if (dir_.empty()) return;
  nlohmann::json meta = {{"id", id_}, {"name", name_}, {"config", config_.ToJson()}};
  WriteAtomic(dir_ / "project.json", meta.dump(2) + "\n");
}

void Project::SaveCorpusArtifacts() const {
  if (dir_.empty() || !corpus_) return;
  WriteAtomic(dir_ / "corpus.jsonl", SerializeCorpus(*corpus_));
  WriteAtomic(dir_ / "base.emb", EncodeEmbeddings(*base_));
}

void Project::SaveAdapterArtifacts() const {
  if (dir_.empty()) return;
  if (adapter_) {
    WriteAtomic(dir_ / "adapter.adp", EncodeAdapter(*adapter_));
    WriteAtomic(dir_ / "adapted.emb", EncodeEmbeddings(*adapted_));
  } else {
    fs::remove(dir_ / "adapter.adp");
    fs::remove(dir_ / "adapted.emb");
  }
}

void Project::SaveLabels() const {
  if (dir_.empty()) return;
  nlohmann::json j = {{"revision", revision_}, {"labels", labels_}};
  WriteAtomic(dir_ / "labels.json", j.dump(2) + "\n");
}

void Project::SaveJobs() const {
  if (dir_.empty()) return;
  std::string out;
  for (const auto& r : jobs_) out += r.ToJson().dump() + "\n";
  WriteAtomic(dir_ / "jobs.jsonl", out);
}

void Project::SavePartitions() const {
  if (dir_.empty()) return;
  fs::remove(dir_ / "partition.txt");
  fs::remove(dir_ / "partition.json");
  fs::remove_all(dir_ / "sub");
  if (!latest_) return;
  WriteAtomic(dir_ / "partition.txt", DumpPartition(latest_->partition));
  WriteAtomic(dir_ / "partition.json",
              nlohmann::json{{"job_id", *latest_job_},
                             {"scope", latest_->scope},
                             {"levels", latest_->partition.levels}}
                  .dump() +
                  "\n");
  if (children_.empty()) return;
  fs::create_directories(dir_ / "sub");
  for (const auto& [cid, child] : children_) {
    const std::string stem = std::to_string(cid);
    WriteAtomic(dir_ / "sub" / (stem + ".txt"), DumpPartition(child->partition));
    WriteAtomic(dir_ / "sub" / (stem + ".json"),
                nlohmann::json{{"scope", child->scope}, {"levels", child->partition.levels}}.dump() +
                    "\n");
  }
}

std::shared_ptr<const ClusterOutcome> Project::RebuildOutcome(Partition p,
                                                              std::vector<size_t> scope) const {
  ClusterOutcome out;
  out.scope = std::move(scope);
  out.partition = std::move(p);
  if (out.partition.size() != out.scope.size()) {
    throw FormatError("stored partition does not match its scope");
  }
  SummaryOptions options;
  options.n_top = config_.n_top;
  out.summaries = SummarizePartition(*corpus_, out.partition, options, out.scope);
  LabelColumn scoped;
  bool covered = true;
  for (size_t idx : out.scope) {
    if (idx >= reference_.size() || !reference_[idx]) {
      covered = false;
      break;
    }
    scoped.push_back(reference_[idx]);
  }
  if (covered) out.eval = Evaluate(out.partition, scoped);
  return std::make_shared<const ClusterOutcome>(std::move(out));
}

namespace {

// Louvain level history lives in the JSON sidecar next to the dump.
Partition WithLevels(Partition p, const nlohmann::json& sidecar) {
  if (sidecar.contains("levels")) {
    p.levels = sidecar.at("levels").get<std::vector<std::vector<int>>>();
  }
  for (const auto& level : p.levels) {
    if (level.size() != p.size()) throw FormatError("stored partition levels do not match");
  }
  return p;
}

}  // namespace

std::unique_ptr<Project> Project::Load(const fs::path& dir) {
  const auto meta = nlohmann::json::parse(ReadFileBytes(dir / "project.json"));
  auto project = std::make_unique<Project>(meta.at("id").get<std::string>(),
                                           meta.at("name").get<std::string>(),
                                           ProjectConfig::FromJson(meta.value("config", nlohmann::json::object())),
                                           dir);
  Project& p = *project;
  std::unique_lock lock(p.mu_);
  if (fs::exists(dir / "corpus.jsonl")) {
    p.corpus_ = std::make_shared<const Corpus>(LoadCorpus(dir / "corpus.jsonl"));
    p.reference_ = p.corpus_->Labels();
    EmbeddingMatrix base = fs::exists(dir / "base.emb") ? LoadEmbeddings(dir / "base.emb")
                                                        : EmbeddingMatrix();
    if (base.rows() != p.corpus_->size() || base.cols() != p.config_.embed_dim) {
      base = BaseEmbed(*p.corpus_, p.config_.embed_dim, p.config_.embed_seed, p.config_.threads);
    }
    p.base_ = std::make_shared<const EmbeddingMatrix>(std::move(base));
    p.corpus_generation_ = 1;
  }
  if (p.corpus_ && fs::exists(dir / "adapter.adp")) {
    p.adapter_ = LoadAdapter(dir / "adapter.adp");
    p.adapted_ = std::make_shared<const EmbeddingMatrix>(ApplyAdapter(*p.base_, *p.adapter_));
  }
  if (fs::exists(dir / "labels.json")) {
    const auto j = nlohmann::json::parse(ReadFileBytes(dir / "labels.json"));
    p.revision_ = j.value("revision", uint64_t{0});
    p.labels_ = j.value("labels", std::map<std::string, std::string>{});
  }
  if (fs::exists(dir / "jobs.jsonl")) {
    std::istringstream in(ReadFileBytes(dir / "jobs.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      JobRecord r = JobRecord::FromJson(nlohmann::json::parse(line));
      if (r.status == JobStatus::kQueued || r.status == JobStatus::kRunning) {
        r.status = JobStatus::kFailed;
        r.error = "interrupted by shutdown";
      }
      const uint64_t n = std::stoull(r.id.substr(1));
      p.next_job_ = std::max(p.next_job_, n + 1);
      p.jobs_.push_back(std::move(r));
    }
  }
  if (p.corpus_ && fs::exists(dir / "partition.txt")) {
    const auto j = nlohmann::json::parse(ReadFileBytes(dir / "partition.json"));
    p.latest_ = p.RebuildOutcome(WithLevels(LoadPartition(dir / "partition.txt"), j),
                                 j.at("scope").get<std::vector<size_t>>());
    p.latest_job_ = j.at("job_id").get<std::string>();
    if (fs::exists(dir / "sub")) {
      for (const auto& entry : fs::directory_iterator(dir / "sub")) {
        if (entry.path().extension() != ".txt") continue;
        const int cid = std::stoi(entry.path().stem().string());
        auto scope_path = entry.path();
        scope_path.replace_extension(".json");
        const auto sj = nlohmann::json::parse(ReadFileBytes(scope_path));
        p.children_[cid] = p.RebuildOutcome(WithLevels(LoadPartition(entry.path()), sj),
                                            sj.at("scope").get<std::vector<size_t>>());
      }
    }
  }
  return project;
}

// ---------------------------------------------------------------------------
// Service

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  if (config_.data_dir.empty()) return;
  fs::create_directories(config_.data_dir);
  for (const auto& entry : fs::directory_iterator(config_.data_dir)) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "project.json")) continue;
    std::shared_ptr<Project> p = Project::Load(entry.path());
    const std::string& id = p->id();
    if (id.size() > 1 && id[0] == 'p') {
      next_id_ = std::max<uint64_t>(next_id_, std::stoull(id.substr(1)) + 1);
    }
    projects_.emplace(id, std::move(p));
  }
}

std::string Service::CreateProject(const std::string& name) {
  std::lock_guard lock(mu_);
  const std::string id = "p" + std::to_string(next_id_++);
  fs::path dir;
  if (!config_.data_dir.empty()) dir = config_.data_dir / id;
  projects_.emplace(id, std::make_shared<Project>(id, name, config_.project, dir));
  return id;
}

std::shared_ptr<Project> Service::Get(const std::string& project_id) const {
  std::lock_guard lock(mu_);
  auto it = projects_.find(project_id);
  if (it == projects_.end()) throw NotFoundError("unknown project " + project_id);
  return it->second;
}

std::vector<std::string> Service::ProjectIds() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, p] : projects_) ids.push_back(id);
  return ids;
}

}  // namespace intentmine
