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

#include "intentmine/partition.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "intentmine/common.h"
#include "intentmine/corpus.h"

namespace intentmine {

std::string_view MethodName(ClusterMethod m) {
  return m == ClusterMethod::kLouvain ? "louvain" : "kmeans";
}

ClusterMethod ParseMethod(std::string_view name) {
  if (name == "louvain") return ClusterMethod::kLouvain;
  if (name == "kmeans") return ClusterMethod::kKmeans;
  throw ValidationError("unknown clustering method \"" + std::string(name) + "\"");
}

size_t Partition::num_clusters() const {
  if (assignment.empty()) return 0;
  return static_cast<size_t>(*std::max_element(assignment.begin(), assignment.end())) + 1;
}

std::vector<std::vector<size_t>> Partition::Members() const {
  std::vector<std::vector<size_t>> members(num_clusters());
  for (size_t i = 0; i < assignment.size(); ++i) {
    members[static_cast<size_t>(assignment[i])].push_back(i);
  }
  return members;
}

std::vector<size_t> Partition::ClusterSizes() const {
  std::vector<size_t> sizes(num_clusters(), 0);
  for (int c : assignment) ++sizes[static_cast<size_t>(c)];
  return sizes;
}

std::string Partition::Digest() const { return DigestAssignment(assignment); }

std::vector<int> Densify(const std::vector<int>& labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> out(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

void CheckDense(const std::vector<int>& assignment) {
  std::vector<bool> used;
  for (int c : assignment) {
    if (c < 0) throw std::logic_error("negative cluster id");
    if (static_cast<size_t>(c) >= used.size()) used.resize(c + 1, false);
    used[c] = true;
  }
  for (size_t c = 0; c < used.size(); ++c) {
    if (!used[c]) throw std::logic_error("cluster id " + std::to_string(c) + " is empty");
  }
}

std::string DumpPartition(const Partition& p) {
  std::ostringstream out;
  out << "# method=" << MethodName(p.method) << " levels=" << p.levels.size()
      << " nodes=" << p.assignment.size() << " clusters=" << p.num_clusters()
      << '\n';
  for (size_t i = 0; i < p.assignment.size(); ++i) {
    out << i << ' ' << p.assignment[i] << '\n';
  }
  return out.str();
}

Partition ParsePartition(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw FormatError("partition file must start with a '# method=...' header");
  }
  Partition p;
  size_t nodes = 0;
  bool have_method = false, have_nodes = false;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "method") {
      try {
        p.method = ParseMethod(value);
      } catch (const ValidationError& e) {
        throw FormatError(e.what());
      }
      have_method = true;
    } else if (key == "nodes") {
      nodes = std::stoul(value);
      have_nodes = true;
    }
  }
  if (!have_method || !have_nodes) {
    throw FormatError("partition header lacks method= or nodes=");
  }
  p.assignment.assign(nodes, -1);
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    long long node = -1, cluster = -1;
    if (!(row >> node >> cluster) || node < 0 || cluster < 0 ||
        static_cast<size_t>(node) >= nodes) {
      throw FormatError("partition line " + std::to_string(line_no) + " is malformed");
    }
    p.assignment[node] = static_cast<int>(cluster);
  }
  for (size_t i = 0; i < nodes; ++i) {
    if (p.assignment[i] < 0) {
      throw FormatError("partition has no cluster for node " + std::to_string(i));
    }
  }
  try {
    CheckDense(p.assignment);
  } catch (const std::logic_error& e) {
    throw FormatError(std::string("partition ids are not dense: ") + e.what());
  }
  return p;
}

void SavePartition(const Partition& p, const std::filesystem::path& path) {
  WriteFileBytes(path, DumpPartition(p));
}

Partition LoadPartition(const std::filesystem::path& path) {
  return ParsePartition(ReadFileBytes(path));
}

}  // namespace intentmine
