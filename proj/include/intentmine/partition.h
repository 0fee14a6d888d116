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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace intentmine {

enum class ClusterMethod { kLouvain, kKmeans };

std::string_view MethodName(ClusterMethod m);
ClusterMethod ParseMethod(std::string_view name);

// Total assignment of nodes to dense cluster ids 0..C-1.
struct Partition {
  std::vector<int> assignment;
  ClusterMethod method = ClusterMethod::kLouvain;
  // Louvain only: per-level assignments over the original nodes, finest
  // first. The last level equals `assignment`.
  std::vector<std::vector<int>> levels;

  size_t size() const { return assignment.size(); }
  size_t num_clusters() const;
  // Node indices of each cluster, ascending.
  std::vector<std::vector<size_t>> Members() const;
  std::vector<size_t> ClusterSizes() const;
  std::string Digest() const;

  bool operator==(const Partition&) const = default;
};

// Renumbers labels to 0..C-1 in order of first appearance.
std::vector<int> Densify(const std::vector<int>& labels);

// Throws std::logic_error unless every id in 0..C-1 is used and no id is
// negative.
void CheckDense(const std::vector<int>& assignment);

// Header line "# method=<name> levels=<L> nodes=<N> clusters=<C>", then one
// "node_index cluster_id" line per node.
std::string DumpPartition(const Partition& p);
Partition ParsePartition(std::string_view text);
void SavePartition(const Partition& p, const std::filesystem::path& path);
Partition LoadPartition(const std::filesystem::path& path);

}  // namespace intentmine
