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

// Modularity and Louvain community detection.
//
// Weights follow the adjacency-matrix convention: A_ij = A_ji = w for an
// edge {i, j}, and a self-loop of weight w contributes A_ii = 2w. Node
// strength is k_i = sum_j A_ij and the total weight is m = (1/2) sum_ij A_ij,
// so Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) is unchanged
// when communities are collapsed into super-nodes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "intentmine/knn.h"
#include "intentmine/partition.h"

namespace intentmine {

class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Undirected edges; parallel edges are merged by summing weights and an
  // edge (i, i, w) is a self-loop. Weights must be finite and >= 0.
  static WeightedGraph FromEdges(size_t n_nodes, std::span<const Edge> edges);
  static WeightedGraph FromKnnGraph(const KnnGraph& g) {
    return FromEdges(g.n_nodes, g.edges);
  }

  size_t num_nodes() const { return self_loops_.size(); }
  // m: sum of edge weights, self-loops counted once.
  double total_weight() const { return total_weight_; }
  double strength(size_t i) const { return strength_[i]; }
  // Diagonal adjacency entry A_ii.
  double self_loop(size_t i) const { return self_loops_[i]; }

  struct Arc {
    uint32_t target;
    double weight;
  };
  // Off-diagonal neighbors of i.
  std::span<const Arc> neighbors(size_t i) const {
    return {arcs_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  // Collapses each community into one node. Community ids must be dense.
  WeightedGraph Aggregate(std::span<const int> community) const;

 private:
  std::vector<size_t> offsets_{0};
  std::vector<Arc> arcs_;
  std::vector<double> self_loops_;
  std::vector<double> strength_;
  double total_weight_ = 0.0;

  static WeightedGraph Build(size_t n, std::vector<Edge> off_diagonal,
                             std::vector<double> diagonal);
};

// Throws ValidationError("graph has no edges") when m = 0 and when the
// assignment does not cover every node.
double Modularity(const WeightedGraph& g, std::span<const int> assignment);
inline double Modularity(const WeightedGraph& g, const Partition& p) {
  return Modularity(g, p.assignment);
}

struct LouvainMove {
  size_t level;
  size_t node;  // node index within the level's graph
  int from;
  int to;
  double delta_q;    // gain formula value
  double tracked_q;  // running modularity after the move
  const WeightedGraph* graph;       // the level's graph
  std::span<const int> community;   // assignment after the move
};

struct LouvainLevel {
  size_t level;
  double q_before;
  double q_after;
  size_t communities;
};

struct LouvainOptions {
  uint64_t seed = 0;
  double min_level_gain = 1e-7;
  // Recompute modularity from scratch after every accepted move and throw
  // std::logic_error if it disagrees with the tracked value by more than
  // 1e-9 or decreases. O(E) per move.
  bool verify = false;
  std::function<void(const LouvainMove&)> on_move;
  std::function<void(const LouvainLevel&)> on_level;
};

// Multi-level Louvain. Nodes are swept in a seeded shuffled order (a fresh
// shuffle per level); each node moves to the neighboring community with the
// largest positive gain, ties to the smallest community id. Levels repeat
// until one improves modularity by less than min_level_gain. Returns the
// coarsest level as the assignment, with every level in `levels`.
Partition Louvain(const WeightedGraph& g, const LouvainOptions& options = {});

}  // namespace intentmine
