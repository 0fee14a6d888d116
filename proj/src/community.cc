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

#include "intentmine/community.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "intentmine/common.h"

namespace intentmine {

namespace {

// Moves with a smaller gain are treated as no gain, which keeps
// floating-point noise from cycling a node between communities.
constexpr double kMinMoveGain = 1e-12;
constexpr double kVerifyTolerance = 1e-9;

}  // namespace

WeightedGraph WeightedGraph::Build(size_t n, std::vector<Edge> off_diagonal,
                                   std::vector<double> diagonal) {
  std::sort(off_diagonal.begin(), off_diagonal.end(),
            [](const Edge& a, const Edge& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  // Merge parallel edges.
  std::vector<Edge> merged;
  merged.reserve(off_diagonal.size());
  for (const auto& e : off_diagonal) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  WeightedGraph g;
  g.self_loops_ = std::move(diagonal);
  g.strength_ = g.self_loops_;
  std::vector<size_t> degree(n, 0);
  for (const auto& e : merged) {
    ++degree[e.i];
    ++degree[e.j];
  }
  g.offsets_.assign(n + 1, 0);
  for (size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.arcs_.resize(g.offsets_[n]);
  std::vector<size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  double twice_m = 0.0;
  for (const auto& e : merged) {
    g.arcs_[fill[e.i]++] = {e.j, e.weight};
    g.arcs_[fill[e.j]++] = {e.i, e.weight};
    g.strength_[e.i] += e.weight;
    g.strength_[e.j] += e.weight;
    twice_m += 2.0 * e.weight;
  }
  for (double d : g.self_loops_) twice_m += d;
  g.total_weight_ = twice_m / 2.0;
  return g;
}

WeightedGraph WeightedGraph::FromEdges(size_t n_nodes, std::span<const Edge> edges) {
  std::vector<Edge> off;
  std::vector<double> diag(n_nodes, 0.0);
  off.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) {
      throw ValidationError("edge (" + std::to_string(e.i) + ", " +
                            std::to_string(e.j) + ") out of range for " +
                            std::to_string(n_nodes) + " nodes");
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge weights must be finite and non-negative");
    }
    if (e.i == e.j) {
      diag[e.i] += 2.0 * e.weight;
    } else {
      off.push_back({std::min(e.i, e.j), std::max(e.i, e.j), e.weight});
    }
  }
  return Build(n_nodes, std::move(off), std::move(diag));
}

WeightedGraph WeightedGraph::Aggregate(std::span<const int> community) const {
  const size_t groups =
      community.empty()
          ? 0
          : static_cast<size_t>(*std::max_element(community.begin(), community.end())) + 1;
  std::vector<double> diag(groups, 0.0);
  std::vector<Edge> off;
  for (size_t i = 0; i < num_nodes(); ++i) {
    const auto ci = static_cast<uint32_t>(community[i]);
    diag[ci] += self_loops_[i];
    for (const auto& arc : neighbors(i)) {
      if (arc.target < i) continue;  // each undirected edge once
      const auto cj = static_cast<uint32_t>(community[arc.target]);
      if (ci == cj) {
        diag[ci] += 2.0 * arc.weight;
      } else {
        off.push_back({std::min(ci, cj), std::max(ci, cj), arc.weight});
      }
    }
  }
  return Build(groups, std::move(off), std::move(diag));
}

double Modularity(const WeightedGraph& g, std::span<const int> assignment) {
  if (assignment.size() != g.num_nodes()) {
    throw ValidationError("partition covers " + std::to_string(assignment.size()) +
                          " nodes, graph has " + std::to_string(g.num_nodes()));
  }
  const double m = g.total_weight();
  if (!(m > 0.0)) throw ValidationError("graph has no edges");

  int max_id = -1;
  for (int c : assignment) {
    if (c < 0) throw ValidationError("negative community id");
    max_id = std::max(max_id, c);
  }
  std::vector<double> inside(max_id + 1, 0.0), total(max_id + 1, 0.0);
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    const int ci = assignment[i];
    total[ci] += g.strength(i);
    inside[ci] += g.self_loop(i);
    for (const auto& arc : g.neighbors(i)) {
      if (assignment[arc.target] == ci) inside[ci] += arc.weight;
    }
  }
  const double two_m = 2.0 * m;
  double q = 0.0;
  for (size_t c = 0; c < inside.size(); ++c) {
    const double frac = total[c] / two_m;
    q += inside[c] / two_m - frac * frac;
  }
  return q;
}

namespace {

// Phase one on one level. Returns true if any node moved.
bool LocalMoves(const WeightedGraph& g, size_t level, Rng& rng,
                const LouvainOptions& options, std::vector<int>& community,
                double& q) {
  const size_t n = g.num_nodes();
  const double m = g.total_weight();
  const double two_m = 2.0 * m;

  std::vector<double> total(n);
  for (size_t i = 0; i < n; ++i) total[i] = g.strength(i);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  rng.Shuffle(order);

  std::vector<double> link(n, 0.0);  // weight from the current node per community
  std::vector<char> seen(n, 0);
  std::vector<int> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t node : order) {
      const int own = community[node];
      const double k_i = g.strength(node);
      touched.clear();
      for (const auto& arc : g.neighbors(node)) {
        const int c = community[arc.target];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += arc.weight;
      }

      total[own] -= k_i;
      const double stay_gain = link[own] - total[own] * k_i / two_m;
      int best = own;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (int c : touched) {
        if (c == own) continue;
        const double gain = link[c] - total[c] * k_i / two_m;
        if (gain > best_gain || (gain == best_gain && c < best)) {
          best_gain = gain;
          best = c;
        }
      }
      const double delta_q = best == own ? 0.0 : (best_gain - stay_gain) / m;
      for (int c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }

      if (best != own && delta_q > kMinMoveGain) {
        total[best] += k_i;
        community[node] = best;
        q += delta_q;
        moved = true;
        any_move = true;
        if (options.verify) {
          const double fresh = Modularity(g, community);
          if (std::abs(fresh - q) > kVerifyTolerance) {
            throw std::logic_error("louvain: tracked modularity " + std::to_string(q) +
                                   " differs from recomputed " + std::to_string(fresh));
          }
        }
        if (options.on_move) {
          options.on_move({level, node, own, best, delta_q, q, &g, community});
        }
      } else {
        total[own] += k_i;
      }
    }
  }
  return any_move;
}

}  // namespace

Partition Louvain(const WeightedGraph& input, const LouvainOptions& options) {
  const size_t n = input.num_nodes();
  if (!(input.total_weight() > 0.0)) throw ValidationError("graph has no edges");

  Partition result;
  result.method = ClusterMethod::kLouvain;
  Rng rng(options.seed);

  std::vector<int> node_of(n);  // original node -> node of the current level
  std::iota(node_of.begin(), node_of.end(), 0);
  WeightedGraph g = input;
  std::vector<int> singletons(n);
  std::iota(singletons.begin(), singletons.end(), 0);
  double q = Modularity(input, singletons);

  for (size_t level = 0;; ++level) {
    std::vector<int> community(g.num_nodes());
    std::iota(community.begin(), community.end(), 0);
    const double q_before = q;
    const bool moved = LocalMoves(g, level, rng, options, community, q);
    if (!moved) {
      if (result.levels.empty()) result.levels.push_back(singletons);
      break;
    }
    community = Densify(community);
    for (auto& v : node_of) v = community[v];
    result.levels.push_back(Densify(node_of));

    const size_t groups = static_cast<size_t>(
        *std::max_element(community.begin(), community.end()) + 1);
    if (options.verify && q < q_before - kVerifyTolerance) {
      throw std::logic_error("louvain: modularity decreased across a level");
    }
    if (options.on_level) options.on_level({level, q_before, q, groups});
    if (q - q_before < options.min_level_gain || groups == 1) break;
    g = g.Aggregate(community);
  }

  result.assignment = result.levels.back();
  return result;
}

}  // namespace intentmine
