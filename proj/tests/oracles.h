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


// Reference implementations used only by tests. Each one is written from
// the textbook definition with no shared code from the library, so a bug
// in one side shows up as a disagreement.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double Dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return s;
}

// Full sort of every other point by (distance, index).
inline std::vector<std::vector<size_t>> NaiveKnn(const Points& x, size_t k) {
  std::vector<std::vector<size_t>> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    std::vector<std::pair<double, size_t>> all;
    for (size_t j = 0; j < x.size(); ++j) {
      if (j != i) all.push_back({Dist2(x[i], x[j]), j});
    }
    std::sort(all.begin(), all.end());
    for (size_t r = 0; r < k; ++r) out[i].push_back(all[r].second);
  }
  return out;
}

// Dense symmetric adjacency; A[i][i] holds twice the self-loop weight.
using Adjacency = std::vector<std::vector<double>>;

// Q = 1/(2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
inline double Modularity(const Adjacency& a, const std::vector<int>& c) {
  const size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  double q = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (c[i] == c[j]) q += a[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Calls fn on every set partition of n elements as a restricted growth
// string (labels 0.. in order of first appearance).
inline void ForEachPartition(size_t n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> a(n, 0);
  std::function<void(size_t, int)> rec = [&](size_t i, int max_label) {
    if (i == n) {
      fn(a);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      a[i] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return;
  a[0] = 0;
  rec(1, 0);
}

inline double BestModularity(const Adjacency& a) {
  double best = -1.0;
  ForEachPartition(a.size(), [&](const std::vector<int>& c) {
    best = std::max(best, Modularity(a, c));
  });
  return best;
}

// Purity and arithmetic-mean NMI straight from pair counts.
template <class P, class T>
std::pair<double, double> PurityNmi(const std::vector<P>& pred, const std::vector<T>& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<P, double> np;
  std::map<T, double> nt;
  std::map<std::pair<P, T>, double> joint;
  for (size_t i = 0; i < pred.size(); ++i) {
    np[pred[i]] += 1;
    nt[truth[i]] += 1;
    joint[{pred[i], truth[i]}] += 1;
  }
  std::map<P, double> majority;
  for (const auto& [key, count] : joint) {
    majority[key.first] = std::max(majority[key.first], count);
  }
  double purity = 0.0;
  for (const auto& [p, count] : majority) purity += count;
  purity /= n;

  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    mi += count / n * std::log(n * count / (np[key.first] * nt[key.second]));
  }
  auto entropy = [n](const auto& sizes) {
    double h = 0.0;
    for (const auto& [label, count] : sizes) h -= count / n * std::log(count / n);
    return h;
  };
  const double hp = entropy(np);
  const double ht = entropy(nt);
  double nmi;
  if (np.size() == 1 && nt.size() == 1) {
    nmi = 1.0;
  } else if (hp == 0.0 || ht == 0.0) {
    nmi = 0.0;
  } else {
    nmi = mi / ((hp + ht) / 2.0);
  }
  return {purity, nmi};
}

}  // namespace oracle
