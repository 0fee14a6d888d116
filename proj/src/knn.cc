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

#include "intentmine/knn.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "intentmine/common.h"
#include "intentmine/parallel.h"

namespace intentmine {

namespace {

using RowMajorD =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Relative bound on the error of the norm expansion against the direct sum.
// The true error is O(D * eps) relative to |x|^2 + |y|^2; this leaves
// several orders of magnitude of slack for any practical D.
constexpr double kScreenSlack = 1e-9;

struct Candidate {
  double approx;
  uint32_t index;
};

// Keeps the candidates whose approximate distance is within `margin` of the
// k-th smallest approximate distance.
void Prune(std::vector<Candidate>& cands, size_t k, double margin,
           double& threshold) {
  auto kth = cands.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(cands.begin(), kth, cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.approx < b.approx;
                   });
  threshold = kth->approx + margin;
  std::erase_if(cands, [&](const Candidate& c) { return c.approx > threshold; });
}

}  // namespace

double SquaredDistance(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t d = 0; d < a.size(); ++d) {
    const double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
    sum += diff * diff;
  }
  return sum;
}

KnnResult KnnSearch(const EmbeddingMatrix& m, size_t k,
                    const KnnOptions& options) {
  const size_t n = m.rows();
  if (k == 0) throw ValidationError("k must be >= 1");
  if (k >= n) throw ValidationError("k must be < N");
  if (options.query_block == 0 || options.corpus_block == 0) {
    throw ValidationError("block sizes must be positive");
  }

  const size_t dim = m.cols();
  RowMajorD x(n, dim);
  for (size_t i = 0; i < n; ++i) {
    auto r = m.row(i);
    for (size_t d = 0; d < dim; ++d) x(i, d) = r[d];
  }
  const Eigen::VectorXd norms = x.rowwise().squaredNorm();
  const double max_norm = n == 0 ? 0.0 : norms.maxCoeff();

  KnnResult result;
  result.n = n;
  result.k = k;
  result.neighbors.resize(n * k);

  const size_t qb = options.query_block;
  const size_t cb = options.corpus_block;
  const size_t query_blocks = (n + qb - 1) / qb;

  ParallelFor(query_blocks, options.threads, [&](size_t block) {
    const size_t q0 = block * qb;
    const size_t q1 = std::min(n, q0 + qb);
    const size_t rows = q1 - q0;

    std::vector<std::vector<Candidate>> cands(rows);
    std::vector<double> threshold(rows, std::numeric_limits<double>::infinity());
    std::vector<double> margin(rows);
    for (size_t r = 0; r < rows; ++r) {
      margin[r] = 2.0 * kScreenSlack * (norms[q0 + r] + max_norm) +
                  std::numeric_limits<double>::denorm_min();
      cands[r].reserve(4 * k + 16);
    }

    RowMajorD dots;
    for (size_t c0 = 0; c0 < n; c0 += cb) {
      const size_t c1 = std::min(n, c0 + cb);
      dots.noalias() =
          x.middleRows(q0, rows) * x.middleRows(c0, c1 - c0).transpose();
      for (size_t r = 0; r < rows; ++r) {
        const size_t qi = q0 + r;
        auto& list = cands[r];
        for (size_t c = c0; c < c1; ++c) {
          if (c == qi) continue;
          double d = norms[qi] + norms[c] - 2.0 * dots(r, c - c0);
          if (d < 0.0) d = 0.0;
          if (d <= threshold[r]) list.push_back({d, static_cast<uint32_t>(c)});
        }
        if (list.size() >= 4 * k + 16) Prune(list, k, margin[r], threshold[r]);
      }
    }

    std::vector<Neighbor> exact;
    for (size_t r = 0; r < rows; ++r) {
      const size_t qi = q0 + r;
      auto& list = cands[r];
      Prune(list, k, margin[r], threshold[r]);
      exact.clear();
      for (const auto& c : list) {
        exact.push_back({c.index, SquaredDistance(m.row(qi), m.row(c.index))});
      }
      std::partial_sort(exact.begin(), exact.begin() + static_cast<std::ptrdiff_t>(k),
                        exact.end(), [](const Neighbor& a, const Neighbor& b) {
                          return a.distance != b.distance ? a.distance < b.distance
                                                          : a.index < b.index;
                        });
      std::copy_n(exact.begin(), k, result.neighbors.begin() + qi * k);
    }
  });
  return result;
}

KnnGraph BuildKnnGraph(const KnnResult& knn) {
  KnnGraph g;
  g.n_nodes = knn.n;
  g.k_used = knn.k;
  g.edges.reserve(knn.n * knn.k);
  for (size_t i = 0; i < knn.n; ++i) {
    for (const auto& nb : knn.of(i)) {
      const auto a = static_cast<uint32_t>(i);
      g.edges.push_back({std::min(a, nb.index), std::max(a, nb.index), 1.0});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                            [](const Edge& a, const Edge& b) {
                              return a.i == b.i && a.j == b.j;
                            }),
                g.edges.end());
  return g;
}

KnnGraph BuildKnnGraph(const EmbeddingMatrix& m, size_t k,
                       const KnnOptions& options) {
  return BuildKnnGraph(KnnSearch(m, k, options));
}

std::string DumpGraph(const KnnGraph& g) {
  std::string out;
  char buf[32];
  for (const auto& e : g.edges) {
    out += std::to_string(e.i);
    out += ' ';
    out += std::to_string(e.j);
    out += ' ';
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), e.weight);
    out.append(buf, end);
    out += '\n';
  }
  return out;
}

void SaveGraph(const KnnGraph& g, const std::filesystem::path& path) {
  WriteFileBytes(path, DumpGraph(g));
}

}  // namespace intentmine
