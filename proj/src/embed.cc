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

#include "intentmine/embed.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "intentmine/common.h"
#include "intentmine/parallel.h"

namespace intentmine {

namespace {

constexpr char kAdapterMagic[4] = {'A', 'D', 'P', '1'};
constexpr size_t kEmbedChunk = 256;

std::string Shape(size_t r, size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

std::vector<float> TokenFeature(std::string_view token, size_t dim,
                                uint64_t seed) {
  Rng bits(Fnv1a64(token) ^ (seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
  const float mag = static_cast<float>(1.0 / std::sqrt(static_cast<double>(dim)));
  std::vector<float> v(dim);
  uint64_t word = 0;
  for (size_t j = 0; j < dim; ++j) {
    if (j % 64 == 0) word = bits.Next();
    v[j] = (word >> (j % 64)) & 1u ? mag : -mag;
  }
  return v;
}

EmbeddingMatrix BaseEmbed(std::span<const Document> docs, size_t dim,
                          uint64_t seed, size_t threads) {
  if (dim < 2) throw ValidationError("embedding dimension must be >= 2");
  if (docs.empty()) throw ValidationError("cannot embed an empty corpus");

  EmbeddingMatrix out(docs.size(), dim);
  const size_t chunks = (docs.size() + kEmbedChunk - 1) / kEmbedChunk;
  ParallelFor(chunks, threads, [&](size_t chunk) {
    std::vector<double> acc(dim);
    const size_t end = std::min(docs.size(), (chunk + 1) * kEmbedChunk);
    for (size_t i = chunk * kEmbedChunk; i < end; ++i) {
      const auto& tokens = docs[i].tokens;
      if (tokens.empty()) continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const auto& t : tokens) {
        auto f = TokenFeature(t, dim, seed);
        for (size_t j = 0; j < dim; ++j) acc[j] += f[j];
      }
      auto row = out.row(i);
      const double inv = 1.0 / static_cast<double>(tokens.size());
      for (size_t j = 0; j < dim; ++j) row[j] = static_cast<float>(acc[j] * inv);
    }
  });
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be positive");
  }
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(labeled_fraction_threshold > 0.0 && labeled_fraction_threshold <= 1.0)) {
    throw ValidationError("labeled_fraction_threshold must be in (0, 1]");
  }
}

namespace adapter_math {

Params InitParams(size_t input_dim, size_t projection_dim, size_t classes,
                  uint64_t seed) {
  Params p;
  p.projection = Matrix::Zero(input_dim, projection_dim);
  Rng rng(seed);
  const double noise = 0.01 / std::sqrt(static_cast<double>(input_dim));
  for (size_t i = 0; i < input_dim; ++i) {
    for (size_t j = 0; j < projection_dim; ++j) {
      p.projection(i, j) = (i == j ? 1.0 : 0.0) + noise * rng.Normal();
    }
  }
  p.head = Matrix::Zero(projection_dim, classes);
  p.bias = Vector::Zero(classes);
  return p;
}

double Loss(const Params& p, const Matrix& x, std::span<const int> y,
            Params* grad) {
  const auto batch = static_cast<double>(x.rows());
  const Matrix z = x * p.projection;
  Matrix logits = z * p.head;
  logits.rowwise() += p.bias.transpose();

  double loss = 0.0;
  Matrix probs(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double peak = logits.row(r).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      probs(r, c) = std::exp(logits(r, c) - peak);
      sum += probs(r, c);
    }
    probs.row(r) /= sum;
    loss += peak + std::log(sum) - logits(r, y[r]);
  }
  loss /= batch;

  if (grad != nullptr) {
    Matrix g = probs;
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, y[r]) -= 1.0;
    g /= batch;
    grad->head = z.transpose() * g;
    grad->bias = g.colwise().sum().transpose();
    grad->projection = x.transpose() * (g * p.head.transpose());
  }
  return loss;
}

}  // namespace adapter_math

Adapter TrainAdapter(const EmbeddingMatrix& m,
                     std::span<const std::optional<std::string>> row_labels,
                     const TrainConfig& cfg) {
  using adapter_math::Matrix;
  cfg.Validate();
  if (row_labels.size() != m.rows()) {
    throw ValidationError("label vector has " + std::to_string(row_labels.size()) +
                          " entries for " + std::to_string(m.rows()) + " rows");
  }

  std::set<std::string> class_set;
  std::vector<size_t> rows;
  for (size_t i = 0; i < row_labels.size(); ++i) {
    if (row_labels[i]) {
      class_set.insert(*row_labels[i]);
      rows.push_back(i);
    }
  }
  if (class_set.size() < 2) throw ValidationError("need ≥2 labeled classes");

  Adapter a;
  a.classes.assign(class_set.begin(), class_set.end());
  const size_t dim = m.cols();
  const size_t proj = cfg.projection_dim == 0 ? dim : cfg.projection_dim;

  Matrix x(rows.size(), dim);
  std::vector<int> y(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    auto src = m.row(rows[r]);
    for (size_t j = 0; j < dim; ++j) x(r, j) = src[j];
    y[r] = static_cast<int>(
        std::lower_bound(a.classes.begin(), a.classes.end(), *row_labels[rows[r]]) -
        a.classes.begin());
  }

  auto params = adapter_math::InitParams(dim, proj, a.classes.size(), cfg.seed);
  adapter_math::Params grad;
  Rng order_rng(cfg.seed ^ 0x5bd1e995ULL);
  std::vector<size_t> order(rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    order_rng.Shuffle(order);
    double total = 0.0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      Matrix xb(end - start, dim);
      std::vector<int> yb(end - start);
      for (size_t k = start; k < end; ++k) {
        xb.row(k - start) = x.row(order[k]);
        yb[k - start] = y[order[k]];
      }
      const double loss = adapter_math::Loss(params, xb, yb, &grad);
      total += loss * static_cast<double>(end - start);
      params.projection -= cfg.learning_rate * grad.projection;
      params.head -= cfg.learning_rate * grad.head;
      params.bias -= cfg.learning_rate * grad.bias;
    }
    const double mean = total / static_cast<double>(order.size());
    if (!std::isfinite(mean)) {
      throw std::runtime_error("adapter training diverged at epoch " +
                               std::to_string(epoch + 1));
    }
    a.loss_history.push_back(mean);
  }

  a.input_dim = dim;
  a.output_dim = proj;
  a.trained_on = rows.size();
  a.weights.resize(dim * proj);
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = 0; j < proj; ++j) {
      a.weights[i * proj + j] = static_cast<float>(params.projection(i, j));
    }
  }
  return a;
}

Adapter TrainAdapter(const EmbeddingMatrix& m,
                     std::span<const std::string> row_ids,
                     const std::map<std::string, std::string>& labels,
                     const TrainConfig& cfg) {
  if (row_ids.size() != m.rows()) {
    throw ValidationError("row id list does not match embedding rows");
  }
  std::map<std::string_view, size_t> row_of;
  for (size_t i = 0; i < row_ids.size(); ++i) row_of.emplace(row_ids[i], i);
  std::vector<std::optional<std::string>> row_labels(m.rows());
  for (const auto& [id, label] : labels) {
    auto it = row_of.find(id);
    if (it == row_of.end()) {
      throw ValidationError("labeled id \"" + id + "\" has no embedding row");
    }
    row_labels[it->second] = label;
  }
  return TrainAdapter(m, row_labels, cfg);
}

EmbeddingMatrix ApplyAdapter(const EmbeddingMatrix& m, const Adapter& a) {
  if (m.cols() != a.input_dim || a.weights.size() != a.input_dim * a.output_dim) {
    throw ValidationError("cannot apply adapter of shape " +
                          Shape(a.input_dim, a.output_dim) +
                          " to embeddings of shape " + Shape(m.rows(), m.cols()));
  }
  using RowMajorF =
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using RowMajorD =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajorF> in(m.values().data(), m.rows(), m.cols());
  Eigen::Map<const RowMajorF> w(a.weights.data(), a.input_dim, a.output_dim);
  const RowMajorD product = in.cast<double>() * w.cast<double>();

  EmbeddingMatrix out(m.rows(), a.output_dim);
  Eigen::Map<RowMajorF>(out.values().data(), m.rows(), a.output_dim) =
      product.cast<float>();
  return out;
}

std::string EncodeAdapter(const Adapter& a) {
  if (a.weights.size() != a.input_dim * a.output_dim) {
    throw ValidationError("adapter weights do not match its shape");
  }
  std::string out(kAdapterMagic, 4);
  wire::PutU32(out, static_cast<uint32_t>(a.input_dim));
  wire::PutU32(out, static_cast<uint32_t>(a.output_dim));
  for (float v : a.weights) {
    if (!std::isfinite(v)) throw ValidationError("adapter has non-finite weights");
    wire::PutF32(out, v);
  }
  return out;
}

Adapter DecodeAdapter(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != std::string_view(kAdapterMagic, 4)) {
    throw FormatError("not an adapter file (bad magic or header)");
  }
  Adapter a;
  a.input_dim = wire::GetU32(bytes, 4);
  a.output_dim = wire::GetU32(bytes, 8);
  const uint64_t expected = 12 + 4ull * a.input_dim * a.output_dim;
  if (bytes.size() != expected) {
    throw FormatError("adapter file size " + std::to_string(bytes.size()) +
                      " does not match header (expected " +
                      std::to_string(expected) + ")");
  }
  a.weights.resize(a.input_dim * a.output_dim);
  for (size_t i = 0; i < a.weights.size(); ++i) {
    a.weights[i] = wire::GetF32(bytes, 12 + 4 * i);
  }
  return a;
}

void SaveAdapter(const Adapter& a, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeAdapter(a));
}

Adapter LoadAdapter(const std::filesystem::path& path) {
  return DecodeAdapter(ReadFileBytes(path));
}

}  // namespace intentmine
