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

// Document representations.
//
// The base representation is frozen: every token hashes to a fixed
// pseudo-random vector with entries +-1/sqrt(D), and a document is the mean
// of its token vectors. The adapter is a trainable D x D' projection W
// learned jointly with a linear softmax head (V, b) on the analyst's labeled
// rows:
//
//   z = x W,   logits = z V + b,   L = -(1/|B|) sum_B log softmax(logits)[y]
//
// Only W is kept after training; the head is thrown away and adapted
// embeddings are simply m W.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "intentmine/corpus.h"

namespace intentmine {

// Fixed feature vector of one token (D entries, each +-1/sqrt(D)).
std::vector<float> TokenFeature(std::string_view token, size_t dim,
                                uint64_t seed);

// Mean-pooled hashed token features. Documents without tokens map to the
// zero row. Output does not depend on `threads`.
EmbeddingMatrix BaseEmbed(std::span<const Document> docs, size_t dim,
                          uint64_t seed, size_t threads = 1);
inline EmbeddingMatrix BaseEmbed(const Corpus& corpus, size_t dim,
                                 uint64_t seed, size_t threads = 1) {
  return BaseEmbed(std::span<const Document>(corpus.documents()), dim, seed,
                   threads);
}

struct TrainConfig {
  size_t projection_dim = 0;  // 0 means "same as input"
  double learning_rate = 0.5;
  size_t epochs = 200;
  size_t batch_size = 16;
  uint64_t seed = 0;
  double labeled_fraction_threshold = 0.025;

  // Throws ValidationError on eta <= 0, epochs == 0, batch_size == 0 or a
  // threshold outside (0, 1].
  void Validate() const;
};

struct Adapter {
  size_t input_dim = 0;
  size_t output_dim = 0;
  std::vector<float> weights;  // input_dim x output_dim, row-major
  size_t trained_on = 0;
  std::vector<double> loss_history;  // mean cross-entropy per epoch
  std::vector<std::string> classes;  // head class order (lexicographic)

  double final_loss() const {
    return loss_history.empty() ? 0.0 : loss_history.back();
  }
};

// Trains on the rows whose label is set. Needs at least two distinct labels.
Adapter TrainAdapter(const EmbeddingMatrix& m,
                     std::span<const std::optional<std::string>> row_labels,
                     const TrainConfig& cfg);

// Same, with labels keyed by document id; row_ids[i] names row i. A labeled
// id without a row is an error naming that id.
Adapter TrainAdapter(const EmbeddingMatrix& m,
                     std::span<const std::string> row_ids,
                     const std::map<std::string, std::string>& labels,
                     const TrainConfig& cfg);

// Returns m W.
EmbeddingMatrix ApplyAdapter(const EmbeddingMatrix& m, const Adapter& a);

// "ADP1", u32 D, u32 D', D*D' float32 W, all little-endian. Training
// metadata is not part of the file.
std::string EncodeAdapter(const Adapter& a);
Adapter DecodeAdapter(std::string_view bytes);
void SaveAdapter(const Adapter& a, const std::filesystem::path& path);
Adapter LoadAdapter(const std::filesystem::path& path);

// The training objective in double precision, exposed for gradient checks.
namespace adapter_math {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1>;

struct Params {
  Matrix projection;  // W: D x D'
  Matrix head;        // V: D' x C
  Vector bias;        // b: C
};

// W = truncated identity + seeded noise of scale 0.01/sqrt(D); V, b zero.
Params InitParams(size_t input_dim, size_t projection_dim, size_t classes,
                  uint64_t seed);

// Mean cross-entropy over the rows of x (B x D) with class indices y.
// Fills *grad with dL/dW, dL/dV, dL/db when grad is non-null.
double Loss(const Params& p, const Matrix& x, std::span<const int> y,
            Params* grad = nullptr);

}  // namespace adapter_math

}  // namespace intentmine
