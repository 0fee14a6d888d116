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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intentmine/partition.h"
#include "json.hpp"

namespace intentmine {

// Reference class per node; nullopt means the node has no reference label.
using LabelColumn = std::vector<std::optional<std::string>>;

struct EvalReport {
  double purity = 0.0;
  double nmi = 0.0;
  size_t n_pred_clusters = 0;
  size_t n_true_classes = 0;
  std::vector<std::string> classes;  // column order of `contingency`
  std::vector<std::vector<size_t>> contingency;  // [cluster][class]
};

// Cluster x class count table built from integer class ids.
struct Contingency {
  std::vector<std::vector<size_t>> counts;
  std::vector<size_t> cluster_sizes;
  std::vector<size_t> class_sizes;
  size_t total = 0;
};

Contingency BuildContingency(std::span<const int> pred, std::span<const int> truth);

// (1/N) sum_k max_j n_kj.
double Purity(const Contingency& t);
// I(pred; truth) / ((H(pred) + H(truth)) / 2) with natural logs. Both
// sides single-cluster gives 1; exactly one zero entropy gives 0.
double Nmi(const Contingency& t);

// Label-based entry points. Throw ValidationError naming the first node
// without a reference label.
double Purity(const Partition& pred, const LabelColumn& truth);
double Nmi(const Partition& pred, const LabelColumn& truth);
EvalReport Evaluate(const Partition& pred, const LabelColumn& truth);

// Integer ids for labels in lexicographic order.
std::vector<int> EncodeLabels(const LabelColumn& truth, std::vector<std::string>* classes);

nlohmann::json ToJson(const EvalReport& report);

}  // namespace intentmine
