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

#include "intentmine/metrics.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "intentmine/common.h"

namespace intentmine {

namespace {

double Entropy(const std::vector<size_t>& sizes, double n) {
  double h = 0.0;
  for (size_t s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

void CheckSizes(const Partition& pred, const LabelColumn& truth) {
  if (pred.size() != truth.size()) {
    throw ValidationError("partition has " + std::to_string(pred.size()) +
                          " nodes but " + std::to_string(truth.size()) +
                          " reference labels were given");
  }
}

}  // namespace

Contingency BuildContingency(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw ValidationError("prediction and truth sizes differ");
  }
  Contingency t;
  int max_pred = -1, max_truth = -1;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) throw ValidationError("negative cluster or class id");
    max_pred = std::max(max_pred, pred[i]);
    max_truth = std::max(max_truth, truth[i]);
  }
  t.counts.assign(max_pred + 1, std::vector<size_t>(max_truth + 1, 0));
  t.cluster_sizes.assign(max_pred + 1, 0);
  t.class_sizes.assign(max_truth + 1, 0);
  for (size_t i = 0; i < pred.size(); ++i) {
    ++t.counts[pred[i]][truth[i]];
    ++t.cluster_sizes[pred[i]];
    ++t.class_sizes[truth[i]];
  }
  t.total = pred.size();
  return t;
}

double Purity(const Contingency& t) {
  if (t.total == 0) throw ValidationError("cannot score an empty partition");
  size_t majority = 0;
  for (const auto& row : t.counts) {
    if (!row.empty()) majority += *std::max_element(row.begin(), row.end());
  }
  return static_cast<double>(majority) / static_cast<double>(t.total);
}

double Nmi(const Contingency& t) {
  if (t.total == 0) throw ValidationError("cannot score an empty partition");
  const double n = static_cast<double>(t.total);
  const double h_pred = Entropy(t.cluster_sizes, n);
  const double h_true = Entropy(t.class_sizes, n);
  if (h_pred == 0.0 && h_true == 0.0) return 1.0;
  if (h_pred == 0.0 || h_true == 0.0) return 0.0;

  double mi = 0.0;
  for (size_t k = 0; k < t.counts.size(); ++k) {
    for (size_t j = 0; j < t.counts[k].size(); ++j) {
      const size_t nkj = t.counts[k][j];
      if (nkj == 0) continue;
      const double p = static_cast<double>(nkj) / n;
      mi += p * std::log(n * static_cast<double>(nkj) /
                         (static_cast<double>(t.cluster_sizes[k]) *
                          static_cast<double>(t.class_sizes[j])));
    }
  }
  const double nmi = mi / ((h_pred + h_true) / 2.0);
  return std::clamp(nmi, 0.0, 1.0);
}

std::vector<int> EncodeLabels(const LabelColumn& truth, std::vector<std::string>* classes) {
  std::set<std::string> names;
  for (size_t i = 0; i < truth.size(); ++i) {
    if (!truth[i]) {
      throw ValidationError("node " + std::to_string(i) + " has no reference label");
    }
    names.insert(*truth[i]);
  }
  std::vector<std::string> ordered(names.begin(), names.end());
  std::vector<int> ids(truth.size());
  for (size_t i = 0; i < truth.size(); ++i) {
    ids[i] = static_cast<int>(
        std::lower_bound(ordered.begin(), ordered.end(), *truth[i]) - ordered.begin());
  }
  if (classes != nullptr) *classes = std::move(ordered);
  return ids;
}

double Purity(const Partition& pred, const LabelColumn& truth) {
  CheckSizes(pred, truth);
  return Purity(BuildContingency(pred.assignment, EncodeLabels(truth, nullptr)));
}

double Nmi(const Partition& pred, const LabelColumn& truth) {
  CheckSizes(pred, truth);
  return Nmi(BuildContingency(pred.assignment, EncodeLabels(truth, nullptr)));
}

EvalReport Evaluate(const Partition& pred, const LabelColumn& truth) {
  CheckSizes(pred, truth);
  EvalReport report;
  const auto ids = EncodeLabels(truth, &report.classes);
  const auto t = BuildContingency(pred.assignment, ids);
  report.purity = Purity(t);
  report.nmi = Nmi(t);
  report.n_pred_clusters = t.cluster_sizes.size();
  report.n_true_classes = report.classes.size();
  report.contingency = t.counts;
  for (auto& row : report.contingency) row.resize(report.classes.size(), 0);
  return report;
}

nlohmann::json ToJson(const EvalReport& report) {
  return {{"purity", report.purity},
          {"nmi", report.nmi},
          {"n_pred_clusters", report.n_pred_clusters},
          {"n_true_classes", report.n_true_classes},
          {"classes", report.classes},
          {"contingency", report.contingency}};
}

}  // namespace intentmine
