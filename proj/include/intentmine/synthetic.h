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

// Generators for planted-structure data with known ground truth.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "intentmine/common.h"
#include "intentmine/corpus.h"
#include "intentmine/metrics.h"

namespace intentmine::synthetic {

struct Blobs {
  EmbeddingMatrix points;
  std::vector<int> labels;
};

// `blobs` isotropic Gaussian clusters of `per_blob` points. Centers are
// drawn from N(0, separation^2 I); points add N(0, stddev^2 I).
Blobs GaussianBlobs(size_t blobs, size_t per_blob, size_t dim, double separation,
                    double stddev, uint64_t seed);

// Distinct pronounceable lowercase words.
std::vector<std::string> MakeVocabulary(size_t count, Rng& rng,
                                        std::vector<std::string>* taken = nullptr);

struct PlantedCorpusConfig {
  size_t n_docs = 1400;
  size_t n_groups = 20;
  size_t group_vocab = 40;
  size_t shared_vocab = 300;
  size_t min_len = 25;
  size_t max_len = 60;
  double group_token_prob = 0.5;  // else a shared word
  uint64_t seed = 0;
};

// Document i belongs to group i % n_groups; its label is "group<g>".
// Group and shared words are drawn with Zipf(1) weights.
Corpus PlantedCorpus(const PlantedCorpusConfig& cfg);

struct IntentTopicConfig {
  size_t n_docs = 2000;
  size_t n_topics = 4;
  size_t n_intents = 4;
  size_t topic_vocab = 30;
  size_t intent_vocab = 30;
  size_t topic_tokens = 18;   // per document
  size_t intent_tokens = 6;   // per document
  uint64_t seed = 0;
};

struct IntentTopicCorpus {
  Corpus corpus;  // file label = intent
  LabelColumn intents;
  LabelColumn topics;
};

// Each document mixes words from one topic vocabulary and one intent
// vocabulary; topic and intent are drawn independently. Topic words
// outnumber intent words, so untuned representations group by topic.
IntentTopicCorpus MakeIntentTopicCorpus(const IntentTopicConfig& cfg);

// Column of int labels as strings ("c<id>").
LabelColumn ToLabelColumn(const std::vector<int>& labels);

}  // namespace intentmine::synthetic
