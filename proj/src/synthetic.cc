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

#include "intentmine/synthetic.h"

#include <algorithm>
#include <set>

#include "intentmine/common.h"

namespace intentmine::synthetic {

namespace {

// Inverse-CDF sampler over Zipf(1) weights.
class ZipfSampler {
 public:
  explicit ZipfSampler(size_t n) : cdf_(n) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      total += 1.0 / static_cast<double>(i + 1);
      cdf_[i] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  size_t Draw(Rng& rng) const {
    const double u = rng.Uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<size_t>(static_cast<size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::string Join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

Blobs GaussianBlobs(size_t blobs, size_t per_blob, size_t dim, double separation,
                    double stddev, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> centers(blobs * dim);
  for (double& c : centers) c = separation * rng.Normal();
  Blobs out{EmbeddingMatrix(blobs * per_blob, dim), {}};
  out.labels.reserve(blobs * per_blob);
  for (size_t b = 0; b < blobs; ++b) {
    for (size_t p = 0; p < per_blob; ++p) {
      const size_t row = b * per_blob + p;
      for (size_t d = 0; d < dim; ++d) {
        out.points.at(row, d) = static_cast<float>(centers[b * dim + d] + stddev * rng.Normal());
      }
      out.labels.push_back(static_cast<int>(b));
    }
  }
  return out;
}

std::vector<std::string> MakeVocabulary(size_t count, Rng& rng,
                                        std::vector<std::string>* taken) {
  static constexpr char kOnsets[] = "bdfgklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  std::set<std::string> used;
  if (taken != nullptr) used.insert(taken->begin(), taken->end());
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w;
    const size_t syllables = 2 + rng.Below(2);
    for (size_t s = 0; s < syllables; ++s) {
      w.push_back(kOnsets[rng.Below(sizeof(kOnsets) - 1)]);
      w.push_back(kVowels[rng.Below(sizeof(kVowels) - 1)]);
    }
    if (used.insert(w).second) words.push_back(w);
  }
  if (taken != nullptr) taken->insert(taken->end(), words.begin(), words.end());
  return words;
}

Corpus PlantedCorpus(const PlantedCorpusConfig& cfg) {
  if (cfg.n_groups == 0 || cfg.min_len == 0 || cfg.max_len < cfg.min_len) {
    throw ValidationError("invalid planted corpus configuration");
  }
  Rng rng(cfg.seed);
  std::vector<std::string> taken;
  const auto shared = MakeVocabulary(cfg.shared_vocab, rng, &taken);
  std::vector<std::vector<std::string>> groups;
  for (size_t g = 0; g < cfg.n_groups; ++g) {
    groups.push_back(MakeVocabulary(cfg.group_vocab, rng, &taken));
  }
  const ZipfSampler group_zipf(cfg.group_vocab);
  const ZipfSampler shared_zipf(std::max<size_t>(1, cfg.shared_vocab));

  std::vector<Document> docs;
  docs.reserve(cfg.n_docs);
  std::vector<std::string> words;
  for (size_t i = 0; i < cfg.n_docs; ++i) {
    const size_t g = i % cfg.n_groups;
    const size_t len = cfg.min_len + rng.Below(cfg.max_len - cfg.min_len + 1);
    words.clear();
    for (size_t t = 0; t < len; ++t) {
      if (shared.empty() || rng.Uniform() < cfg.group_token_prob) {
        words.push_back(groups[g][group_zipf.Draw(rng)]);
      } else {
        words.push_back(shared[shared_zipf.Draw(rng)]);
      }
    }
    docs.push_back(MakeDocument("d" + std::to_string(i), Join(words),
                                "group" + std::to_string(g)));
  }
  return Corpus(std::move(docs));
}

IntentTopicCorpus MakeIntentTopicCorpus(const IntentTopicConfig& cfg) {
  if (cfg.n_topics == 0 || cfg.n_intents == 0) {
    throw ValidationError("invalid intent/topic corpus configuration");
  }
  Rng rng(cfg.seed);
  std::vector<std::string> taken;
  std::vector<std::vector<std::string>> topic_words, intent_words;
  for (size_t t = 0; t < cfg.n_topics; ++t) {
    topic_words.push_back(MakeVocabulary(cfg.topic_vocab, rng, &taken));
  }
  for (size_t t = 0; t < cfg.n_intents; ++t) {
    intent_words.push_back(MakeVocabulary(cfg.intent_vocab, rng, &taken));
  }

  IntentTopicCorpus out;
  std::vector<Document> docs;
  std::vector<std::string> words;
  for (size_t i = 0; i < cfg.n_docs; ++i) {
    const size_t topic = rng.Below(cfg.n_topics);
    const size_t intent = rng.Below(cfg.n_intents);
    words.clear();
    for (size_t t = 0; t < cfg.topic_tokens; ++t) {
      words.push_back(topic_words[topic][rng.Below(cfg.topic_vocab)]);
    }
    // Intent words sit at random positions among the topic words.
    for (size_t t = 0; t < cfg.intent_tokens; ++t) {
      const size_t pos = rng.Below(words.size() + 1);
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos),
                   intent_words[intent][rng.Below(cfg.intent_vocab)]);
    }
    const std::string intent_label = "intent" + std::to_string(intent);
    docs.push_back(MakeDocument("d" + std::to_string(i), Join(words), intent_label));
    out.intents.push_back(intent_label);
    out.topics.push_back("topic" + std::to_string(topic));
  }
  out.corpus = Corpus(std::move(docs));
  return out;
}

LabelColumn ToLabelColumn(const std::vector<int>& labels) {
  LabelColumn out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back("c" + std::to_string(l));
  return out;
}

}  // namespace intentmine::synthetic
