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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace intentmine {

// Lowercased maximal runs of token characters. ASCII letters and digits
// are token characters, and so is every byte of a multi-byte UTF-8
// sequence, so non-ASCII words survive intact (only ASCII is lowercased).
std::vector<std::string> Tokenize(std::string_view text);

struct Document {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::optional<std::string> label;

  bool operator==(const Document&) const = default;
};

// Builds a document with tokens computed from `text`.
Document MakeDocument(std::string id, std::string text,
                      std::optional<std::string> label = std::nullopt);

// Ordered documents with unique ids.
class Corpus {
 public:
  Corpus() = default;
  // Throws ValidationError naming the first duplicate id.
  explicit Corpus(std::vector<Document> docs);

  size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const Document& operator[](size_t i) const { return docs_[i]; }
  const std::vector<Document>& documents() const { return docs_; }
  auto begin() const { return docs_.begin(); }
  auto end() const { return docs_.end(); }

  std::optional<size_t> IndexOf(std::string_view id) const;

  // Per-document file label (absent entries stay nullopt).
  std::vector<std::optional<std::string>> Labels() const;
  bool FullyLabeled() const;

  bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, size_t> index_;
};

// Line-delimited JSON: {"id": "...", "text": "...", "label": "..."?}.
// Blank lines are skipped. Errors name the 1-based line number.
Corpus ParseCorpus(std::string_view content);
Corpus LoadCorpus(const std::filesystem::path& path);
std::string SerializeCorpus(const Corpus& corpus);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);

// Dense row-major float matrix, one row per document.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0f) {}
  EmbeddingMatrix(size_t rows, size_t cols, std::vector<float> values);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  std::span<float> row(size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const float> row(size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  float& at(size_t i, size_t j) { return values_[i * cols_ + j]; }
  float at(size_t i, size_t j) const { return values_[i * cols_ + j]; }
  const std::vector<float>& values() const { return values_; }
  std::vector<float>& values() { return values_; }

  bool AllFinite() const;
  // Copy of the listed rows, in the given order.
  EmbeddingMatrix SelectRows(std::span<const size_t> rows) const;

  // Bitwise equality (distinguishes -0.0 from 0.0).
  bool BitEqual(const EmbeddingMatrix& other) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<float> values_;
};

// "EMB1", u32 N, u32 D, N*D float32, all little-endian.
std::string EncodeEmbeddings(const EmbeddingMatrix& m);
EmbeddingMatrix DecodeEmbeddings(std::string_view bytes);
void SaveEmbeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path);

// Whole-file helpers shared by the binary formats.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

namespace wire {
void PutU32(std::string& out, uint32_t v);
void PutF32(std::string& out, float v);
uint32_t GetU32(std::string_view bytes, size_t offset);
float GetF32(std::string_view bytes, size_t offset);
}  // namespace wire

}  // namespace intentmine
