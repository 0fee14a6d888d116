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

#include "intentmine/corpus.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "intentmine/common.h"
#include "json.hpp"

namespace intentmine {

namespace {

bool IsTokenByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

constexpr char kEmbeddingMagic[4] = {'E', 'M', 'B', '1'};

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (IsTokenByte(c)) {
      if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
      current.push_back(static_cast<char>(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Document MakeDocument(std::string id, std::string text,
                      std::optional<std::string> label) {
  Document doc;
  doc.id = std::move(id);
  doc.text = std::move(text);
  doc.tokens = Tokenize(doc.text);
  doc.label = std::move(label);
  return doc;
}

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  index_.reserve(docs_.size());
  for (size_t i = 0; i < docs_.size(); ++i) {
    if (!index_.emplace(docs_[i].id, i).second) {
      throw ValidationError("duplicate document id \"" + docs_[i].id + "\"");
    }
  }
}

std::optional<size_t> Corpus::IndexOf(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::optional<std::string>> Corpus::Labels() const {
  std::vector<std::optional<std::string>> labels;
  labels.reserve(docs_.size());
  for (const auto& d : docs_) labels.push_back(d.label);
  return labels;
}

bool Corpus::FullyLabeled() const {
  if (docs_.empty()) return false;
  for (const auto& d : docs_) {
    if (!d.label) return false;
  }
  return true;
}

Corpus ParseCorpus(std::string_view content) {
  std::vector<Document> docs;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(where + "invalid JSON (" + e.what() + ")");
    }
    if (!record.is_object()) {
      throw ValidationError(where + "expected a JSON object");
    }
    auto id = record.find("id");
    if (id == record.end() || !id->is_string()) {
      throw ValidationError(where + "missing string field \"id\"");
    }
    auto text = record.find("text");
    if (text == record.end() || !text->is_string()) {
      throw ValidationError(where + "missing string field \"text\"");
    }
    std::optional<std::string> label;
    if (auto l = record.find("label"); l != record.end() && !l->is_null()) {
      if (!l->is_string()) {
        throw ValidationError(where + "field \"label\" must be a string");
      }
      label = l->get<std::string>();
    }
    docs.push_back(MakeDocument(id->get<std::string>(),
                                text->get<std::string>(), std::move(label)));
  }
  return Corpus(std::move(docs));
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFileBytes(path));
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus) {
    nlohmann::json record = {{"id", doc.id}, {"text", doc.text}};
    if (doc.label) record["label"] = *doc.label;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeCorpus(corpus));
}

EmbeddingMatrix::EmbeddingMatrix(size_t rows, size_t cols,
                                 std::vector<float> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ValidationError("embedding values size " +
                          std::to_string(values_.size()) + " != " +
                          std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

bool EmbeddingMatrix::AllFinite() const {
  for (float v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

EmbeddingMatrix EmbeddingMatrix::SelectRows(std::span<const size_t> rows) const {
  EmbeddingMatrix out(rows.size(), cols_);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= rows_) {
      throw ValidationError("row " + std::to_string(rows[i]) +
                            " out of range for " + std::to_string(rows_) +
                            " rows");
    }
    auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

bool EmbeddingMatrix::BitEqual(const EmbeddingMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         (values_.empty() ||
          std::memcmp(values_.data(), other.values_.data(),
                      values_.size() * sizeof(float)) == 0);
}

namespace wire {

void PutU32(std::string& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void PutF32(std::string& out, float v) { PutU32(out, std::bit_cast<uint32_t>(v)); }

uint32_t GetU32(std::string_view bytes, size_t offset) {
  uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[offset + b]))
         << (8 * b);
  }
  return v;
}

float GetF32(std::string_view bytes, size_t offset) {
  return std::bit_cast<float>(GetU32(bytes, offset));
}

}  // namespace wire

std::string EncodeEmbeddings(const EmbeddingMatrix& m) {
  if (!m.AllFinite()) {
    throw ValidationError("embedding matrix contains non-finite values");
  }
  std::string out(kEmbeddingMagic, 4);
  out.reserve(12 + 4 * m.values().size());
  wire::PutU32(out, static_cast<uint32_t>(m.rows()));
  wire::PutU32(out, static_cast<uint32_t>(m.cols()));
  for (float v : m.values()) wire::PutF32(out, v);
  return out;
}

EmbeddingMatrix DecodeEmbeddings(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != std::string_view(kEmbeddingMagic, 4)) {
    throw FormatError("not an embedding file (bad magic or header)");
  }
  const uint64_t rows = wire::GetU32(bytes, 4);
  const uint64_t cols = wire::GetU32(bytes, 8);
  const uint64_t expected = 12 + 4 * rows * cols;
  if (bytes.size() != expected) {
    throw FormatError("embedding file size " + std::to_string(bytes.size()) +
                      " does not match header (expected " +
                      std::to_string(expected) + ")");
  }
  std::vector<float> values(rows * cols);
  for (size_t i = 0; i < values.size(); ++i) {
    values[i] = wire::GetF32(bytes, 12 + 4 * i);
  }
  return EmbeddingMatrix(rows, cols, std::move(values));
}

void SaveEmbeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeEmbeddings(m));
}

EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path) {
  return DecodeEmbeddings(ReadFileBytes(path));
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace intentmine
