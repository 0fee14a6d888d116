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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intentmine {

// Caller supplied bad input or violated a precondition. Maps to CLI exit
// code 2 and HTTP 400.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A persisted artifact could not be decoded.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Referenced entity (project, job, cluster) does not exist. HTTP 404.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation is valid but the current state does not allow it. HTTP 409.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seeded generator used everywhere randomness is needed. The engine output
// sequence is fixed by the standard; the helpers below avoid the
// implementation-defined std:: distributions so results do not depend on
// the standard library vendor.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t Below(uint64_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    const uint64_t limit = (~uint64_t{0} - n + 1) % n;
    uint64_t x = Next();
    while (x < limit) x = Next();
    return x % n;
  }

  double Normal();

  template <class T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(Below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// 64-bit FNV-1a, used for token hashing and result digests.
uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);

// Digest of a dense assignment vector, rendered as 16 hex digits.
std::string DigestAssignment(const std::vector<int>& assignment);

std::string ToHex64(uint64_t value);

}  // namespace intentmine
