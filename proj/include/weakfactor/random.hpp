// Copyright 2026 The weakfactor Authors. All Rights Reserved.
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

#ifndef WEAKFACTOR_RANDOM_HPP
#define WEAKFACTOR_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "weakfactor/matrix_core.hpp"

namespace weakfactor {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the stream addressed by `keys` under `master`. Distinct key paths
/// give statistically independent streams; the mapping is order-free, so
/// replication r can be generated without generating 0..r-1 first.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(master);
  for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// A single value-passed random stream. Not shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }
  bool coin() { return (engine_() >> 63) != 0; }

  /// n x T matrix of iid N(0, sd^2), filled column by column.
  Mat normal_matrix(Index rows, Index cols, double sd = 1.0) {
    Mat out(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) out(i, j) = sd * normal();
    return out;
  }

  /// Vector of independent +-1 entries.
  Vec signs(Index size) {
    Vec out(size);
    for (Index i = 0; i < size; ++i) out(i) = coin() ? 1.0 : -1.0;
    return out;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace weakfactor

#endif  // WEAKFACTOR_RANDOM_HPP
