// Copyright 2026 The refgame Authors
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

#include <cstdint>
#include <random>

#include "refgame/linalg.hpp"

namespace refgame {

/// Seeded generator for random instances and search restarts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  cplx complex_normal();
  Index integer(Index lo, Index hi);  // inclusive range
  std::uint64_t next_u64() { return engine_(); }

  /// Derives an independent child seed; children are reproducible from the
  /// parent seed and the order of calls.
  std::uint64_t split();

  ComplexMatrix ginibre(Index rows, Index cols);
  ComplexMatrix haar_unitary(Index n);
  ComplexVector unit_vector(Index n);
  ComplexMatrix hermitian(Index n);
  /// Density matrix of the given rank (rank <= 0 means full rank).
  ComplexMatrix density(Index n, Index rank = 0);
  ComplexMatrix pure_state(Index n);
  /// Random matrix with spectral norm at most one.
  ComplexMatrix contraction(Index n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace refgame
