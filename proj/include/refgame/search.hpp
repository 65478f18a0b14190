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

// Randomised local search over prover unitaries, and an alternating
// best-response estimate of a game's value.

#pragma once

#include <cstdint>
#include <vector>

#include "refgame/game.hpp"
#include "refgame/transcript.hpp"

namespace refgame {

struct SearchConfig {
  std::uint64_t seed = 0;
  int restarts = 20;
  /// Objective evaluations allowed per restart.
  std::size_t max_evaluations = 40000;
  double initial_step = 0.5;
  double min_step = 1e-8;
  /// Private dimension of the prover; 0 picks the message dimension.
  Index env_dim = 0;
};

struct SearchResult {
  Prover prover;
  double value = 0.0;
  std::vector<double> restart_values;
};

/// Maximises prover_value(rounds, .). Each unitary is improved by left
/// multiplication with exp(i t G) for single-pair generators G, accepting
/// strict improvements and halving t after a sweep without one. Restart j
/// draws its stream from the j-th split of the seed.
SearchResult search_prover(const RoundSequence& rounds, const SearchConfig& config);

enum class Role { yes, no };

/// Best response of the given role against a fixed opponent. The value is
/// the role's own payoff: acceptance for the yes-prover, rejection for the
/// no-prover.
SearchResult search_prover(const DqipVerifier& v, Role role, const Prover& opponent, const SearchConfig& config);

struct SaddleConfig {
  int sweeps = 4;
  double epsilon = 1e-7;
  SearchConfig search;
};

struct SaddleStep {
  int sweep = 0;
  /// Worst-case rejection probability of the current yes-prover.
  double worst_rejection = 0.0;
  /// 1 - best yes acceptance against the current no-prover.
  double rejection_floor = 0.0;
};

struct SaddleResult {
  /// Smallest worst-case rejection probability reached by a yes-prover.
  double estimate = 0.0;
  /// Largest guaranteed rejection reached by a no-prover.
  double lower_bound = 0.0;
  Prover yes;
  Prover no;
  std::vector<SaddleStep> trace;
};

/// Alternating best responses against the uniform mixture of the opponent's
/// earlier responses: the no-prover is extracted from the exact rejection
/// problem, the yes-prover is found by search_prover. No convergence is
/// claimed; the estimate and lower bound are certified by exact solves.
SaddleResult saddle_value(const DqipVerifier& v, const SaddleConfig& config);

}  // namespace refgame
