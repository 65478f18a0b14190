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

// Concrete verifiers and exact simulation of a complete interaction.

#pragma once

#include <string>
#include <vector>

#include "refgame/channel.hpp"
#include "refgame/game.hpp"

namespace refgame {

/// Upper limit on the verifier space built by the constructors below.
inline constexpr Index kMaxVerifierDim = 4096;

/// Game in which the yes-prover sends inputs for both channels, the
/// verifier runs the channel picked by a coherent coin and hands its output
/// to the no-prover, who must return a bit equal to the coin to force
/// rejection. Factors: X0, X1 (yes-message); coin, O, E, out (private);
/// B (no-message). The returned bit is the most significant qubit of B.
DqipVerifier build_close_images_verifier(const CloseImagesInstance& inst, Index max_dim = kMaxVerifierDim);

enum class Vote { unanimous_accept, unanimous_reject };
std::string to_string(Vote v);
Vote parse_vote(const std::string& s);

/// k copies run in parallel. Copy j's factors carry the suffix "#j"; the
/// layout lists every yes-message factor, then every private factor, then
/// every no-message factor, copies in order within each group. A fresh
/// output qubit "vote" accepts iff all copies accept (unanimous_accept) or
/// rejects iff all copies reject (unanimous_reject).
DqipVerifier parallel_repeat(const DqipVerifier& v, std::size_t k, Vote vote, Index max_dim = kMaxVerifierDim);

/// Prover for the repeated game that plays `p` independently in every copy.
Prover repeat_prover(const Prover& p, const DqipVerifier& v, std::size_t k);

/// Acceptance probability of the full interaction.
double simulate(const DqipVerifier& v, const Prover& yes, const Prover& no);

/// Prover that plays provers[j] with probability proportional to
/// weights[j], using a private control register prepared coherently in its
/// first move. Its payoff against any opponent is the weighted average.
Prover mixture_prover(const std::vector<Prover>& provers, const std::vector<double>& weights);

/// Prover that applies the identity in every round.
Prover identity_prover(Index message_dim, Index env_dim, std::size_t moves);

}  // namespace refgame
