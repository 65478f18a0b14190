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

// JSON file formats for games, provers, channels and state sets. Complex
// entries are stored as pairs of decimal strings with 17 significant digits,
// so every double survives a save/load cycle bit-exactly.

#pragma once

#include <string>
#include <vector>

#include "refgame/channel.hpp"
#include "refgame/distinguish.hpp"
#include "refgame/game.hpp"
#include "refgame/transcript.hpp"

namespace refgame {

inline constexpr int kFormatVersion = 1;

/// A verifier as stored on disk. Factors are ordered yes-message, private,
/// no-message. A game without no-message factors is a single-prover
/// interaction whose rounds are all "yes" rounds.
struct GameFile {
  SpaceLayout layout;
  Labels yes_message;
  Labels no_message;
  std::string output;
  std::vector<ComplexMatrix> yes_rounds;
  std::vector<ComplexMatrix> no_rounds;

  bool single_prover() const { return no_message.empty(); }
  void validate() const;
  DqipVerifier verifier() const;
  /// Rounds and accept projector for a single-prover game.
  RoundSequence prover_rounds() const;
  ComplexMatrix accept_projector() const;

  static GameFile from(const DqipVerifier& v);
};

std::string format_double(double x);
double parse_double(const std::string& s);

std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

std::string game_to_json(const GameFile& g);
GameFile game_from_json(const std::string& text);
std::string prover_to_json(const Prover& p);
Prover prover_from_json(const std::string& text);
std::string channel_to_json(const MixedCircuit& q);
MixedCircuit channel_from_json(const std::string& text);
std::string sets_to_json(const ConvexStateSet& a0, const ConvexStateSet& a1);
std::pair<ConvexStateSet, ConvexStateSet> sets_from_json(const std::string& text);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

GameFile load_game(const std::string& path);
void save_game(const std::string& path, const GameFile& g);
Prover load_prover(const std::string& path);
MixedCircuit load_channel(const std::string& path);

}  // namespace refgame
