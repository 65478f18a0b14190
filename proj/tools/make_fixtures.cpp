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

// Writes the bundled example inputs into a directory.

#include <cmath>
#include <iostream>
#include <string>

#include "refgame/channel.hpp"
#include "refgame/distinguish.hpp"
#include "refgame/io.hpp"
#include "refgame/linalg.hpp"

using namespace refgame;

namespace {

ComplexMatrix swap2() {
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) s(b * 2 + a, a * 2 + b) = 1.0;
  return s;
}

ComplexMatrix cnot() {
  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(3, 2) = c(2, 3) = 1.0;
  return c;
}

// Single-prover game: the verifier swaps the message into its output qubit.
GameFile flip_game() {
  GameFile g;
  g.layout = SpaceLayout({{"M", 2}, {"out", 2}});
  g.yes_message = {"M"};
  g.output = "out";
  g.yes_rounds = {ComplexMatrix::Identity(4, 4), swap2()};
  return g;
}

SpaceLayout short_layout() { return SpaceLayout({{"MY", 2}, {"out", 2}, {"MN", 2}}); }

// Short game where the yes-prover writes the output and the no-prover is ignored.
GameFile handoff_game() {
  GameFile g;
  g.layout = short_layout();
  g.yes_message = {"MY"};
  g.no_message = {"MN"};
  g.output = "out";
  g.yes_rounds = {ComplexMatrix::Identity(8, 8), embed_lift(swap2(), {"MY", "out"}, g.layout)};
  g.no_rounds = {ComplexMatrix::Identity(8, 8)};
  return g;
}

// Output is the parity of the two provers' bits.
GameFile pennies_game() {
  GameFile g = handoff_game();
  g.yes_rounds[1] = embed_lift(cnot(), {"MY", "out"}, g.layout);
  g.no_rounds[0] = embed_lift(cnot(), {"MN", "out"}, g.layout);
  return g;
}

ComplexMatrix qubit_state(double theta, double phi, double r) {
  ComplexMatrix rho(2, 2);
  const double x = r * std::sin(theta) * std::cos(phi), y = r * std::sin(theta) * std::sin(phi),
               z = r * std::cos(theta);
  rho << 0.5 * (1 + z), 0.5 * cplx(x, -y), 0.5 * cplx(x, y), 0.5 * (1 - z);
  return rho;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures DIR\n";
    return 2;
  }
  const std::string dir = std::string(argv[1]) + "/";
  try {
    save_game(dir + "flip.json", flip_game());
    save_game(dir + "handoff.json", handoff_game());
    save_game(dir + "pennies.json", pennies_game());
    write_text(dir + "identity.json", channel_to_json(MixedCircuit::identity(2)) + "\n");
    write_text(dir + "constant0.json", channel_to_json(MixedCircuit::constant(2, 2, 0)) + "\n");
    write_text(dir + "constant1.json", channel_to_json(MixedCircuit::constant(2, 2, 1)) + "\n");
    const auto a0 = ConvexStateSet::hull({qubit_state(0.2, 0.0, 0.9), qubit_state(0.5, 1.0, 0.8)});
    const auto a1 = ConvexStateSet::hull({qubit_state(2.6, 0.3, 0.9), qubit_state(2.9, 2.0, 0.7)});
    write_text(dir + "hulls.json", sets_to_json(a0, a1) + "\n");
    Prover bit;
    bit.env_dim = 1;
    bit.unitaries = {ComplexMatrix::Identity(2, 2)};
    write_text(dir + "keep.json", prover_to_json(bit) + "\n");
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    bit.unitaries = {x};
    write_text(dir + "flip_bit.json", prover_to_json(bit) + "\n");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  return 0;
}
