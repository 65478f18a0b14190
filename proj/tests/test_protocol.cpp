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

#include <doctest.h>

#include <cmath>

#include "refgame/protocol.hpp"
#include "refgame/random.hpp"
#include "refgame/search.hpp"
#include "support.hpp"

using namespace refgame;
using namespace refgame::testing;

namespace {

Prover random_prover(Rng& rng, Index msg, Index env, std::size_t moves) {
  Prover p;
  p.env_dim = env;
  for (std::size_t i = 0; i < moves; ++i) p.unitaries.push_back(rng.haar_unitary(msg * env));
  return p;
}

}  // namespace

TEST_CASE("simulate on elementary verifiers") {
  const SpaceLayout l = qubit_game_layout();
  const ComplexMatrix id = ComplexMatrix::Identity(8, 8);
  Prover y = identity_prover(2, 1, 1), n = identity_prover(2, 1, 1);
  CHECK(simulate(qubit_game(id, id, id), y, n) == 0.0);
  CHECK(std::abs(simulate(qubit_game(id, id, embed_lift(pauli_x(), {"out"}, l)), y, n) - 1.0) < 1e-15);
  CHECK_THROWS_AS(simulate(qubit_game(id, id, id), identity_prover(2, 1, 2), n), PreconditionError);
}

TEST_CASE("simulate matches the transcript pathway") {
  Rng rng(401);
  for (int t = 0; t < 10; ++t) {
    DqipVerifier v = qubit_game(rng.haar_unitary(8), rng.haar_unitary(8), rng.haar_unitary(8));
    Prover y = random_prover(rng, 2, rng.integer(1, 3), 1);
    Prover n = random_prover(rng, 2, rng.integer(1, 3), 1);
    const double p = simulate(v, y, n);
    CHECK(std::abs(p - prover_value(acceptance_sequence(v, n), y)) < 1e-10);
    CHECK(std::abs(1.0 - p - prover_value(rejection_sequence(v, y), n)) < 1e-10);
    RoundSequence acc = acceptance_sequence(v, n);
    Transcript tr = prover_to_transcript(acc, y);
    CHECK(std::abs(transcript_value(acc, tr) - p) < 1e-10);
  }
}

TEST_CASE("mixture prover averages payoffs") {
  Rng rng(402);
  DqipVerifier v = qubit_game(rng.haar_unitary(8), rng.haar_unitary(8), rng.haar_unitary(8));
  Prover a = random_prover(rng, 2, 1, 1), b = random_prover(rng, 2, 3, 1);
  Prover n = random_prover(rng, 2, 2, 1);
  Prover m = mixture_prover({a, b}, {1.0, 3.0});
  CHECK(std::abs(simulate(v, m, n) - (0.25 * simulate(v, a, n) + 0.75 * simulate(v, b, n))) < 1e-12);
  Prover nm = mixture_prover({n, identity_prover(2, 1, 1)}, {0.5, 0.5});
  CHECK(std::abs(simulate(v, a, nm) - 0.5 * (simulate(v, a, n) + simulate(v, a, identity_prover(2, 1, 1)))) < 1e-12);
}

TEST_CASE("close-images verifier") {
  CloseImagesInstance same{MixedCircuit::identity(2), MixedCircuit::identity(2), 0.1};
  DqipVerifier v = build_close_images_verifier(same);
  CHECK_NOTHROW(v.validate());
  CHECK(v.layout.dim() == 64);
  CHECK(v.yes_rounds[0].isIdentity());
  Prover honest = identity_prover(4, 1, 1);
  CHECK(std::abs(qrg_value_given_yes(v, honest, 1e-9).value - 0.5) < 1e-4);

  CloseImagesInstance far{MixedCircuit::constant(2, 2, 0), MixedCircuit::constant(2, 2, 1), 0.1};
  const double d = image_distance(far.q0, far.q1).d;
  CHECK(std::abs(d - 2.0) < 1e-6);
  DqipVerifier w = build_close_images_verifier(far);
  OptResult o = qrg_value_given_yes(w, honest, 1e-9);
  CHECK(o.value >= 0.5 + d / 4.0 - 1e-6);
  // The extracted no-prover wins against every yes-prover.
  Prover n = transcript_to_prover(rejection_sequence(w, honest), o.transcript);
  CHECK(yes_value_given_no(w, n, 1e-9).value < 1e-6);
  CHECK_THROWS_AS(build_close_images_verifier(same, 32), PreconditionError);
}

TEST_CASE("parallel repetition with one copy is value-equivalent") {
  Rng rng(403);
  DqipVerifier v = qubit_game(rng.haar_unitary(8), rng.haar_unitary(8), rng.haar_unitary(8));
  for (Vote vote : {Vote::unanimous_accept, Vote::unanimous_reject}) {
    DqipVerifier r = parallel_repeat(v, 1, vote);
    Prover y = random_prover(rng, 2, 2, 1);
    Prover n = random_prover(rng, 2, 2, 1);
    CHECK(std::abs(qrg_value_given_yes(r, y, 1e-10).value - qrg_value_given_yes(v, y, 1e-10).value) < 1e-8);
    CHECK(std::abs(simulate(r, y, n) - simulate(v, y, n)) < 1e-12);
  }
}

TEST_CASE("parallel repetition with product provers multiplies probabilities") {
  Rng rng(404);
  DqipVerifier v = qubit_game(rng.haar_unitary(8), rng.haar_unitary(8), rng.haar_unitary(8));
  DqipVerifier ra = parallel_repeat(v, 2, Vote::unanimous_accept);
  DqipVerifier rr = parallel_repeat(v, 2, Vote::unanimous_reject);
  CHECK(ra.layout.labels() == Labels{"MY#1", "MY#2", "out#1", "out#2", "vote", "MN#1", "MN#2"});
  for (int t = 0; t < 5; ++t) {
    Prover y = random_prover(rng, 2, 2, 1);
    Prover n = random_prover(rng, 2, 2, 1);
    const double p = simulate(v, y, n);
    CHECK(std::abs(simulate(ra, repeat_prover(y, v, 2), repeat_prover(n, v, 2)) - p * p) < 1e-9);
    CHECK(std::abs(simulate(rr, repeat_prover(y, v, 2), repeat_prover(n, v, 2)) - (1 - (1 - p) * (1 - p))) < 1e-9);
  }
  CHECK_THROWS_AS(parallel_repeat(v, 0, Vote::unanimous_accept), PreconditionError);
  CHECK_THROWS_AS(parallel_repeat(v, 5, Vote::unanimous_accept), PreconditionError);
  CHECK(parse_vote("unanimous_reject") == Vote::unanimous_reject);
  CHECK_THROWS_AS(parse_vote("majority"), PreconditionError);
}

TEST_CASE("parallel repetition against fixed opponents") {
  Rng rng(405);
  DqipVerifier v = pennies_game();
  v.no_rounds[0] = embed_lift(rotation(0.4), {"out"}, qubit_game_layout()) * v.no_rounds[0];
  // Soundness side: a fixed no-prover, best yes-prover.
  Prover n = random_prover(rng, 2, 2, 1);
  const double s = yes_value_given_no(v, n, 1e-9).value;
  DqipVerifier ra = parallel_repeat(v, 2, Vote::unanimous_accept);
  CHECK(yes_value_given_no(ra, repeat_prover(n, v, 2), 1e-9).value <= s * s + 1e-4);
  // Completeness side: a fixed yes-prover, best no-prover.
  Prover y = random_prover(rng, 2, 2, 1);
  const double c = qrg_value_given_yes(v, y, 1e-9).value;
  DqipVerifier rr = parallel_repeat(v, 2, Vote::unanimous_reject);
  CHECK(qrg_value_given_yes(rr, repeat_prover(y, v, 2), 1e-9).value <= c * c + 1e-4);
}

TEST_CASE("search finds the flip strategy and is deterministic") {
  const SpaceLayout l({{"V", 2}, {"M", 2}});
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  // Accept iff the message qubit, swapped into V, was flipped to |1>.
  RoundSequence rs({id, ground_and_projectors(l, "V").accept * embed_lift(swap_qubits(), {"V", "M"}, l)}, l, {"V"},
                   {"M"});
  SearchConfig sc;
  sc.seed = 11;
  SearchResult a = search_prover(rs, sc);
  CHECK(a.value >= 1.0 - 1e-6);
  SearchResult b = search_prover(rs, sc);
  CHECK(a.value == b.value);
  CHECK(a.restart_values == b.restart_values);
  CHECK(a.prover.unitaries[0] == b.prover.unitaries[0]);
}

TEST_CASE("search agrees with the semidefinite value") {
  Rng rng(406);
  for (int t = 0; t < 3; ++t) {
    const SpaceLayout l({{"V", 2}, {"M", 2}});
    RoundSequence rs({rng.haar_unitary(4), rng.haar_unitary(4)}, l, {"V"}, {"M"});
    const ComplexMatrix acc = ground_and_projectors(l, "V").accept;
    const double exact = qip_value(rs, acc, 1e-9).value;
    RoundSequence a = rs;
    a.matrices.back() = acc * rs.matrices.back();
    SearchConfig sc;
    sc.seed = static_cast<std::uint64_t>(t);
    sc.restarts = 5;
    CHECK(std::abs(search_prover(a, sc).value - exact) < 1e-4);
  }
}

TEST_CASE("saddle estimates") {
  SaddleConfig sc;
  sc.sweeps = 3;
  sc.search.restarts = 3;
  for (double q : {0.2, 0.7}) {
    SaddleResult r = saddle_value(fixed_rejection_game(q), sc);
    CHECK(std::abs(r.estimate - q) < 1e-6);
    CHECK(r.trace.size() == 4);
  }
  SaddleResult p = saddle_value(pennies_game(), sc);
  CHECK(p.lower_bound <= p.estimate + 1e-7);
  CHECK(std::abs(p.estimate - 0.5) < 1e-6);
  // The estimate is certified by re-solving at the reported yes-prover.
  CHECK(std::abs(qrg_value_given_yes(pennies_game(), p.yes, 1e-7).value - p.estimate) < 1e-8);
}

TEST_CASE("saddle estimate on the close-images yes-instance") {
  CloseImagesInstance same{MixedCircuit::identity(2), MixedCircuit::identity(2), 0.1};
  SaddleConfig sc;
  sc.sweeps = 1;
  sc.search.restarts = 1;
  sc.search.max_evaluations = 2000;
  SaddleResult r = saddle_value(build_close_images_verifier(same), sc);
  CHECK(std::abs(r.estimate - 0.5) < 1e-3);
}
