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

// Double quantum interactive proofs: the no-prover value against a fixed
// yes-prover, the separation oracle for the set of winning yes-transcripts,
// the central-cut ellipsoid method and the resulting decision procedure.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "refgame/linalg.hpp"
#include "refgame/transcript.hpp"

namespace refgame {

/// Verifier that talks to the yes-prover for r1 rounds and then to the
/// no-prover for r2 rounds. Every layout factor is a yes-message factor, a
/// no-message factor or private to the verifier; the output qubit is private.
struct DqipVerifier {
  SpaceLayout layout;
  Labels yes_message;
  Labels no_message;
  std::string output;
  std::vector<ComplexMatrix> yes_rounds;  // V_0..V_{r1}
  std::vector<ComplexMatrix> no_rounds;   // W_1..W_{r2}

  std::size_t r1() const { return yes_rounds.size() - 1; }
  std::size_t r2() const { return no_rounds.size(); }
  Labels private_labels() const;
  /// Throws PreconditionError on any violated invariant.
  void validate() const;
  /// V_0..V_{r1} with the yes-message factors traced.
  RoundSequence yes_sequence() const;
};

/// Projector onto the given output value (0 rejects, 1 accepts) of `output`
/// lifted to `layout`.
ComplexMatrix output_projector(const SpaceLayout& layout, const std::string& output, int value);

/// Rounds in which the no-prover, facing the fixed yes-prover, tries to
/// reach the reject outcome; prover_value on it is the rejection probability.
RoundSequence rejection_sequence(const DqipVerifier& v, const Prover& yes);

/// Rounds in which the yes-prover, facing the fixed no-prover, tries to
/// reach the accept outcome.
RoundSequence acceptance_sequence(const DqipVerifier& v, const Prover& no);

/// Largest rejection probability any no-prover can force once the yes-prover
/// has played; the rounds before the no-prover's first move are collapsed
/// into a single matrix.
OptResult qrg_value_given_yes(const DqipVerifier& v, const Prover& yes, double epsilon);

/// Largest acceptance probability any yes-prover can reach against `no`.
OptResult yes_value_given_no(const DqipVerifier& v, const Prover& no, double epsilon);

/// The no-prover's rejection problem when the verifier's qubits after the
/// yes-prover's last move are in the state prepared by `c` from |0>. `c`
/// acts on the layout followed by the yes-prover's private factor.
RoundSequence no_prover_sequence(const DqipVerifier& v, const ComplexMatrix& c, Index yes_env);

struct WinSetParams {
  DqipVerifier verifier;
  double c = 0.0;
};

struct SepOutput {
  enum class Kind { hyperplane, near_feasible };
  Kind kind = Kind::near_feasible;
  /// Stacked block-diagonal hyperplane with unit Frobenius norm.
  ComplexMatrix h;
  /// Amount by which the hyperplane separates x from Win(V, c).
  double margin = 0.0;
  /// Inner no-prover value, NaN when no inner solve was run.
  double objective = 0.0;
  double epsilon = 0.0;
  bool psd_cut = false;
};

struct SepOptions {
  /// Bits of precision for the circuit approximations; 0 keeps them exact.
  int precision_bits = 0;
};

/// Separation oracle for Win(V, c). `x` is the stacked (X_0, ..., X_{r1})
/// and must satisfy the consistency equalities.
SepOutput sep_oracle(const WinSetParams& w, const ComplexMatrix& x, double epsilon, const SepOptions& opts = {});

struct EllipsoidAnswer {
  bool near_feasible = false;
  RealVector g;
  /// Depth of the cut in the direction g. Used by deep cuts, and to declare
  /// the set empty when g vanishes.
  double margin = 0.0;
  std::string label;
  double objective = 0.0;
};

struct EllipsoidRecord {
  std::size_t iteration = 0;
  std::string kind;
  double objective = 0.0;
  double log_volume = 0.0;
};

struct EllipsoidOptions {
  bool deep_cut = false;
  /// Overrides the iteration cap when nonzero.
  std::size_t max_iterations = 0;
};

struct EllipsoidResult {
  bool feasible = false;
  RealVector point;
  std::size_t iterations = 0;
  std::vector<EllipsoidRecord> log;
};

using EllipsoidOracle = std::function<EllipsoidAnswer(const RealVector&)>;

/// ceil(2 n (n + 1) ln(R / r)).
std::size_t ellipsoid_iteration_cap(Index n, double radius_big, double radius_small);

EllipsoidResult ellipsoid_feasibility(Index n, double radius_big, double radius_small, const EllipsoidOracle& oracle,
                                      const EllipsoidOptions& opts = {});

/// Orthonormal real coordinates for the consistent yes-transcripts: every
/// coordinate vector y maps to a stacked transcript satisfying the
/// consistency equalities, and every consistent PSD transcript has
/// coordinates.
class TranscriptCoordinates {
 public:
  explicit TranscriptCoordinates(const RoundSequence& rounds);

  Index dim() const { return null_basis_.cols(); }
  Index stacked_dim() const { return stacked_dim_; }
  ComplexMatrix stacked(const RealVector& y) const;
  /// Gradient in coordinates of X -> <h, X> for a stacked Hermitian h.
  RealVector gradient(const ComplexMatrix& h) const;
  /// Coordinates of a stacked transcript (orthogonal projection).
  RealVector coordinates(const ComplexMatrix& x) const;

 private:
  RealVector face_vector(const ComplexMatrix& x) const;

  RoundSequence rounds_;
  std::vector<ComplexMatrix> faces_;
  std::vector<Index> offsets_;
  Index stacked_dim_ = 0;
  RealVector particular_;
  RealMatrix null_basis_;
};

struct DecideOptions {
  bool deep_cut = false;
  int precision_bits = 0;
  std::size_t max_iterations = 0;
};

struct DecideResult {
  bool accept = false;
  double epsilon = 0.0;
  double c_prime = 0.0;
  Index coordinates = 0;
  double radius_big = 0.0;
  double radius_small = 0.0;
  std::size_t iteration_cap = 0;
  EllipsoidResult ellipsoid;
  /// Witness transcript when accepted.
  ComplexMatrix witness;
};

DecideResult decide_dqip(const DqipVerifier& v, double c, double s, const DecideOptions& opts = {});

}  // namespace refgame
