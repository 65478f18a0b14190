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

// Transcripts of interactions with a single prover: G-consistency, the
// stacked semidefinite program for the optimal prover, and conversions
// between provers and transcripts.

#pragma once

#include <string>
#include <vector>

#include "refgame/linalg.hpp"
#include "refgame/sdp.hpp"

namespace refgame {

/// Matrices A_0..A_r on F (x) G. `kept` lists the factors forming F and
/// `traced` those forming G; together they cover the layout.
struct RoundSequence {
  std::vector<ComplexMatrix> matrices;
  SpaceLayout layout;
  Labels kept;
  Labels traced;

  RoundSequence() = default;
  RoundSequence(std::vector<ComplexMatrix> m, SpaceLayout l, Labels kept_labels, Labels traced_labels);

  /// Number of prover moves r (one less than the number of matrices).
  std::size_t rounds() const { return matrices.size() - 1; }
  Index dim() const { return layout.dim(); }
  Index kept_dim() const { return layout.dim_of(kept); }
  Index traced_dim() const { return layout.dim_of(traced); }
};

/// Snapshots X_1..X_r on F (x) G in the layout order of the round sequence.
struct Transcript {
  std::vector<ComplexMatrix> snapshots;
};

/// Prover unitaries U_1..U_r acting on G (x) H, with G's factors in layout
/// order followed by a private factor H of dimension env_dim.
struct Prover {
  Index env_dim = 1;
  std::vector<ComplexMatrix> unitaries;
};

inline constexpr double kTolConsistency = 1e-7;

/// Hermitian equality <h, X> = rhs on the stacked space.
struct RealConstraint {
  SparseComplexMatrix h;
  double rhs = 0.0;
};

struct ConsistencySystem {
  Index block_dim = 0;
  Index stacked_dim = 0;
  std::vector<RealConstraint> constraints;
};

ConsistencySystem build_consistency_system(const RoundSequence& rounds);

/// max_i prod_{j<i} ||A_j||^2 over i = 0..r.
double feasible_bound(const RoundSequence& rounds);

Transcript trivial_transcript(const RoundSequence& rounds);

/// max_i ||Tr_G X_{i+1} - Tr_G(A_i X_i A_i*)||_F with X_0 the ground state.
double consistency_residual(const RoundSequence& rounds, const Transcript& t);

/// <A_r* A_r, X_r>.
double transcript_value(const RoundSequence& rounds, const Transcript& t);

/// Block-diagonal stacking (X_0, ..., X_r) with X_0 the ground state.
ComplexMatrix stack_transcript(const RoundSequence& rounds, const Transcript& t);

/// The stacked program exactly as written: pins, X_0 entries and the
/// consistency equalities, objective (0, ..., 0, A_r* A_r).
SdpProblem opt_sdp_problem(const RoundSequence& rounds, double epsilon);

struct OptOptions {
  /// Restrict each snapshot to the face of the PSD cone that contains every
  /// consistent transcript before calling the solver.
  bool facial_reduction = true;
};

struct OptResult {
  Transcript transcript;
  double value = 0.0;
  double dual_bound = 0.0;
  double residual = 0.0;
  SdpStatus status = SdpStatus::optimal;
  std::string diagnostics;
};

OptResult solve_opt(const RoundSequence& rounds, double epsilon, const OptOptions& opts = {});

/// Isometries Q_1..Q_r in layout order whose ranges contain the support of
/// every snapshot of every consistent PSD transcript.
std::vector<ComplexMatrix> consistency_faces(const RoundSequence& rounds);

/// Full layout used when simulating a prover: the round layout followed by
/// a factor "H" of the prover's private dimension.
SpaceLayout prover_layout(const RoundSequence& rounds, Index env_dim);

/// Labels the prover acts on: the traced labels in layout order, then "H".
Labels prover_labels(const RoundSequence& rounds);

Transcript prover_to_transcript(const RoundSequence& rounds, const Prover& prover);

/// ||A_r U_r A_{r-1} ... U_1 A_0 |0>||^2.
double prover_value(const RoundSequence& rounds, const Prover& prover);

/// Converse direction via purifications; `tol_match` bounds how far the
/// reduced states may disagree at each step.
Prover transcript_to_prover(const RoundSequence& rounds, const Transcript& t, double tol_match = 1e-6);

/// Optimal acceptance probability for a verifier with unitary rounds
/// V_0..V_r, kept factor V and message factor M, and acceptance projector.
OptResult qip_value(const RoundSequence& verifier, const ComplexMatrix& accept, double epsilon);

}  // namespace refgame
