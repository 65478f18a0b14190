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

// Quantum channels given by Stinespring unitaries, and the minimum trace
// distance between convex families of states such as channel images.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "refgame/linalg.hpp"

namespace refgame {

/// Channel Phi(rho) = Tr_{F (x) G'}(U (rho (x) |0><0|_{G (x) G'}) U*) with the
/// unitary acting on F (x) G (x) G' in that order.
class MixedCircuit {
 public:
  MixedCircuit(Index in_dim, Index out_dim, Index env_dim, const ComplexMatrix& stinespring);

  Index in_dim() const { return in_; }
  Index out_dim() const { return out_; }
  Index env_dim() const { return env_; }
  const ComplexMatrix& stinespring() const { return u_; }
  /// Layout F, G, G' with labels "F", "G", "G'".
  SpaceLayout layout() const;

  /// Image of an arbitrary (not necessarily positive) input operator.
  ComplexMatrix apply_linear(const ComplexMatrix& x) const;
  /// Image of a density matrix; the input is validated.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// Hilbert-Schmidt adjoint: <E, Phi(X)> = <Phi*(E), X>.
  ComplexMatrix adjoint(const ComplexMatrix& e) const;
  /// Kraus operators A_{f, g'} read off the Stinespring unitary.
  std::vector<ComplexMatrix> kraus() const;

  /// Constant channel onto basis state |k>.
  static MixedCircuit constant(Index in_dim, Index out_dim, Index k);
  /// Channel that moves F into G unchanged (requires in_dim == out_dim).
  static MixedCircuit identity(Index dim);

 private:
  Index in_, out_, env_;
  ComplexMatrix u_;
  ComplexMatrix iso_;  // columns (f, 0, 0) of u_
};

/// A convex set of states parameterised affinely by PSD blocks whose traces
/// sum to one: channel images use one block (the input state), hulls of
/// finitely many states use one 1x1 weight block per member.
struct StateFamily {
  Index state_dim = 0;
  std::vector<Index> blocks;
  std::function<ComplexMatrix(const std::vector<ComplexMatrix>&)> forward;
  std::function<std::vector<ComplexMatrix>(const ComplexMatrix&)> adjoint;
  std::vector<ComplexMatrix> initial;
};

StateFamily image_family(const MixedCircuit& q);
StateFamily hull_family(const std::vector<ComplexMatrix>& members);

struct DistanceResult {
  double d = 0.0;
  std::vector<ComplexMatrix> params0, params1;
  ComplexMatrix state0, state1;
  ComplexMatrix delta;
  /// Dual witness: ||k_dual|| <= 1 and <k_dual, X> >= d (up to solver
  /// accuracy) for every difference X of members of the two sets.
  ComplexMatrix k_dual;
  double gap = 0.0;
  std::string diagnostics;
};

/// Minimum of ||rho0 - rho1||_tr over rho_i in family i, solved as one SDP.
DistanceResult minimum_distance(const StateFamily& a0, const StateFamily& a1, double epsilon = 1e-9);

struct ImageDistanceResult {
  double d = 0.0;
  ComplexMatrix rho0_star, rho1_star;
  ComplexMatrix delta;
  ComplexMatrix k_dual;
};

ImageDistanceResult image_distance(const MixedCircuit& q0, const MixedCircuit& q1);

struct CloseImagesInstance {
  MixedCircuit q0;
  MixedCircuit q1;
  double epsilon = 0.1;
};

enum class PromiseClass { yes, no, violated };
std::string to_string(PromiseClass c);

inline constexpr double kYesDistance = 1e-6;

PromiseClass classify_distance(double d, double epsilon);
PromiseClass classify_promise(const CloseImagesInstance& inst);

}  // namespace refgame
