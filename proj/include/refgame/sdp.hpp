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


// Semidefinite programs over Hermitian matrices:
//
//   maximize <H, X>  subject to  <A_i, X> = alpha_i,  X >= 0,
//
// with a known bound ||X|| <= b on the feasible set. Solutions carry a dual
// bound certifying additive epsilon-optimality.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "refgame/linalg.hpp"

namespace refgame {

using SparseComplexMatrix = Eigen::SparseMatrix<cplx>;

struct SdpConstraint {
  SparseComplexMatrix a;
  cplx alpha = 0.0;
};

struct SdpProblem {
  ComplexMatrix objective;
  std::vector<SdpConstraint> constraints;
  ComplexMatrix x_init;
  double bound_b = 1.0;
  double epsilon = 1e-6;
  /// Optional block-diagonal structure. When present, the caller guarantees
  /// that every feasible X vanishes outside these consecutive diagonal blocks.
  std::vector<Index> block_sizes;

  Index dim() const { return objective.rows(); }
  void add_constraint(SparseComplexMatrix a, cplx alpha) { constraints.push_back({std::move(a), alpha}); }
};

enum class SdpStatus { optimal, max_iter, numerical_failure };

std::string to_string(SdpStatus s);

struct SdpSolution {
  ComplexMatrix x;
  double objective_value = 0.0;
  double dual_bound = 0.0;
  double constraint_residual = 0.0;
  SdpStatus status = SdpStatus::numerical_failure;
  /// One multiplier per input constraint: the real part belongs to the
  /// Hermitian part of A_i, the imaginary part to the anti-Hermitian part,
  /// so that H <= sum_i Re(conj(y_i) A_i) holds up to the reported slack.
  std::vector<cplx> dual;
  int iterations = 0;
  std::string diagnostics;

  double gap() const { return dual_bound - objective_value; }
};

struct SdpOptions {
  int max_iterations = 500;
  double sigma = 0.2;
  double step_fraction = 0.95;
  double redundancy_tol = 1e-10;
  /// Skip validation of x_init (used for internally generated problems whose
  /// starting point is known to be feasible only approximately).
  bool check_x_init = true;
};

double feasibility_tolerance(double epsilon);

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

struct SdpCheckReport {
  bool pass = false;
  double residual = 0.0;
  double psd_margin = 0.0;
  double gap = 0.0;
  std::string message;
};

SdpCheckReport check_solution(const SdpProblem& p, const SdpSolution& s);

/// Largest |<A_i, X> - alpha_i| over all constraints.
double constraint_residual(const SdpProblem& p, const ComplexMatrix& x);

/// Sparse matrix with a single entry 1 at (i, j).
SparseComplexMatrix unit_entry(Index dim, Index i, Index j);
SparseComplexMatrix to_sparse(const ComplexMatrix& m, double drop_tol = 0.0);

}  // namespace refgame
