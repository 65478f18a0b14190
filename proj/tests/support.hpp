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


// Shared helpers and independent reference computations for the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "refgame/game.hpp"
#include "refgame/linalg.hpp"
#include "refgame/random.hpp"

namespace refgame::testing {

inline double max_abs(const ComplexMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

inline ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix y = ComplexMatrix::Zero(2, 2);
  y(0, 1) = cplx(0, -1);
  y(1, 0) = cplx(0, 1);
  return y;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

inline ComplexMatrix ket_bra(Index dim, Index i, Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

// Qubit state with Bloch vector (sin t cos p, sin t sin p, cos t) scaled by r.
inline ComplexMatrix bloch_state(double theta, double phi, double r = 1.0) {
  ComplexMatrix rho = ComplexMatrix::Identity(2, 2);
  rho += r * (std::sin(theta) * std::cos(phi) * pauli_x() + std::sin(theta) * std::sin(phi) * pauli_y() +
              std::cos(theta) * pauli_z());
  return rho / 2.0;
}

// Kronecker product written out index by index.
inline ComplexMatrix kron_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Tr_B of an operator on A (x) B.
inline ComplexMatrix trace_second(const ComplexMatrix& m, Index da, Index db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

// Tr_A of an operator on A (x) B.
inline ComplexMatrix trace_first(const ComplexMatrix& m, Index da, Index db) {
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Index i = 0; i < db; ++i)
    for (Index j = 0; j < db; ++j)
      for (Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on the real
// symmetric form [[Re, -Im], [Im, Re]] (each eigenvalue appears twice).
inline std::vector<double> jacobi_eigenvalues(const ComplexMatrix& h) {
  const Index n = h.rows();
  const Index N = 2 * n;
  std::vector<double> a(static_cast<std::size_t>(N * N));
  auto at = [&](Index i, Index j) -> double& { return a[static_cast<std::size_t>(i * N + j)]; };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const cplx z = (h(i, j) + std::conj(h(j, i))) / 2.0;
      at(i, j) = z.real();
      at(i, j + n) = -z.imag();
      at(i + n, j) = z.imag();
      at(i + n, j + n) = z.real();
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < N; ++i)
      for (Index j = i + 1; j < N; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (Index p = 0; p < N; ++p)
      for (Index q = p + 1; q < N; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < N; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < N; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev;
  for (Index i = 0; i < N; ++i) ev.push_back(at(i, i));
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double lambda_max_reference(const ComplexMatrix& h) { return jacobi_eigenvalues(h).back(); }

// Permutation matrix sending basis state i to f(i).
template <class F>
ComplexMatrix permutation_matrix(Index n, F f) {
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(f(i), i) = 1.0;
  return p;
}

// CNOT on (control, target) qubits.
inline ComplexMatrix cnot() {
  return permutation_matrix(4, [](Index i) { return (i & 2) ? (i ^ 1) : i; });
}

// SWAP of two qubits.
inline ComplexMatrix swap_qubits() {
  return permutation_matrix(4, [](Index i) { return ((i & 1) << 1) | (i >> 1); });
}

// Real rotation sending |1> to cos(t)|1> - sin(t)|0>, with |<0|R|0>|^2 = cos^2 t.
inline ComplexMatrix rotation(double t) {
  ComplexMatrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

// exp(i t H) for a random Hermitian H of unit spectral norm.
inline ComplexMatrix near_identity(Rng& rng, Index n, double t) {
  ComplexMatrix h = rng.hermitian(n);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  ComplexVector ph(n);
  for (Index i = 0; i < n; ++i) ph(i) = std::polar(1.0, t * es.eigenvalues()(i) / scale);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Qubit factors MY, out, MN.
inline SpaceLayout qubit_game_layout() { return SpaceLayout({{"MY", 2}, {"out", 2}, {"MN", 2}}); }

inline DqipVerifier qubit_game(const ComplexMatrix& v0, const ComplexMatrix& v1, const ComplexMatrix& w1) {
  DqipVerifier v;
  v.layout = qubit_game_layout();
  v.yes_message = {"MY"};
  v.no_message = {"MN"};
  v.output = "out";
  v.yes_rounds = {v0, v1};
  v.no_rounds = {w1};
  return v;
}

// Rejects with probability q whatever the provers do.
inline DqipVerifier fixed_rejection_game(double q) {
  const SpaceLayout l = qubit_game_layout();
  const ComplexMatrix id = ComplexMatrix::Identity(8, 8);
  return qubit_game(embed_lift(rotation(std::acos(std::sqrt(q))), {"out"}, l), id, id);
}

// out = y xor n: value 1/2, reached only by mixed strategies.
inline DqipVerifier pennies_game() {
  const SpaceLayout l = qubit_game_layout();
  return qubit_game(ComplexMatrix::Identity(8, 8), embed_lift(cnot(), {"MY", "out"}, l),
                    embed_lift(cnot(), {"MN", "out"}, l));
}

// Synthetic short games whose value sits near 0 (yes-prover sets the output,
// the no-prover only perturbs it) or near 1 (the no-prover sets it).
inline DqipVerifier synthetic_game(Rng& rng, bool yes_side, double noise) {
  const SpaceLayout l = qubit_game_layout();
  const ComplexMatrix v0 = rng.haar_unitary(8);
  if (yes_side) {
    ComplexMatrix v1 = embed_lift(swap_qubits(), {"MY", "out"}, l) * near_identity(rng, 8, noise);
    return qubit_game(v0, v1, near_identity(rng, 8, noise));
  }
  ComplexMatrix w1 = embed_lift(swap_qubits(), {"MN", "out"}, l) * near_identity(rng, 8, noise);
  return qubit_game(v0, near_identity(rng, 8, noise), w1);
}

}  // namespace refgame::testing
