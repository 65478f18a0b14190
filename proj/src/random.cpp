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


#include "refgame/random.hpp"

#include <cmath>

namespace refgame {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

Index Rng::integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine_); }

std::uint64_t Rng::split() { return splitmix64(engine_()); }

ComplexMatrix Rng::ginibre(Index rows, Index cols) {
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
  return g;
}

ComplexMatrix Rng::haar_unitary(Index n) {
  ComplexMatrix g = ginibre(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double m = std::abs(d);
    if (m > 0) q.col(i) *= d / m;
  }
  return q;
}

ComplexVector Rng::unit_vector(Index n) {
  ComplexVector v = ginibre(n, 1).col(0);
  return v / v.norm();
}

ComplexMatrix Rng::hermitian(Index n) {
  ComplexMatrix g = ginibre(n, n);
  return (g + g.adjoint()) / 2.0;
}

ComplexMatrix Rng::density(Index n, Index rank) {
  if (rank <= 0 || rank > n) rank = n;
  ComplexMatrix g = ginibre(n, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

ComplexMatrix Rng::pure_state(Index n) { return outer(unit_vector(n)); }

ComplexMatrix Rng::contraction(Index n) {
  ComplexMatrix g = ginibre(n, n);
  const double s = spectral_norm(g);
  const double target = uniform(0.5, 1.0);
  return s > 0 ? ComplexMatrix(g * (target / s)) : g;
}

}  // namespace refgame
