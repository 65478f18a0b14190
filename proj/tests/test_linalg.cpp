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

#include "refgame/linalg.hpp"
#include "refgame/random.hpp"
#include "support.hpp"

using namespace refgame;
using namespace refgame::testing;

TEST_CASE("kron") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs(kron(i2, i2) - ComplexMatrix::Identity(4, 4)) == 0.0);

  ComplexMatrix p = kron(ket_bra(2, 0, 0), ket_bra(2, 1, 1));
  CHECK(max_abs(p - ket_bra(4, 1, 1)) == 0.0);

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix a = rng.ginibre(3, 3), b = rng.ginibre(3, 3);
    ComplexMatrix k = kron(a, b);
    CHECK(max_abs(k - kron_reference(a, b)) < 1e-14);
    CHECK(std::abs(k.trace() - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("partial trace") {
  Rng rng(12);
  SpaceLayout l({{"F", 2}, {"G", 2}});
  for (int t = 0; t < 10; ++t) {
    ComplexMatrix a = rng.ginibre(2, 2), b = rng.ginibre(2, 2);
    CHECK(max_abs(partial_trace(kron(a, b), l, {"G"}) - b.trace() * a) < 1e-13);
    CHECK(max_abs(partial_trace(kron(a, b), l, {"F"}) - a.trace() * b) < 1e-13);
  }

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(partial_trace(outer(bell), l, {"G"}) - ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  SUBCASE("three factors against a written-out oracle") {
    SpaceLayout l3({{"A", 2}, {"B", 3}, {"C", 2}});
    for (int t = 0; t < 10; ++t) {
      ComplexMatrix rho = rng.density(12);
      CHECK(std::abs(partial_trace(rho, l3, {"B"}).trace() - 1.0) < 1e-13);
      CHECK(max_abs(partial_trace(rho, l3, {"C"}) - trace_second(rho, 6, 2)) < 1e-14);
      CHECK(max_abs(partial_trace(rho, l3, {"A"}) - trace_first(rho, 2, 6)) < 1e-14);
      // Linearity.
      ComplexMatrix sigma = rng.density(12);
      const cplx c(0.3, -1.2);
      CHECK(max_abs(partial_trace(rho + c * sigma, l3, {"A", "C"}) -
                    partial_trace(rho, l3, {"A", "C"}) - c * partial_trace(sigma, l3, {"A", "C"})) < 1e-13);
    }
  }

  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(3, 3), l, {"G"}), PreconditionError);
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(4, 4), l, {"Q"}), PreconditionError);
}

TEST_CASE("embed_lift") {
  SpaceLayout l({{"A", 2}, {"B", 2}});
  CHECK(max_abs(embed_lift(ComplexMatrix::Identity(2, 2), {"A"}, l) - ComplexMatrix::Identity(4, 4)) == 0.0);
  ComplexVector v = embed_lift(pauli_x(), {"B"}, l) * basis_vector(4, 0);
  CHECK(max_abs(v - basis_vector(4, 1)) == 0.0);

  Rng rng(13);
  SpaceLayout l3({{"A", 2}, {"B", 3}, {"C", 2}});
  for (int t = 0; t < 10; ++t) {
    ComplexMatrix a = rng.ginibre(4, 4), b = rng.ginibre(4, 4);
    ComplexMatrix la = embed_lift(a, {"C", "A"}, l3), lb = embed_lift(b, {"C", "A"}, l3);
    CHECK(max_abs(la * lb - embed_lift(a * b, {"C", "A"}, l3)) < 1e-12);
    ComplexMatrix c = rng.ginibre(2, 2);
    CHECK(max_abs(embed_lift(c, {"A"}, l3) - kron(c, ComplexMatrix::Identity(6, 6))) < 1e-15);
    CHECK(max_abs(embed_lift(c, {"C"}, l3) - kron(ComplexMatrix::Identity(6, 6), c)) < 1e-15);
    ComplexVector w = rng.unit_vector(12);
    CHECK((apply_lifted(a, {"C", "A"}, l3, w) - la * w).norm() < 1e-13);
  }
  CHECK_THROWS_AS(embed_lift(ComplexMatrix::Identity(3, 3), {"A"}, l), PreconditionError);
}

TEST_CASE("permute_factors matches kron order") {
  Rng rng(14);
  SpaceLayout l({{"A", 2}, {"B", 3}});
  ComplexMatrix a = rng.ginibre(2, 2), b = rng.ginibre(3, 3);
  CHECK(max_abs(permute_factors(kron(a, b), l, {"B", "A"}) - kron(b, a)) < 1e-15);
}

TEST_CASE("norms") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  Norms nd = norms(d);
  CHECK(nd.trace_norm == doctest::Approx(7.0));
  CHECK(nd.spectral_norm == doctest::Approx(4.0));

  Rng rng(15);
  Norms nu = norms(rng.haar_unitary(5));
  CHECK(nu.trace_norm == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(nu.spectral_norm == doctest::Approx(1.0).epsilon(1e-12));

  // Duality with the spectral norm; the witness is the unitary polar factor.
  for (int t = 0; t < 100; ++t) {
    ComplexMatrix a = rng.ginibre(4, 4);
    const double tn = trace_norm(a);
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix witness = svd.matrixU() * svd.matrixV().adjoint();
    CHECK(std::abs(std::abs(hs_inner(witness, a)) - tn) < 1e-10);
    for (int k = 0; k < 100; ++k) {
      ComplexMatrix b = rng.ginibre(4, 4);
      b /= spectral_norm(b);
      CHECK(std::abs(hs_inner(b, a)) <= tn + 1e-10);
    }
  }
}

TEST_CASE("hs_inner") {
  Rng rng(16);
  ComplexMatrix rho = rng.density(4);
  CHECK(std::abs(hs_inner(ComplexMatrix::Identity(4, 4), rho) - 1.0) < 1e-14);
  ComplexMatrix b = rng.ginibre(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(hs_inner(ket_bra(3, i, j), b) - b(i, j)) < 1e-15);
  CHECK(hs_inner(b, b).real() == doctest::Approx(b.squaredNorm()));
  CHECK_THROWS_AS(hs_inner(b, rho), PreconditionError);
}

TEST_CASE("fidelity") {
  Rng rng(17);
  ComplexMatrix rho = rng.density(3);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(fidelity(ket_bra(2, 0, 0), ket_bra(2, 1, 1)) == doctest::Approx(0.0));
  for (int t = 0; t < 200; ++t) {
    const Index n = rng.integer(2, 8);
    ComplexMatrix a = rng.density(n), b = rng.density(n, rng.integer(1, n));
    const double f = fidelity(a, b);
    const double d = trace_norm(a - b);
    CHECK(1.0 - d / 2.0 <= f + 1e-10);
    CHECK(f <= std::sqrt(std::max(0.0, 1.0 - d * d / 4.0)) + 1e-10);
  }
  CHECK_THROWS_AS(fidelity(-ket_bra(2, 0, 0), rho.topLeftCorner(2, 2)), PreconditionError);
}

TEST_CASE("jordan_decompose") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -3.0;
  auto j = jordan_decompose(d);
  CHECK(max_abs(j.plus - 2.0 * ket_bra(2, 0, 0)) < 1e-15);
  CHECK(max_abs(j.minus - 3.0 * ket_bra(2, 1, 1)) < 1e-15);

  Rng rng(18);
  ComplexMatrix p = rng.density(4);
  auto jp = jordan_decompose(p);
  CHECK(max_abs(jp.plus - p) < 1e-12);
  CHECK(max_abs(jp.minus) < 1e-12);

  for (int t = 0; t < 50; ++t) {
    ComplexMatrix k = rng.hermitian(5);
    auto jk = jordan_decompose(k);
    CHECK(max_abs(jk.plus - jk.minus - k) < 1e-9);
    CHECK(max_abs(jk.plus * jk.minus) < 1e-9);
    CHECK(min_eigenvalue(jk.plus) >= -1e-12);
    CHECK(min_eigenvalue(jk.minus) >= -1e-12);
    CHECK(std::abs(spectral_norm(jk.plus + jk.minus) - spectral_norm(k)) < 1e-10);
  }
  CHECK_THROWS_AS(jordan_decompose(rng.ginibre(3, 3)), PreconditionError);
}

TEST_CASE("purify") {
  Rng rng(19);
  SpaceLayout l({{"S", 2}, {"E", 2}});
  ComplexMatrix mixed = ComplexMatrix::Identity(2, 2) / 2.0;
  ComplexVector v = purify(mixed, 2);
  CHECK(max_abs(partial_trace(outer(v), l, {"E"}) - mixed) < 1e-14);

  ComplexVector u = rng.unit_vector(3);
  ComplexVector w = purify(outer(u), 1);
  CHECK(std::abs(std::abs(u.dot(w)) - 1.0) < 1e-12);

  for (int t = 0; t < 20; ++t) {
    ComplexMatrix x = rng.density(4, 3) * 2.5;
    SpaceLayout lx({{"S", 4}, {"E", 3}});
    CHECK(max_abs(partial_trace(outer(purify(x, 3)), lx, {"E"}) - x) < 1e-8);
  }
  CHECK_THROWS_AS(purify(rng.density(4, 3), 2), PreconditionError);
}

TEST_CASE("connecting_unitary") {
  Rng rng(20);
  SpaceLayout l({{"S", 2}, {"E", 2}});
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);

  ComplexMatrix u0 = connecting_unitary(bell, bell, l, {"E"});
  CHECK((apply_lifted(u0, {"E"}, l, bell) - bell).norm() < 1e-12);

  ComplexVector flipped = apply_lifted(pauli_x(), {"E"}, l, bell);
  ComplexMatrix u1 = connecting_unitary(bell, flipped, l, {"E"});
  CHECK(is_unitary(u1));
  CHECK((apply_lifted(u1, {"E"}, l, bell) - flipped).norm() <= 1e-10);

  for (int t = 0; t < 30; ++t) {
    ComplexMatrix rho = rng.density(3, 2);
    SpaceLayout lr({{"S", 3}, {"E", 4}});
    ComplexVector p = purify(rho, 4);
    ComplexVector q = apply_lifted(rng.haar_unitary(4), {"E"}, lr, purify(rho, 4));
    ComplexMatrix c = connecting_unitary(p, q, lr, {"E"});
    CHECK(is_unitary(c));
    CHECK((apply_lifted(c, {"E"}, lr, p) - q).norm() <= 1e-8);
  }

  ComplexVector other = kron(basis_vector(2, 1), basis_vector(2, 0));
  CHECK_THROWS_AS(connecting_unitary(bell, other, l, {"E"}), PreconditionError);
}

TEST_CASE("real embedding") {
  CHECK(real_embed(ComplexMatrix::Identity(2, 2)).squaredNorm() == doctest::Approx(2.0));
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    ComplexMatrix a = rng.hermitian(4), b = rng.hermitian(4);
    CHECK(max_abs(real_unembed(real_embed(a), 4) - a) <= 1e-14);
    CHECK(std::abs(real_embed(a).dot(real_embed(b)) - hs_inner(a, b).real()) < 1e-12);
  }
  CHECK_THROWS_AS(real_unembed(RealVector::Zero(5), 2), PreconditionError);
}

TEST_CASE("standard measurement") {
  SpaceLayout l({{"M", 3}, {"out", 2}, {"W", 2}});
  auto m = ground_and_projectors(l, "out");
  const ComplexMatrix id = ComplexMatrix::Identity(12, 12);
  CHECK(max_abs(m.accept + m.reject - id) == 0.0);
  CHECK(std::abs(hs_inner(m.accept, outer(m.ground))) == 0.0);
  CHECK(max_abs(m.accept * m.accept - m.accept) < 1e-12);
  CHECK(max_abs(m.reject * m.reject - m.reject) < 1e-12);
  CHECK_THROWS_AS(ground_and_projectors(l, "M"), PreconditionError);
}

TEST_CASE("round_to_bits") {
  Rng rng(22);
  ComplexMatrix a = rng.ginibre(4, 4);
  ComplexMatrix d52 = round_to_bits(a, 52) - a;
  CHECK(d52.real().cwiseAbs().maxCoeff() <= std::ldexp(1.0, -53));
  CHECK(d52.imag().cwiseAbs().maxCoeff() <= std::ldexp(1.0, -53));
  ComplexMatrix exact = round_to_bits(a, 20);
  CHECK(max_abs(round_to_bits(exact, 52) - exact) == 0.0);
  for (int t = 0; t < 50; ++t) {
    ComplexMatrix b = rng.ginibre(6, 6);
    ComplexMatrix r = round_to_bits(b, 8);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j) {
        CHECK(std::abs((r(i, j) - b(i, j)).real()) <= std::ldexp(1.0, -9));
        CHECK(std::abs((r(i, j) - b(i, j)).imag()) <= std::ldexp(1.0, -9));
      }
    CHECK(spectral_norm(r - b) < 6.0 * std::ldexp(1.0, -8));
  }
}

TEST_CASE("product roundoff bound") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const Index m = rng.integer(1, 6);
    const int bits = (t % 2) ? 8 : 16;
    const Index n = rng.integer(2, 4);
    const double delta = static_cast<double>(n) * std::ldexp(1.0, -bits);
    ComplexMatrix prod = ComplexMatrix::Identity(n, n), approx = prod;
    for (Index k = 0; k < m; ++k) {
      ComplexMatrix a = rng.contraction(n);
      prod = a * prod;
      approx = round_to_bits(a, bits) * approx;
    }
    const double na = spectral_norm(prod), nb = spectral_norm(approx);
    CHECK(std::abs(na - nb) < static_cast<double>(m) * delta);
    CHECK(std::abs(na * na - nb * nb) < 2.0 * static_cast<double>(m) * delta);
  }
}

TEST_CASE("validated wrappers") {
  Rng rng(24);
  CHECK_THROWS_AS(HermitianMatrix(rng.ginibre(2, 2)), PreconditionError);
  CHECK_NOTHROW(DensityMatrix(rng.density(3)));
  CHECK_THROWS_AS(DensityMatrix(2.0 * rng.density(3)), PreconditionError);
  CHECK_NOTHROW(UnitaryMatrix(rng.haar_unitary(4)));
  CHECK_THROWS_AS(UnitaryMatrix(rng.ginibre(2, 2)), PreconditionError);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(HermitianMatrix{bad}, PreconditionError);
  CHECK_THROWS_AS(SpaceLayout({{"A", 2}, {"A", 3}}), PreconditionError);
}
