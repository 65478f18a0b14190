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

#include "refgame/distinguish.hpp"

#include <cmath>

namespace refgame {
namespace {

using detail::require;

constexpr double kHelstromKernel = 1e-13;

}  // namespace

Povm::Povm(std::vector<PovmElement> elements) : elements_(std::move(elements)) {
  require(!elements_.empty(), "a POVM needs at least one element");
  const Index n = elements_.front().e.rows();
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (auto& el : elements_) {
    require(el.e.rows() == n && el.e.cols() == n, "POVM elements must share one dimension");
    el.e = HermitianMatrix(el.e).matrix();
    require(min_eigenvalue(el.e) >= -kTolPsd, "POVM element '" + el.outcome + "' is not positive semidefinite");
    total += el.e;
  }
  require((total - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9, "POVM elements do not sum to I");
}

const ComplexMatrix& Povm::element(const std::string& outcome) const {
  for (const auto& el : elements_)
    if (el.outcome == outcome) return el.e;
  detail::fail_precondition("POVM has no outcome '" + outcome + "'");
}

Index ConvexStateSet::dim() const {
  if (is_image()) return std::get<MixedCircuit>(kind).out_dim();
  return std::get<std::vector<ComplexMatrix>>(kind).front().rows();
}

StateFamily ConvexStateSet::family() const {
  if (is_image()) return image_family(std::get<MixedCircuit>(kind));
  return hull_family(std::get<std::vector<ComplexMatrix>>(kind));
}

SeparatingPovm binary_povm_from_k(const ComplexMatrix& k, double d) {
  const Index n = k.rows();
  JordanParts j = jordan_decompose(k);
  const ComplexMatrix rest = (ComplexMatrix::Identity(n, n) - j.plus - j.minus) / 2.0;
  ComplexMatrix e0 = j.plus + rest;
  ComplexMatrix e1 = j.minus + rest;
  return {Povm({{"0", e0}, {"1", e1}}), e0 - e1, d};
}

SeparatingPovm helstrom_povm(const ComplexMatrix& rho0, const ComplexMatrix& rho1) {
  require(rho0.rows() == rho1.rows(), "states must share one dimension");
  DensityMatrix r0(rho0), r1(rho1);
  const ComplexMatrix delta = r0.matrix() - r1.matrix();
  auto e = eigh(delta);
  const Index n = delta.rows();
  RealVector sign = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (e.values(i) > kHelstromKernel) sign(i) = 1.0;
    if (e.values(i) < -kHelstromKernel) sign(i) = -1.0;
  }
  ComplexMatrix k = e.vectors * sign.asDiagonal() * e.vectors.adjoint();
  return binary_povm_from_k(k, trace_norm(delta));
}

SetPovmResult set_povm_detailed(const ConvexStateSet& a0, const ConvexStateSet& a1) {
  require(a0.dim() == a1.dim(), "state sets must share one dimension");
  SetPovmResult out{binary_povm_from_k(ComplexMatrix::Zero(a0.dim(), a0.dim()), 0.0), {}};
  out.distance = minimum_distance(a0.family(), a1.family());
  const double d = out.distance.d;
  const Index n = a0.dim();
  if (d <= kDegenerateDistance) {
    out.sep = binary_povm_from_k(ComplexMatrix::Zero(n, n), d);
    return out;
  }
  // Sign of the optimal difference on its range; on the numerical kernel of
  // the difference, the compression of the dual witness.
  auto e = eigh(out.distance.delta);
  const double thr = 1e-6 * std::max(1.0, e.values.cwiseAbs().maxCoeff());
  ComplexMatrix range_part = ComplexMatrix::Zero(n, n);
  ComplexMatrix kernel = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const ComplexMatrix proj = e.vectors.col(i) * e.vectors.col(i).adjoint();
    if (e.values(i) > thr) range_part += proj;
    else if (e.values(i) < -thr) range_part -= proj;
    else kernel += proj;
  }
  ComplexMatrix kk = kernel * out.distance.k_dual * kernel;
  kk = (kk + kk.adjoint()).eval() / 2.0;
  auto ek = eigh(kk);
  RealVector clipped = ek.values.cwiseMax(-1.0).cwiseMin(1.0);
  kk = ek.vectors * clipped.asDiagonal() * ek.vectors.adjoint();
  out.sep = binary_povm_from_k(range_part + kk, d);
  return out;
}

SeparatingPovm set_povm(const ConvexStateSet& a0, const ConvexStateSet& a1) { return set_povm_detailed(a0, a1).sep; }

double povm_success(const Povm& povm, const std::vector<LabelledState>& pairs, const std::vector<double>& weights) {
  require(pairs.size() == weights.size(), "one weight per state is required");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0, "weights must be non-negative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-9, "weights must sum to one");
  double s = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    s += weights[i] * hs_inner(povm.element(pairs[i].correct), pairs[i].rho).real();
  return s;
}

}  // namespace refgame
