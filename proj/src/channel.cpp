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

#include "refgame/channel.hpp"

#include <cmath>

#include "refgame/sdp.hpp"

namespace refgame {
namespace {

using detail::require;

// Orthonormal basis of the Hermitian n x n matrices.
std::vector<ComplexMatrix> hermitian_basis(Index n) {
  std::vector<ComplexMatrix> out;
  for (Index k = 0; k < n * n; ++k) {
    RealVector e = RealVector::Zero(n * n);
    e(k) = 1.0;
    out.push_back(real_unembed(e, n));
  }
  return out;
}

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Index off = 0;
  for (const auto& p : parts) {
    out.block(off, off, p.rows(), p.cols()) = p;
    off += p.rows();
  }
  return out;
}

}  // namespace

MixedCircuit::MixedCircuit(Index in_dim, Index out_dim, Index env_dim, const ComplexMatrix& stinespring)
    : in_(in_dim), out_(out_dim), env_(env_dim) {
  require(in_ >= 1 && out_ >= 1 && env_ >= 1, "mixed circuit dimensions must be positive");
  const Index n = in_ * out_ * env_;
  require(stinespring.rows() == n && stinespring.cols() == n,
          "Stinespring unitary must act on F (x) G (x) G' (dimension " + std::to_string(n) + ")");
  u_ = UnitaryMatrix(stinespring).matrix();
  iso_.resize(n, in_);
  for (Index f = 0; f < in_; ++f) iso_.col(f) = u_.col(f * out_ * env_);
}

SpaceLayout MixedCircuit::layout() const { return SpaceLayout({{"F", in_}, {"G", out_}, {"G'", env_}}); }

ComplexMatrix MixedCircuit::apply_linear(const ComplexMatrix& x) const {
  require(x.rows() == in_ && x.cols() == in_, "channel input has the wrong dimension");
  return partial_trace(iso_ * x * iso_.adjoint(), layout(), {"F", "G'"});
}

ComplexMatrix MixedCircuit::apply(const ComplexMatrix& rho) const {
  DensityMatrix d(rho);
  return apply_linear(d.matrix());
}

ComplexMatrix MixedCircuit::adjoint(const ComplexMatrix& e) const {
  require(e.rows() == out_ && e.cols() == out_, "channel adjoint input has the wrong dimension");
  return iso_.adjoint() * embed_lift(e, {"G"}, layout()) * iso_;
}

std::vector<ComplexMatrix> MixedCircuit::kraus() const {
  std::vector<ComplexMatrix> ks;
  for (Index f = 0; f < in_; ++f)
    for (Index e = 0; e < env_; ++e) {
      ComplexMatrix k(out_, in_);
      for (Index g = 0; g < out_; ++g)
        for (Index i = 0; i < in_; ++i) k(g, i) = u_((f * out_ + g) * env_ + e, i * out_ * env_);
      ks.push_back(k);
    }
  return ks;
}

MixedCircuit MixedCircuit::constant(Index in_dim, Index out_dim, Index k) {
  require(k >= 0 && k < out_dim, "constant channel: basis index out of range");
  ComplexMatrix shift = ComplexMatrix::Zero(out_dim, out_dim);
  for (Index g = 0; g < out_dim; ++g) shift((g + k) % out_dim, g) = 1.0;
  return MixedCircuit(in_dim, out_dim, 1, kron(ComplexMatrix(ComplexMatrix::Identity(in_dim, in_dim)), shift));
}

MixedCircuit MixedCircuit::identity(Index dim) {
  ComplexMatrix swap = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (Index a = 0; a < dim; ++a)
    for (Index b = 0; b < dim; ++b) swap(b * dim + a, a * dim + b) = 1.0;
  return MixedCircuit(dim, dim, 1, swap);
}

StateFamily image_family(const MixedCircuit& q) {
  StateFamily f;
  f.state_dim = q.out_dim();
  f.blocks = {q.in_dim()};
  f.forward = [q](const std::vector<ComplexMatrix>& p) { return q.apply_linear(p.at(0)); };
  f.adjoint = [q](const ComplexMatrix& e) { return std::vector<ComplexMatrix>{q.adjoint(e)}; };
  f.initial = {ComplexMatrix::Identity(q.in_dim(), q.in_dim()) / static_cast<double>(q.in_dim())};
  return f;
}

StateFamily hull_family(const std::vector<ComplexMatrix>& members) {
  require(!members.empty(), "hull needs at least one state");
  const Index n = members.front().rows();
  for (const auto& m : members) {
    require(m.rows() == n && m.cols() == n, "hull members must share one dimension");
    DensityMatrix check(m);
  }
  StateFamily f;
  f.state_dim = n;
  f.blocks.assign(members.size(), 1);
  f.forward = [members](const std::vector<ComplexMatrix>& p) {
    ComplexMatrix s = ComplexMatrix::Zero(members.front().rows(), members.front().cols());
    for (std::size_t j = 0; j < members.size(); ++j) s += p.at(j)(0, 0).real() * members[j];
    return s;
  };
  f.adjoint = [members](const ComplexMatrix& e) {
    std::vector<ComplexMatrix> out;
    for (const auto& m : members) out.push_back(ComplexMatrix::Constant(1, 1, hs_inner(e, m).real()));
    return out;
  };
  f.initial.assign(members.size(), ComplexMatrix::Zero(1, 1));
  f.initial[0](0, 0) = 1.0;
  return f;
}

DistanceResult minimum_distance(const StateFamily& a0, const StateFamily& a1, double epsilon) {
  require(a0.state_dim == a1.state_dim, "state families must have the same dimension");
  const Index n = a0.state_dim;
  // Variable blocks: params of a0, params of a1, P, N, slack t.
  std::vector<Index> sizes(a0.blocks);
  sizes.insert(sizes.end(), a1.blocks.begin(), a1.blocks.end());
  sizes.push_back(n);
  sizes.push_back(n);
  sizes.push_back(1);
  const std::size_t k0 = a0.blocks.size(), k1 = a1.blocks.size();
  auto zero_blocks = [&]() {
    std::vector<ComplexMatrix> z;
    for (Index s : sizes) z.push_back(ComplexMatrix::Zero(s, s));
    return z;
  };

  SdpProblem p;
  {
    auto obj = zero_blocks();
    obj[k0 + k1] = -ComplexMatrix::Identity(n, n);
    obj[k0 + k1 + 1] = -ComplexMatrix::Identity(n, n);
    p.objective = block_diag(obj);
  }
  // P - N - a0(params0) + a1(params1) = 0, one row per Hermitian basis element.
  for (const auto& e : hermitian_basis(n)) {
    auto c = zero_blocks();
    auto adj0 = a0.adjoint(e);
    auto adj1 = a1.adjoint(e);
    for (std::size_t j = 0; j < k0; ++j) c[j] = -adj0[j];
    for (std::size_t j = 0; j < k1; ++j) c[k0 + j] = adj1[j];
    c[k0 + k1] = e;
    c[k0 + k1 + 1] = -e;
    p.add_constraint(to_sparse(block_diag(c), 1e-15), 0.0);
  }
  // Unit total trace of each parameter family.
  for (int side = 0; side < 2; ++side) {
    auto c = zero_blocks();
    const std::size_t lo = side == 0 ? 0 : k0, hi = side == 0 ? k0 : k0 + k1;
    for (std::size_t j = lo; j < hi; ++j) c[j] = ComplexMatrix::Identity(sizes[j], sizes[j]);
    p.add_constraint(to_sparse(block_diag(c)), 1.0);
  }
  // Tr P + Tr N + t = 2 bounds the feasible set.
  {
    auto c = zero_blocks();
    c[k0 + k1] = ComplexMatrix::Identity(n, n);
    c[k0 + k1 + 1] = ComplexMatrix::Identity(n, n);
    c[k0 + k1 + 2] = ComplexMatrix::Identity(1, 1);
    p.add_constraint(to_sparse(block_diag(c)), 2.0);
  }
  {
    auto x = zero_blocks();
    for (std::size_t j = 0; j < k0; ++j) x[j] = a0.initial[j];
    for (std::size_t j = 0; j < k1; ++j) x[k0 + j] = a1.initial[j];
    ComplexMatrix delta = a0.forward(a0.initial) - a1.forward(a1.initial);
    auto jd = jordan_decompose((delta + delta.adjoint()) / 2.0);
    x[k0 + k1] = jd.plus;
    x[k0 + k1 + 1] = jd.minus;
    x[k0 + k1 + 2](0, 0) = 2.0 - (jd.plus.trace() + jd.minus.trace()).real();
    p.x_init = block_diag(x);
  }
  p.bound_b = 2.0;
  p.epsilon = epsilon;
  p.block_sizes = sizes;

  SdpOptions opts;
  opts.check_x_init = false;
  SdpSolution s = solve_sdp(p, opts);
  if (s.status != SdpStatus::optimal)
    throw NumericalError("trace-distance program did not converge (" + to_string(s.status) + "): " + s.diagnostics);

  DistanceResult r;
  Index off = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    ComplexMatrix blk = s.x.block(off, off, sizes[j], sizes[j]);
    if (j < k0) r.params0.push_back(blk);
    else if (j < k0 + k1) r.params1.push_back(blk);
    off += sizes[j];
  }
  r.state0 = a0.forward(r.params0);
  r.state1 = a1.forward(r.params1);
  r.delta = r.state0 - r.state1;
  r.delta = (r.delta + r.delta.adjoint()).eval() / 2.0;
  r.d = trace_norm(r.delta);
  // The multipliers of the difference rows assemble into -K.
  const auto basis = hermitian_basis(n);
  r.k_dual = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < basis.size(); ++i) r.k_dual -= s.dual[i].real() * basis[i];
  r.gap = s.gap();
  r.diagnostics = s.diagnostics;
  return r;
}

ImageDistanceResult image_distance(const MixedCircuit& q0, const MixedCircuit& q1) {
  require(q0.in_dim() == q1.in_dim() && q0.out_dim() == q1.out_dim(),
          "circuits must share input and output dimensions");
  DistanceResult r = minimum_distance(image_family(q0), image_family(q1));
  ImageDistanceResult out;
  out.d = r.d;
  out.rho0_star = r.params0.at(0);
  out.rho1_star = r.params1.at(0);
  out.delta = r.delta;
  out.k_dual = r.k_dual;
  return out;
}

std::string to_string(PromiseClass c) {
  switch (c) {
    case PromiseClass::yes:
      return "yes";
    case PromiseClass::no:
      return "no";
    case PromiseClass::violated:
      return "violated";
  }
  return "unknown";
}

PromiseClass classify_distance(double d, double epsilon) {
  if (d <= kYesDistance) return PromiseClass::yes;
  if (d > 2.0 - epsilon) return PromiseClass::no;
  return PromiseClass::violated;
}

PromiseClass classify_promise(const CloseImagesInstance& inst) {
  require(inst.epsilon > 0.0 && inst.epsilon <= 1.0, "epsilon must lie in (0, 1]");
  return classify_distance(image_distance(inst.q0, inst.q1).d, inst.epsilon);
}

}  // namespace refgame
