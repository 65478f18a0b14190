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

#include "refgame/transcript.hpp"

#include <algorithm>
#include <cmath>

namespace refgame {
namespace {

using detail::require;

constexpr double kSupportTol = 1e-9;

Labels in_layout_order(const SpaceLayout& layout, const Labels& labels) {
  Labels out;
  for (const auto& l : layout.labels())
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) out.push_back(l);
  return out;
}

// Operators re-expressed with F's factors first, then G's.
struct Canonical {
  Labels order;
  SpaceLayout canon;
  SpaceLayout original;
  Index df = 1, dg = 1;

  explicit Canonical(const RoundSequence& r) : original(r.layout) {
    order = r.kept;
    order.insert(order.end(), r.traced.begin(), r.traced.end());
    canon = r.layout.select(order);
    df = r.kept_dim();
    dg = r.traced_dim();
  }
  ComplexMatrix in(const ComplexMatrix& a) const { return permute_factors(a, original, order); }
  ComplexMatrix out(const ComplexMatrix& a) const { return permute_factors(a, canon, original.labels()); }
};

ComplexMatrix trace_g(const ComplexMatrix& m, Index df, Index dg) {
  ComplexMatrix out = ComplexMatrix::Zero(df, df);
  for (Index i = 0; i < df; ++i)
    for (Index j = 0; j < df; ++j)
      for (Index g = 0; g < dg; ++g) out(i, j) += m(i * dg + g, j * dg + g);
  return out;
}

// Orthonormal basis (as columns) of the F-support of the columns of m, an
// operator from some space into F (x) G.
ComplexMatrix f_support(const ComplexMatrix& m, Index df, Index dg) {
  const Index cols = m.cols();
  ComplexMatrix r(df, dg * cols);
  for (Index f = 0; f < df; ++f)
    for (Index g = 0; g < dg; ++g)
      for (Index c = 0; c < cols; ++c) r(f, g * cols + c) = m(f * dg + g, c);
  Eigen::JacobiSVD<ComplexMatrix> svd(r, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  Index rank = 0;
  if (s.size() && s(0) > 0)
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) > kSupportTol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

// P_1..P_r (index 0 unused) with X_k = (P_k (x) I_G) sigma_k (P_k (x) I_G)* for
// every consistent PSD transcript. Operators are in canonical order.
std::vector<ComplexMatrix> face_projections(const std::vector<ComplexMatrix>& a, Index df, Index dg) {
  const std::size_t r = a.size() - 1;
  const ComplexMatrix idg = ComplexMatrix::Identity(dg, dg);
  std::vector<ComplexMatrix> p(r + 1);
  if (r == 0) return p;
  p[1] = f_support(a[0].col(0), df, dg);
  for (std::size_t k = 1; k < r; ++k)
    p[k + 1] = p[k].cols() == 0 ? ComplexMatrix(df, 0) : f_support(a[k] * kron(p[k], idg), df, dg);
  return p;
}

SparseComplexMatrix embed_block(const ComplexMatrix& m, Index offset, Index n, double drop = 0.0) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop) trip.emplace_back(offset + i, offset + j, m(i, j));
  SparseComplexMatrix s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

void add_realified(std::vector<RealConstraint>& out, const SparseComplexMatrix& a, cplx alpha) {
  SparseComplexMatrix adj = a.adjoint();
  SparseComplexMatrix h1 = (a + adj) * cplx(0.5, 0.0);
  SparseComplexMatrix h2 = (a - adj) * cplx(0.0, -0.5);
  h1.prune(cplx(0.0), 1e-15);
  h2.prune(cplx(0.0), 1e-15);
  if (h1.nonZeros() > 0 || alpha.real() != 0.0) out.push_back({h1, alpha.real()});
  if (h2.nonZeros() > 0 || alpha.imag() != 0.0) out.push_back({h2, -alpha.imag()});
}

std::string private_label(const SpaceLayout& layout) {
  std::string l = "H";
  while (layout.contains(l)) l += "'";
  return l;
}

void validate_transcript(const RoundSequence& rounds, const Transcript& t) {
  require(t.snapshots.size() == rounds.rounds(), "transcript must have one snapshot per round");
  for (const auto& x : t.snapshots)
    require(x.rows() == rounds.dim() && x.cols() == rounds.dim(), "snapshot dimension does not match the rounds");
}

}  // namespace

RoundSequence::RoundSequence(std::vector<ComplexMatrix> m, SpaceLayout l, Labels kept_labels, Labels traced_labels)
    : matrices(std::move(m)), layout(std::move(l)) {
  require(!matrices.empty(), "a round sequence needs at least one matrix");
  for (const auto& lab : kept_labels) layout.position(lab);
  for (const auto& lab : traced_labels) {
    layout.position(lab);
    require(std::find(kept_labels.begin(), kept_labels.end(), lab) == kept_labels.end(),
            "factor '" + lab + "' cannot be both kept and traced");
  }
  require(kept_labels.size() + traced_labels.size() == layout.size(), "kept and traced factors must cover the layout");
  kept = in_layout_order(layout, kept_labels);
  traced = in_layout_order(layout, traced_labels);
  for (const auto& a : matrices) {
    require(a.rows() == layout.dim() && a.cols() == layout.dim(), "round matrix dimension does not match the layout");
    require_finite(a, "round matrix");
  }
}

double feasible_bound(const RoundSequence& rounds) {
  double best = 1.0, prod = 1.0;
  for (std::size_t i = 0; i + 1 < rounds.matrices.size(); ++i) {
    const double n = spectral_norm(rounds.matrices[i]);
    prod *= n * n;
    best = std::max(best, prod);
  }
  return best;
}

Transcript trivial_transcript(const RoundSequence& rounds) {
  Transcript t;
  ComplexMatrix x = outer(basis_vector(rounds.dim(), 0));
  for (std::size_t i = 0; i < rounds.rounds(); ++i) {
    x = rounds.matrices[i] * x * rounds.matrices[i].adjoint();
    t.snapshots.push_back(x);
  }
  return t;
}

double consistency_residual(const RoundSequence& rounds, const Transcript& t) {
  validate_transcript(rounds, t);
  double worst = 0.0;
  ComplexMatrix prev = outer(basis_vector(rounds.dim(), 0));
  for (std::size_t i = 0; i < rounds.rounds(); ++i) {
    const auto& a = rounds.matrices[i];
    ComplexMatrix lhs = partial_trace(t.snapshots[i], rounds.layout, rounds.traced);
    ComplexMatrix rhs = partial_trace(a * prev * a.adjoint(), rounds.layout, rounds.traced);
    worst = std::max(worst, (lhs - rhs).norm());
    prev = t.snapshots[i];
  }
  return worst;
}

double transcript_value(const RoundSequence& rounds, const Transcript& t) {
  validate_transcript(rounds, t);
  const auto& a = rounds.matrices.back();
  ComplexMatrix last = rounds.rounds() == 0 ? outer(basis_vector(rounds.dim(), 0)) : t.snapshots.back();
  return hs_inner(a.adjoint() * a, last).real();
}

ComplexMatrix stack_transcript(const RoundSequence& rounds, const Transcript& t) {
  validate_transcript(rounds, t);
  const Index d = rounds.dim();
  const Index r = static_cast<Index>(rounds.rounds());
  ComplexMatrix x = ComplexMatrix::Zero((r + 1) * d, (r + 1) * d);
  x(0, 0) = 1.0;
  for (Index k = 0; k < r; ++k) x.block((k + 1) * d, (k + 1) * d, d, d) = t.snapshots[static_cast<std::size_t>(k)];
  return x;
}

ConsistencySystem build_consistency_system(const RoundSequence& rounds) {
  require(rounds.rounds() >= 1, "the consistency system needs at least one prover move");
  ConsistencySystem sys;
  const Index d = rounds.dim();
  const Index r = static_cast<Index>(rounds.rounds());
  sys.block_dim = d;
  sys.stacked_dim = (r + 1) * d;
  const Index n = sys.stacked_dim;

  // Off-block-diagonal entries vanish.
  for (Index a = 0; a <= r; ++a)
    for (Index b = a + 1; b <= r; ++b)
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) add_realified(sys.constraints, unit_entry(n, a * d + i, b * d + j), 0.0);
  // X_0 is the ground state.
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) add_realified(sys.constraints, unit_entry(n, i, j), (i == 0 && j == 0) ? 1.0 : 0.0);
  // <Xi_k(T^{ij}(A_k)), X> = 0.
  const Index df = rounds.kept_dim();
  for (Index k = 0; k < r; ++k) {
    const auto& a = rounds.matrices[static_cast<std::size_t>(k)];
    for (Index i = 0; i < df; ++i)
      for (Index j = 0; j < df; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(df, df);
        e(i, j) = 1.0;
        ComplexMatrix lifted = embed_lift(e, rounds.kept, rounds.layout);
        SparseComplexMatrix c =
            embed_block(a.adjoint() * lifted * a, k * d, n, 1e-15) + embed_block(-lifted, (k + 1) * d, n, 1e-15);
        add_realified(sys.constraints, c, 0.0);
      }
  }
  return sys;
}

SdpProblem opt_sdp_problem(const RoundSequence& rounds, double epsilon) {
  ConsistencySystem sys = build_consistency_system(rounds);
  SdpProblem p;
  const Index d = sys.block_dim;
  const auto& last = rounds.matrices.back();
  p.objective = ComplexMatrix::Zero(sys.stacked_dim, sys.stacked_dim);
  p.objective.bottomRightCorner(d, d) = last.adjoint() * last;
  for (const auto& c : sys.constraints) p.add_constraint(c.h, c.rhs);
  p.x_init = stack_transcript(rounds, trivial_transcript(rounds));
  p.bound_b = feasible_bound(rounds);
  p.epsilon = epsilon;
  return p;
}

OptResult solve_opt(const RoundSequence& rounds, double epsilon, const OptOptions& opts) {
  require(epsilon > 0.0, "epsilon must be positive");
  const std::size_t r = rounds.rounds();
  OptResult res;
  if (r == 0) {
    ComplexVector v = rounds.matrices[0] * basis_vector(rounds.dim(), 0);
    res.value = res.dual_bound = v.squaredNorm();
    return res;
  }

  if (!opts.facial_reduction) {
    SdpProblem p = opt_sdp_problem(rounds, epsilon);
    SdpOptions so;
    so.check_x_init = false;
    SdpSolution s = solve_sdp(p, so);
    if (s.status != SdpStatus::optimal)
      throw NumericalError("OPT program not solved (" + to_string(s.status) + "): " + s.diagnostics);
    const Index d = rounds.dim();
    for (std::size_t k = 1; k <= r; ++k)
      res.transcript.snapshots.push_back(s.x.block(static_cast<Index>(k) * d, static_cast<Index>(k) * d, d, d));
    res.value = s.objective_value;
    res.dual_bound = s.dual_bound;
    res.status = s.status;
    res.diagnostics = s.diagnostics;
    res.residual = consistency_residual(rounds, res.transcript);
    return res;
  }

  Canonical cf(rounds);
  const Index df = cf.df, dg = cf.dg;
  const ComplexMatrix idg = ComplexMatrix::Identity(dg, dg);
  std::vector<ComplexMatrix> a;
  for (const auto& m : rounds.matrices) a.push_back(cf.in(m));

  ComplexVector first = a[0].col(0);
  std::vector<ComplexMatrix> p = face_projections(a, df, dg), q(r + 1);
  for (std::size_t k = 1; k <= r; ++k) q[k] = kron(p[k], idg);

  std::vector<Index> sizes(r), offsets(r);
  Index n = 0;
  for (std::size_t k = 1; k <= r; ++k) {
    sizes[k - 1] = p[k].cols() * dg;
    offsets[k - 1] = n;
    n += sizes[k - 1];
  }
  auto empty_result = [&]() {
    for (std::size_t k = 0; k < r; ++k)
      res.transcript.snapshots.push_back(ComplexMatrix::Zero(rounds.dim(), rounds.dim()));
    res.value = res.dual_bound = 0.0;
    res.residual = consistency_residual(rounds, res.transcript);
    return res;
  };
  for (Index s : sizes)
    if (s == 0) return empty_result();

  SdpProblem prob;
  prob.objective = ComplexMatrix::Zero(n, n);
  {
    ComplexMatrix last = a[r] * q[r];
    prob.objective.block(offsets[r - 1], offsets[r - 1], sizes[r - 1], sizes[r - 1]) = last.adjoint() * last;
  }
  // Round 0: Tr_G sigma_1 = P_1* Tr_G(A_0 X_0 A_0*) P_1.
  {
    ComplexMatrix rho = p[1].adjoint() * trace_g(first * first.adjoint(), df, dg) * p[1];
    const Index kf = p[1].cols();
    for (Index i = 0; i < kf; ++i)
      for (Index j = 0; j < kf; ++j) {
        std::vector<Eigen::Triplet<cplx>> trip;
        for (Index g = 0; g < dg; ++g) trip.emplace_back(i * dg + g, j * dg + g, 1.0);
        SparseComplexMatrix c(n, n);
        c.setFromTriplets(trip.begin(), trip.end());
        prob.add_constraint(c, rho(i, j));
      }
  }
  // Round k: Tr_G sigma_{k+1} = Tr_G(C sigma_k C*), C = (P_{k+1}* (x) I) A_k Q_k.
  for (std::size_t k = 1; k < r; ++k) {
    ComplexMatrix c = q[k + 1].adjoint() * a[k] * q[k];
    const Index kf = p[k + 1].cols();
    const Index nk = sizes[k - 1];
    for (Index i = 0; i < kf; ++i)
      for (Index j = 0; j < kf; ++j) {
        ComplexMatrix m = ComplexMatrix::Zero(nk, nk);
        for (Index g = 0; g < dg; ++g) m += c.row(i * dg + g).adjoint() * c.row(j * dg + g);
        std::vector<Eigen::Triplet<cplx>> trip;
        for (Index t = 0; t < nk; ++t)
          for (Index s = 0; s < nk; ++s)
            if (std::abs(m(s, t)) > 1e-15) trip.emplace_back(offsets[k - 1] + s, offsets[k - 1] + t, m(s, t));
        for (Index g = 0; g < dg; ++g) trip.emplace_back(offsets[k] + i * dg + g, offsets[k] + j * dg + g, -1.0);
        SparseComplexMatrix cm(n, n);
        cm.setFromTriplets(trip.begin(), trip.end());
        prob.add_constraint(cm, 0.0);
      }
  }
  // Trivial transcript as the starting point.
  {
    prob.x_init = ComplexMatrix::Zero(n, n);
    ComplexMatrix x = outer(basis_vector(rounds.dim(), 0));
    for (std::size_t k = 1; k <= r; ++k) {
      x = a[k - 1] * x * a[k - 1].adjoint();
      prob.x_init.block(offsets[k - 1], offsets[k - 1], sizes[k - 1], sizes[k - 1]) = q[k].adjoint() * x * q[k];
    }
  }
  prob.bound_b = feasible_bound(rounds);
  prob.epsilon = epsilon;
  prob.block_sizes = sizes;

  SdpOptions so;
  so.check_x_init = false;
  SdpSolution s = solve_sdp(prob, so);
  if (s.status != SdpStatus::optimal)
    throw NumericalError("OPT program not solved (" + to_string(s.status) + "): " + s.diagnostics);

  for (std::size_t k = 1; k <= r; ++k) {
    ComplexMatrix sig = s.x.block(offsets[k - 1], offsets[k - 1], sizes[k - 1], sizes[k - 1]);
    ComplexMatrix x = q[k] * sig * q[k].adjoint();
    res.transcript.snapshots.push_back(cf.out((x + x.adjoint()) / 2.0));
  }
  res.value = s.objective_value;
  res.dual_bound = s.dual_bound;
  res.status = s.status;
  res.diagnostics = s.diagnostics;
  res.residual = consistency_residual(rounds, res.transcript);
  const double bound = feasible_bound(rounds);
  for (const auto& x : res.transcript.snapshots)
    if (spectral_norm(x) > bound + 1e-6) throw NumericalError("OPT solution exceeds the consistency norm bound");
  return res;
}

std::vector<ComplexMatrix> consistency_faces(const RoundSequence& rounds) {
  Canonical cf(rounds);
  std::vector<ComplexMatrix> a;
  for (const auto& m : rounds.matrices) a.push_back(cf.in(m));
  std::vector<ComplexMatrix> p = face_projections(a, cf.df, cf.dg);
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 1; k < p.size(); ++k) {
    ComplexMatrix q = kron(p[k], ComplexMatrix::Identity(cf.dg, cf.dg));
    ComplexMatrix o(q.rows(), q.cols());
    for (Index c = 0; c < q.cols(); ++c)
      o.col(c) = permute_factors(ComplexVector(q.col(c)), cf.canon, rounds.layout.labels());
    out.push_back(o);
  }
  return out;
}

SpaceLayout prover_layout(const RoundSequence& rounds, Index env_dim) {
  return rounds.layout.appended({private_label(rounds.layout), env_dim});
}

Labels prover_labels(const RoundSequence& rounds) {
  Labels l = rounds.traced;
  l.push_back(private_label(rounds.layout));
  return l;
}

namespace {

ComplexVector run_prover(const RoundSequence& rounds, const Prover& prover, Transcript* t) {
  require(prover.unitaries.size() == rounds.rounds(), "prover must supply one unitary per round");
  require(prover.env_dim >= 1, "prover private dimension must be positive");
  const SpaceLayout full = prover_layout(rounds, prover.env_dim);
  const Labels acting = prover_labels(rounds);
  const Labels verifier = rounds.layout.labels();
  const Index pd = rounds.traced_dim() * prover.env_dim;
  ComplexVector u = basis_vector(full.dim(), 0);
  for (std::size_t i = 0; i < rounds.rounds(); ++i) {
    const auto& w = prover.unitaries[i];
    require(w.rows() == pd && w.cols() == pd, "prover unitary has the wrong dimension");
    require(is_unitary(w), "prover matrix is not unitary");
    u = apply_lifted(rounds.matrices[i], verifier, full, u);
    u = apply_lifted(w, acting, full, u);
    if (t) t->snapshots.push_back(partial_trace(outer(u), full, {acting.back()}));
  }
  return u;
}

}  // namespace

Transcript prover_to_transcript(const RoundSequence& rounds, const Prover& prover) {
  Transcript t;
  run_prover(rounds, prover, &t);
  return t;
}

double prover_value(const RoundSequence& rounds, const Prover& prover) {
  ComplexVector u = run_prover(rounds, prover, nullptr);
  const SpaceLayout full = prover_layout(rounds, prover.env_dim);
  return apply_lifted(rounds.matrices.back(), rounds.layout.labels(), full, u).squaredNorm();
}

Prover transcript_to_prover(const RoundSequence& rounds, const Transcript& t, double tol_match) {
  const double res = consistency_residual(rounds, t);
  require(res <= std::max(kTolConsistency, tol_match),
          "transcript is not consistent (residual " + std::to_string(res) + ")");
  Prover prover;
  for (const auto& x : t.snapshots) prover.env_dim = std::max(prover.env_dim, numerical_rank(x, 1e-10));
  const SpaceLayout full = prover_layout(rounds, prover.env_dim);
  const Labels acting = prover_labels(rounds);
  const Labels verifier = rounds.layout.labels();
  ComplexVector u = basis_vector(full.dim(), 0);
  for (std::size_t i = 0; i < rounds.rounds(); ++i) {
    ComplexVector w = apply_lifted(rounds.matrices[i], verifier, full, u);
    ComplexMatrix x = t.snapshots[i];
    x = (x + x.adjoint()).eval() / 2.0;
    // Clip tiny negative eigenvalues left by the solver before purifying.
    auto e = eigh(x);
    x = e.vectors * e.values.cwiseMax(0.0).asDiagonal() * e.vectors.adjoint();
    ComplexVector v = purify(x, prover.env_dim);
    ComplexMatrix c = connecting_unitary(w, v, full, acting, tol_match);
    prover.unitaries.push_back(c);
    u = apply_lifted(c, acting, full, w);
  }
  return prover;
}

OptResult qip_value(const RoundSequence& verifier, const ComplexMatrix& accept, double epsilon) {
  require(accept.rows() == verifier.dim() && accept.cols() == verifier.dim(), "accept projector dimension mismatch");
  for (const auto& v : verifier.matrices) require(is_unitary(v), "verifier rounds must be unitary");
  RoundSequence r = verifier;
  r.matrices.back() = accept * verifier.matrices.back();
  return solve_opt(r, epsilon);
}

}  // namespace refgame
