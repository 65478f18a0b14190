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


#include "refgame/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace refgame {
namespace {

using detail::require;

constexpr double kZero = 1e-15;

// One real equality row <G, X> = rhs with G Hermitian, plus its origin.
struct RealRow {
  SparseComplexMatrix g;
  double rhs = 0.0;
  std::size_t source = 0;
  bool imag_part = false;
};

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(Index n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  Index find(Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Position of the off-diagonal pair (s, t), s < t, in real_embed order.
Index pair_slot(Index n, Index s, Index t) { return n + 2 * (s * n - s * (s + 1) / 2 + (t - s - 1)); }

struct BlockLayout {
  std::vector<std::vector<Index>> members;  // original indices per block
  std::vector<Index> offset;                // svec offset per block
  std::vector<Index> block_of;              // -1 for removed indices
  std::vector<Index> local;
  Index total_svec = 0;
  Index total_dim = 0;
};

// Adds the svec coefficients of Hermitian sparse g (restricted to blocks) into row.
void accumulate_row(const SparseComplexMatrix& g, const BlockLayout& bl, double scale, Eigen::Ref<RealVector> row) {
  const double r2 = std::sqrt(2.0);
  for (Index k = 0; k < g.outerSize(); ++k)
    for (SparseComplexMatrix::InnerIterator it(g, k); it; ++it) {
      const Index p = it.row(), q = it.col();
      const Index b = bl.block_of[p];
      if (b < 0 || b != bl.block_of[q]) continue;
      const Index s = bl.local[p], t = bl.local[q];
      const Index n = static_cast<Index>(bl.members[b].size());
      const cplx v = it.value() * scale;
      if (s == t) {
        row(bl.offset[b] + s) += v.real();
      } else if (s < t) {
        const Index slot = bl.offset[b] + pair_slot(n, s, t);
        row(slot) += r2 * v.real();
        row(slot + 1) += r2 * v.imag();
      }
    }
}

struct Blocks {
  std::vector<ComplexMatrix> m;
};

RealVector to_svec(const std::vector<ComplexMatrix>& blocks, const BlockLayout& bl) {
  RealVector x(bl.total_svec);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Index n = blocks[b].rows();
    x.segment(bl.offset[b], n * n) = real_embed(blocks[b]);
  }
  return x;
}

std::vector<ComplexMatrix> from_svec(const RealVector& x, const BlockLayout& bl) {
  std::vector<ComplexMatrix> out;
  for (std::size_t b = 0; b < bl.members.size(); ++b) {
    const Index n = static_cast<Index>(bl.members[b].size());
    out.push_back(real_unembed(x.segment(bl.offset[b], n * n), n));
  }
  return out;
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

// Largest alpha with x + alpha * dx PSD (infinity if unbounded).
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  ComplexMatrix m;
  if (llt.info() == Eigen::Success) {
    ComplexMatrix l = llt.matrixL();
    ComplexMatrix t = l.triangularView<Eigen::Lower>().solve(dx);
    m = l.triangularView<Eigen::Lower>().solve(ComplexMatrix(t.adjoint())).adjoint();
  } else {
    auto e = eigh(x);
    RealVector inv = e.values.cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    ComplexMatrix isq = e.vectors * inv.asDiagonal() * e.vectors.adjoint();
    m = isq * dx * isq;
  }
  const double lmin = min_eigenvalue(m);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

struct NtScaling {
  ComplexMatrix w;
  ComplexMatrix s_inv;
};

ComplexMatrix lower_factor(const ComplexMatrix& a) {
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  auto e = eigh(a);
  RealVector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

NtScaling nt_scaling(const ComplexMatrix& x, const ComplexMatrix& s) {
  ComplexMatrix lx = lower_factor(x);
  ComplexMatrix ls = lower_factor(s);
  Eigen::JacobiSVD<ComplexMatrix> svd(ls.adjoint() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealVector sig = svd.singularValues();
  for (Index i = 0; i < sig.size(); ++i)
    if (!(sig(i) > 0)) throw NumericalError("scaling matrix became singular");
  ComplexMatrix g = lx * svd.matrixV() * sig.cwiseSqrt().cwiseInverse().asDiagonal();
  NtScaling out;
  out.w = hermitize(g * g.adjoint());
  Eigen::LDLT<ComplexMatrix> ldlt(s);
  out.s_inv = hermitize(ldlt.solve(ComplexMatrix::Identity(s.rows(), s.cols())));
  return out;
}

struct Reduced {
  BlockLayout bl;
  RealMatrix a;       // scaled, independent rows
  RealVector b;
  RealVector c;       // minimisation objective (-H)
  RealVector row_scale;
  std::vector<std::size_t> row_origin;  // index into realified rows
  std::vector<RealRow> rows;
  bool inconsistent = false;
  std::string note;
};

}  // namespace

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::max_iter:
      return "max_iter";
    case SdpStatus::numerical_failure:
      return "numerical_failure";
  }
  return "unknown";
}

double feasibility_tolerance(double epsilon) { return std::min(1e-8, epsilon / 100.0); }

SparseComplexMatrix unit_entry(Index dim, Index i, Index j) {
  SparseComplexMatrix m(dim, dim);
  m.insert(i, j) = 1.0;
  m.makeCompressed();
  return m;
}

SparseComplexMatrix to_sparse(const ComplexMatrix& m, double drop_tol) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop_tol) trip.emplace_back(i, j, m(i, j));
  SparseComplexMatrix s(m.rows(), m.cols());
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

double constraint_residual(const SdpProblem& p, const ComplexMatrix& x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    cplx v = 0.0;
    for (Index k = 0; k < c.a.outerSize(); ++k)
      for (SparseComplexMatrix::InnerIterator it(c.a, k); it; ++it) v += std::conj(it.value()) * x(it.row(), it.col());
    worst = std::max(worst, std::abs(v - c.alpha));
  }
  return worst;
}

namespace {

void validate(const SdpProblem& p, const SdpOptions& opts) {
  const Index n = p.dim();
  require(n > 0 && p.objective.cols() == n, "sdp: objective must be square and non-empty");
  require(hermiticity_defect(p.objective) <= 1e-8 * std::max(1.0, p.objective.cwiseAbs().maxCoeff()),
          "sdp: objective must be Hermitian");
  require(p.bound_b > 0, "sdp: bound b must be positive");
  require(p.epsilon > 0, "sdp: epsilon must be positive");
  for (const auto& c : p.constraints)
    require(c.a.rows() == n && c.a.cols() == n, "sdp: constraint dimension mismatch");
  if (!p.block_sizes.empty()) {
    Index total = 0;
    for (Index s : p.block_sizes) {
      require(s >= 0, "sdp: negative block size");
      total += s;
    }
    require(total == n, "sdp: block sizes must sum to the dimension");
  }
  require(p.x_init.rows() == n && p.x_init.cols() == n, "sdp: x_init dimension mismatch");
  if (!opts.check_x_init) return;
  require(hermiticity_defect(p.x_init) <= 1e-8, "sdp: x_init must be Hermitian");
  require(min_eigenvalue(p.x_init) >= -kTolPsd, "sdp: x_init must be positive semidefinite");
  require(constraint_residual(p, p.x_init) <= 1e-8, "sdp: x_init violates the constraints");
  require(spectral_norm(p.x_init) <= p.bound_b + 1e-8, "sdp: x_init exceeds the norm bound");
}

Reduced presolve(const SdpProblem& p, const SdpOptions& opts) {
  const Index n = p.dim();
  Reduced red;

  // Split complex constraints into Hermitian real rows.
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    SparseComplexMatrix adj = c.a.adjoint();
    SparseComplexMatrix h1 = (c.a + adj) * cplx(0.5, 0.0);
    SparseComplexMatrix h2 = (c.a - adj) * cplx(0.0, -0.5);
    h1.prune(cplx(0.0), kZero);
    h2.prune(cplx(0.0), kZero);
    const RealRow parts[2] = {{h1, c.alpha.real(), i, false}, {h2, -c.alpha.imag(), i, true}};
    for (const auto& r : parts) {
      if (r.g.nonZeros() == 0) {
        if (std::abs(r.rhs) > 1e-12) {
          red.inconsistent = true;
          red.note = "constraint " + std::to_string(i) + " reads 0 = nonzero";
        }
        continue;
      }
      red.rows.push_back(r);
    }
  }

  // Detect zero pins: X_ii = 0 removes index i; two independent pins on the
  // same off-diagonal entry force it to zero.
  std::vector<bool> removed(static_cast<std::size_t>(n), false);
  std::map<std::pair<Index, Index>, std::vector<cplx>> pins;
  std::vector<int> pin_kind(red.rows.size(), 0);  // 1 diagonal, 2 off-diagonal
  std::vector<std::pair<Index, Index>> pin_pair(red.rows.size());
  for (std::size_t r = 0; r < red.rows.size(); ++r) {
    const auto& row = red.rows[r];
    if (row.rhs != 0.0) continue;
    Index lo = n, hi = -1;
    std::vector<std::pair<Index, Index>> ents;
    for (Index k = 0; k < row.g.outerSize(); ++k)
      for (SparseComplexMatrix::InnerIterator it(row.g, k); it; ++it) ents.emplace_back(it.row(), it.col());
    for (auto [i, j] : ents) {
      lo = std::min({lo, i, j});
      hi = std::max({hi, i, j});
    }
    bool simple = std::all_of(ents.begin(), ents.end(), [&](auto e) {
      return (e.first == lo || e.first == hi) && (e.second == lo || e.second == hi) &&
             (e.first != e.second || lo == hi);
    });
    if (!simple) continue;
    if (lo == hi) {
      pin_kind[r] = 1;
      removed[lo] = true;
    } else {
      pin_kind[r] = 2;
      pin_pair[r] = {lo, hi};
      pins[{lo, hi}].push_back(row.g.coeff(lo, hi));
    }
  }
  auto fully_pinned = [&](Index i, Index j) {
    auto it = pins.find({std::min(i, j), std::max(i, j)});
    if (it == pins.end()) return false;
    const auto& d = it->second;
    for (std::size_t a = 0; a < d.size(); ++a)
      for (std::size_t b = a + 1; b < d.size(); ++b)
        if (std::abs((std::conj(d[a]) * d[b]).imag()) > 1e-12 * std::abs(d[a]) * std::abs(d[b])) return true;
    return false;
  };

  std::vector<Index> declared(static_cast<std::size_t>(n), 0);
  if (!p.block_sizes.empty()) {
    Index pos = 0;
    for (std::size_t b = 0; b < p.block_sizes.size(); ++b)
      for (Index k = 0; k < p.block_sizes[b]; ++k) declared[pos++] = static_cast<Index>(b);
  }

  UnionFind uf(n);
  for (Index i = 0; i < n; ++i) {
    if (removed[i]) continue;
    for (Index j = i + 1; j < n; ++j)
      if (!removed[j] && declared[i] == declared[j] && !fully_pinned(i, j)) uf.unite(i, j);
  }

  BlockLayout& bl = red.bl;
  bl.block_of.assign(static_cast<std::size_t>(n), -1);
  bl.local.assign(static_cast<std::size_t>(n), -1);
  std::map<Index, Index> root_block;
  for (Index i = 0; i < n; ++i) {
    if (removed[i]) continue;
    Index root = uf.find(i);
    auto [it, fresh] = root_block.emplace(root, static_cast<Index>(bl.members.size()));
    if (fresh) bl.members.emplace_back();
    bl.block_of[i] = it->second;
    bl.local[i] = static_cast<Index>(bl.members[it->second].size());
    bl.members[it->second].push_back(i);
  }
  for (const auto& m : bl.members) {
    const Index sz = static_cast<Index>(m.size());
    bl.offset.push_back(bl.total_svec);
    bl.total_svec += sz * sz;
    bl.total_dim += sz;
  }

  // Dense scaled rows, skipping pins that the block structure already enforces.
  std::vector<RealVector> dense;
  std::vector<double> rhs, scale;
  std::vector<std::size_t> origin;
  for (std::size_t r = 0; r < red.rows.size(); ++r) {
    if (pin_kind[r] == 1) continue;
    if (pin_kind[r] == 2) {
      auto [i, j] = pin_pair[r];
      if (removed[i] || removed[j] || bl.block_of[i] != bl.block_of[j]) continue;
    }
    RealVector row = RealVector::Zero(bl.total_svec);
    accumulate_row(red.rows[r].g, bl, 1.0, row);
    const double nrm = row.norm();
    if (nrm <= 1e-14) {
      if (std::abs(red.rows[r].rhs) > 1e-10) {
        red.inconsistent = true;
        red.note = "constraint " + std::to_string(red.rows[r].source) + " forces a zero entry to be nonzero";
      }
      continue;
    }
    dense.push_back(row / nrm);
    rhs.push_back(red.rows[r].rhs / nrm);
    scale.push_back(1.0 / nrm);
    origin.push_back(r);
  }

  const Index m_all = static_cast<Index>(dense.size());
  RealMatrix a_all(m_all, bl.total_svec);
  RealVector b_all(m_all);
  for (Index i = 0; i < m_all; ++i) {
    a_all.row(i) = dense[i].transpose();
    b_all(i) = rhs[i];
  }

  // Rank-revealing orthogonalisation to drop redundant rows.
  std::vector<Index> keep;
  if (m_all > 0) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(a_all.transpose());
    qr.setThreshold(opts.redundancy_tol);
    const Index rank = qr.rank();
    const auto& perm = qr.colsPermutation().indices();
    for (Index k = 0; k < rank; ++k) keep.push_back(perm(k));
    std::sort(keep.begin(), keep.end());
    if (rank < m_all) {
      std::vector<Index> drop;
      std::vector<bool> kept(static_cast<std::size_t>(m_all), false);
      for (Index k : keep) kept[k] = true;
      for (Index k = 0; k < m_all; ++k)
        if (!kept[k]) drop.push_back(k);
      RealMatrix ak(bl.total_svec, static_cast<Index>(keep.size()));
      RealVector bk(static_cast<Index>(keep.size()));
      for (std::size_t k = 0; k < keep.size(); ++k) {
        ak.col(static_cast<Index>(k)) = a_all.row(keep[k]).transpose();
        bk(static_cast<Index>(k)) = b_all(keep[k]);
      }
      RealMatrix ad(bl.total_svec, static_cast<Index>(drop.size()));
      for (std::size_t k = 0; k < drop.size(); ++k) ad.col(static_cast<Index>(k)) = a_all.row(drop[k]).transpose();
      RealMatrix coef = ak.colPivHouseholderQr().solve(ad);
      for (std::size_t k = 0; k < drop.size(); ++k) {
        const double pred = coef.col(static_cast<Index>(k)).dot(bk);
        const double fit = (ak * coef.col(static_cast<Index>(k)) - ad.col(static_cast<Index>(k))).norm();
        if (fit < 1e-8 && std::abs(pred - b_all(drop[k])) > 1e-8 * (1.0 + std::abs(b_all(drop[k])))) {
          red.inconsistent = true;
          red.note = "dependent constraints disagree (difference " + std::to_string(pred - b_all(drop[k])) + ")";
        }
      }
    }
  }
  red.a.resize(static_cast<Index>(keep.size()), bl.total_svec);
  red.b.resize(static_cast<Index>(keep.size()));
  red.row_scale.resize(static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    red.a.row(static_cast<Index>(k)) = a_all.row(keep[k]);
    red.b(static_cast<Index>(k)) = b_all(keep[k]);
    red.row_scale(static_cast<Index>(k)) = scale[keep[k]];
    red.row_origin.push_back(origin[keep[k]]);
  }

  red.c = RealVector::Zero(bl.total_svec);
  accumulate_row(to_sparse(hermitize(p.objective)), bl, -1.0, red.c);
  return red;
}

ComplexMatrix expand(const std::vector<ComplexMatrix>& blocks, const BlockLayout& bl, Index n) {
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& mem = bl.members[b];
    for (std::size_t s = 0; s < mem.size(); ++s)
      for (std::size_t t = 0; t < mem.size(); ++t)
        x(mem[s], mem[t]) = blocks[b](static_cast<Index>(s), static_cast<Index>(t));
  }
  return x;
}

// Certified upper bound on the maximisation value from a dual vector y of the
// reduced minimisation problem.
double certified_bound(const Reduced& red, const RealVector& y, double bound_b) {
  RealVector s = red.c - red.a.transpose() * y;
  auto blocks = from_svec(s, red.bl);
  double bound = -red.b.dot(y);
  for (const auto& blk : blocks) {
    if (blk.rows() == 0) continue;
    const double lmin = min_eigenvalue(blk);
    if (lmin < 0) bound += -lmin * static_cast<double>(blk.rows()) * bound_b;
  }
  return bound;
}

void fill_dual(const Reduced& red, const RealVector& y, std::size_t n_constraints, std::vector<cplx>& dual) {
  dual.assign(n_constraints, cplx(0.0));
  for (Index k = 0; k < y.size(); ++k) {
    const auto& row = red.rows[red.row_origin[static_cast<std::size_t>(k)]];
    const double v = -y(k) * red.row_scale(k);
    if (row.imag_part)
      dual[row.source] += cplx(0.0, v);
    else
      dual[row.source] += cplx(v, 0.0);
  }
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
  validate(p, opts);
  const Index n = p.dim();
  const double delta = feasibility_tolerance(p.epsilon);
  SdpSolution sol;
  sol.x = ComplexMatrix::Zero(n, n);
  sol.dual.assign(p.constraints.size(), cplx(0.0));

  Reduced red = presolve(p, opts);
  if (red.inconsistent) {
    sol.status = SdpStatus::numerical_failure;
    sol.diagnostics = "infeasible constraint system: " + red.note;
    return sol;
  }
  const BlockLayout& bl = red.bl;
  const Index big_n = bl.total_svec;
  const Index m = red.a.rows();
  const ComplexMatrix h = hermitize(p.objective);

  auto finish = [&](const std::vector<ComplexMatrix>& xb, const RealVector& y, SdpStatus candidate) {
    sol.x = hermitize(expand(xb, bl, n));
    sol.objective_value = hs_inner(h, sol.x).real();
    sol.dual_bound = big_n > 0 ? certified_bound(red, y, p.bound_b) : 0.0;
    sol.constraint_residual = constraint_residual(p, sol.x);
    fill_dual(red, y, p.constraints.size(), sol.dual);
    sol.status = candidate;
    if (candidate == SdpStatus::optimal && (sol.constraint_residual > delta || sol.gap() > p.epsilon))
      sol.status = SdpStatus::max_iter;
    std::ostringstream os;
    os << "blocks=" << bl.members.size() << " rows=" << m << " svec=" << big_n << " iterations=" << sol.iterations
       << " residual=" << sol.constraint_residual << " gap=" << sol.gap();
    if (!sol.diagnostics.empty()) os << "; " << sol.diagnostics;
    sol.diagnostics = os.str();
    return sol;
  };

  if (big_n == 0) return finish({}, RealVector(0), SdpStatus::optimal);

  if (m == big_n) {
    // Every coordinate is pinned by the constraints.
    RealVector x = red.a.colPivHouseholderQr().solve(red.b);
    RealVector y = red.a.transpose().colPivHouseholderQr().solve(red.c);
    auto xb = from_svec(x, bl);
    for (const auto& blk : xb)
      if (min_eigenvalue(blk) < -kTolPsd) {
        sol.status = SdpStatus::numerical_failure;
        sol.diagnostics = "the constraints pin a point that is not positive semidefinite";
        sol.x = hermitize(expand(xb, bl, n));
        return sol;
      }
    return finish(xb, y, SdpStatus::optimal);
  }

  // Infeasible-start primal-dual path following with NT scaling.
  const std::size_t nb = bl.members.size();
  double max_b = red.b.size() ? red.b.cwiseAbs().maxCoeff() : 0.0;
  Index nmax = 0;
  for (const auto& mem : bl.members) nmax = std::max(nmax, static_cast<Index>(mem.size()));
  const double rn = std::sqrt(static_cast<double>(nmax));
  const double xi = std::max({10.0, rn, rn * (1.0 + max_b) / 2.0, p.bound_b});
  const double eta = std::max({10.0, rn, 1.0 + red.c.norm()});

  std::vector<ComplexMatrix> xb, sb;
  for (const auto& mem : bl.members) {
    const Index sz = static_cast<Index>(mem.size());
    xb.push_back(xi * ComplexMatrix::Identity(sz, sz));
    sb.push_back(eta * ComplexMatrix::Identity(sz, sz));
  }
  RealVector y = RealVector::Zero(m);

  // Which blocks each row touches.
  std::vector<std::vector<std::size_t>> row_blocks(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k)
    for (std::size_t b = 0; b < nb; ++b) {
      const Index sz = static_cast<Index>(bl.members[b].size());
      if (red.a.row(k).segment(bl.offset[b], sz * sz).cwiseAbs().maxCoeff() > 0) row_blocks[k].push_back(b);
    }

  const double total_dim = static_cast<double>(bl.total_dim);
  int stalled = 0;
  SdpStatus status = SdpStatus::max_iter;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    sol.iterations = iter;
    RealVector x = to_svec(xb, bl);
    RealVector s = to_svec(sb, bl);
    RealVector rp = red.b - red.a * x;
    RealVector rd = red.c - s - red.a.transpose() * y;
    double mu = 0.0;
    for (std::size_t b = 0; b < nb; ++b) mu += hs_inner(xb[b], sb[b]).real();
    mu /= total_dim;

    double orig_res = 0.0;
    for (Index k = 0; k < m; ++k) orig_res = std::max(orig_res, std::abs(rp(k)) / red.row_scale(k));
    if (orig_res <= delta) {
      const double bound = certified_bound(red, y, p.bound_b);
      const double obj = -red.c.dot(x);
      if (bound - obj <= p.epsilon && constraint_residual(p, hermitize(expand(xb, bl, n))) <= delta) {
        status = SdpStatus::optimal;
        break;
      }
    }
    if (!y.allFinite() || (y.size() && y.cwiseAbs().maxCoeff() > 1e13)) {
      sol.diagnostics = "dual iterate diverged; the primal problem looks infeasible";
      status = SdpStatus::numerical_failure;
      break;
    }

    std::vector<NtScaling> nt;
    try {
      for (std::size_t b = 0; b < nb; ++b) nt.push_back(nt_scaling(xb[b], sb[b]));
    } catch (const NumericalError& e) {
      sol.diagnostics = e.what();
      status = SdpStatus::numerical_failure;
      break;
    }

    auto rd_blocks = from_svec(rd, bl);
    std::vector<ComplexMatrix> rb(nb);
    for (std::size_t b = 0; b < nb; ++b)
      rb[b] = hermitize(opts.sigma * mu * nt[b].s_inv - xb[b] - nt[b].w * rd_blocks[b] * nt[b].w);

    RealMatrix ka = RealMatrix::Zero(big_n, m);
    for (Index k = 0; k < m; ++k)
      for (std::size_t b : row_blocks[k]) {
        const Index sz = static_cast<Index>(bl.members[b].size());
        ComplexMatrix ak = real_unembed(red.a.row(k).segment(bl.offset[b], sz * sz).transpose(), sz);
        ka.col(k).segment(bl.offset[b], sz * sz) = real_embed(hermitize(nt[b].w * ak * nt[b].w));
      }
    RealMatrix schur = red.a * ka;
    schur = (schur + schur.transpose()).eval() / 2.0;
    RealVector rhs = rp - red.a * to_svec(rb, bl);

    RealVector dy;
    Eigen::LLT<RealMatrix> llt(schur);
    if (llt.info() == Eigen::Success) {
      dy = llt.solve(rhs);
    } else {
      Eigen::LDLT<RealMatrix> ldlt(schur);
      dy = ldlt.solve(rhs);
    }
    if (!dy.allFinite()) {
      sol.diagnostics = "Schur complement system could not be solved";
      status = SdpStatus::numerical_failure;
      break;
    }

    RealVector ds = rd - red.a.transpose() * dy;
    auto ds_blocks = from_svec(ds, bl);
    std::vector<ComplexMatrix> dx(nb);
    double ap = 1.0 / opts.step_fraction, ad = 1.0 / opts.step_fraction;
    for (std::size_t b = 0; b < nb; ++b) {
      dx[b] = hermitize(opts.sigma * mu * nt[b].s_inv - xb[b] - nt[b].w * ds_blocks[b] * nt[b].w);
      ap = std::min(ap, max_step(xb[b], dx[b]));
      ad = std::min(ad, max_step(sb[b], ds_blocks[b]));
    }
    ap = std::min(1.0, opts.step_fraction * ap);
    ad = std::min(1.0, opts.step_fraction * ad);
    for (std::size_t b = 0; b < nb; ++b) {
      xb[b] = hermitize(xb[b] + ap * dx[b]);
      sb[b] = hermitize(sb[b] + ad * ds_blocks[b]);
    }
    y += ad * dy;

    stalled = (ap < 1e-8 && ad < 1e-8) ? stalled + 1 : 0;
    if (stalled >= 5) {
      sol.diagnostics = "step lengths collapsed";
      break;
    }
    sol.iterations = iter + 1;
  }
  return finish(xb, y, status);
}

SdpCheckReport check_solution(const SdpProblem& p, const SdpSolution& s) {
  SdpCheckReport r;
  if (s.status == SdpStatus::numerical_failure) {
    r.message = "numerical failure: " + s.diagnostics;
    return r;
  }
  const double delta = feasibility_tolerance(p.epsilon);
  r.residual = constraint_residual(p, s.x);
  r.psd_margin = min_eigenvalue(s.x);
  const double obj = hs_inner(hermitize(p.objective), s.x).real();
  r.gap = s.dual_bound - obj;
  std::ostringstream os;
  bool ok = true;
  if (r.residual > delta) {
    ok = false;
    os << "residual " << r.residual << " exceeds " << delta << "; ";
  }
  if (r.psd_margin < -kTolPsd) {
    ok = false;
    os << "minimum eigenvalue " << r.psd_margin << " below -" << kTolPsd << "; ";
  }
  if (r.gap > p.epsilon) {
    ok = false;
    os << "duality gap " << r.gap << " exceeds " << p.epsilon << "; ";
  }
  if (std::abs(obj - s.objective_value) > 1e-9 * std::max(1.0, std::abs(obj))) {
    ok = false;
    os << "reported objective differs from recomputed value; ";
  }
  if (s.status != SdpStatus::optimal) {
    ok = false;
    os << "status " << to_string(s.status) << "; ";
  }
  r.pass = ok;
  r.message = ok ? "pass" : os.str();
  return r;
}

}  // namespace refgame
