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


#include "refgame/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace refgame {
namespace {

using detail::require;

// Digits of `idx` in the mixed radix given by `dims` (most significant first).
void digits_of(Index idx, const std::vector<Index>& dims, std::vector<Index>& out) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = idx % dims[k];
    idx /= dims[k];
  }
}

}  // namespace

SpaceLayout::SpaceLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    require(f.dim >= 1, "factor '" + f.label + "' must have positive dimension");
    require(seen.insert(f.label).second, "duplicate factor label '" + f.label + "'");
    dim_ *= f.dim;
  }
}

bool SpaceLayout::contains(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.label == label; });
}

std::size_t SpaceLayout::position(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  detail::fail_precondition("unknown factor label '" + std::string(label) + "'");
}

Index SpaceLayout::dim_of(std::string_view label) const { return factors_[position(label)].dim; }

Index SpaceLayout::dim_of(const Labels& labels) const {
  Index d = 1;
  for (const auto& l : labels) d *= dim_of(l);
  return d;
}

Labels SpaceLayout::labels() const {
  Labels out;
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

Labels SpaceLayout::complement(const Labels& labels) const {
  for (const auto& l : labels) position(l);
  Labels out;
  for (const auto& f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) out.push_back(f.label);
  return out;
}

SpaceLayout SpaceLayout::appended(Factor f) const {
  auto fs = factors_;
  fs.push_back(std::move(f));
  return SpaceLayout(std::move(fs));
}

SpaceLayout SpaceLayout::prepended(Factor f) const {
  std::vector<Factor> fs{std::move(f)};
  fs.insert(fs.end(), factors_.begin(), factors_.end());
  return SpaceLayout(std::move(fs));
}

SpaceLayout SpaceLayout::select(const Labels& labels) const {
  std::vector<Factor> fs;
  for (const auto& l : labels) fs.push_back(factors_[position(l)]);
  return SpaceLayout(std::move(fs));
}

FactorSplit::FactorSplit(const SpaceLayout& layout, const Labels& acting) {
  const auto& fs = layout.factors();
  const std::size_t n = fs.size();
  std::vector<Index> dims(n);
  for (std::size_t k = 0; k < n; ++k) dims[k] = fs[k].dim;

  std::vector<std::size_t> acting_pos;
  std::vector<bool> is_acting(n, false);
  for (const auto& l : acting) {
    std::size_t p = layout.position(l);
    require(!is_acting[p], "factor '" + l + "' listed twice");
    is_acting[p] = true;
    acting_pos.push_back(p);
    acting_dim_ *= dims[p];
  }
  rest_dim_ = layout.dim() / acting_dim_;

  table_.assign(static_cast<std::size_t>(layout.dim()), 0);
  std::vector<Index> dig(n);
  for (Index idx = 0; idx < layout.dim(); ++idx) {
    digits_of(idx, dims, dig);
    Index a = 0;
    for (std::size_t p : acting_pos) a = a * dims[p] + dig[p];
    Index r = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (!is_acting[k]) r = r * dims[k] + dig[k];
    table_[static_cast<std::size_t>(r * acting_dim_ + a)] = idx;
  }
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  require(m.allFinite(), std::string(what) + " has non-finite entries");
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& m, double tol) { return unitarity_defect(m) <= tol; }

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require(m.rows() == m.cols() && m.rows() > 0, "Hermitian matrix must be square and non-empty");
  require_finite(m, "Hermitian matrix");
  require(hermiticity_defect(m) <= tol, "matrix is not Hermitian within tolerance");
  m_ = (m + m.adjoint()) / 2.0;
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol_psd, double tol_tr) : h_(m) {
  require(min_eigenvalue(h_.matrix()) >= -tol_psd, "density matrix is not positive semidefinite");
  require(std::abs(h_.matrix().trace().real() - 1.0) <= tol_tr, "density matrix does not have unit trace");
}

UnitaryMatrix::UnitaryMatrix(const ComplexMatrix& m, double tol) {
  require(m.rows() == m.cols() && m.rows() > 0, "unitary must be square and non-empty");
  require_finite(m, "unitary");
  require(unitarity_defect(m) <= tol, "matrix is not unitary within tolerance");
  m_ = m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, const SpaceLayout& layout, const Labels& traced) {
  require(a.rows() == layout.dim() && a.cols() == layout.dim(), "partial_trace: dimension does not match layout");
  FactorSplit split(layout, traced);
  const Index kd = split.rest_dim();
  const Index td = split.acting_dim();
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (Index r1 = 0; r1 < kd; ++r1)
    for (Index r2 = 0; r2 < kd; ++r2) {
      cplx s = 0.0;
      for (Index t = 0; t < td; ++t) s += a(split.full(r1, t), split.full(r2, t));
      out(r1, r2) = s;
    }
  return out;
}

ComplexMatrix embed_lift(const ComplexMatrix& a, const Labels& acting, const SpaceLayout& layout) {
  FactorSplit split(layout, acting);
  require(a.rows() == split.acting_dim() && a.cols() == split.acting_dim(),
          "embed_lift: operator dimension does not match acting factors");
  ComplexMatrix out = ComplexMatrix::Zero(layout.dim(), layout.dim());
  for (Index r = 0; r < split.rest_dim(); ++r)
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) out(split.full(r, i), split.full(r, j)) = a(i, j);
  return out;
}

ComplexVector apply_lifted(const ComplexMatrix& a, const Labels& acting, const SpaceLayout& layout,
                           const ComplexVector& v) {
  FactorSplit split(layout, acting);
  require(a.rows() == split.acting_dim() && a.cols() == split.acting_dim(),
          "apply_lifted: operator dimension does not match acting factors");
  require(v.size() == layout.dim(), "apply_lifted: vector dimension does not match layout");
  ComplexVector out(v.size());
  ComplexVector piece(a.cols());
  for (Index r = 0; r < split.rest_dim(); ++r) {
    for (Index j = 0; j < a.cols(); ++j) piece(j) = v(split.full(r, j));
    ComplexVector img = a * piece;
    for (Index i = 0; i < a.rows(); ++i) out(split.full(r, i)) = img(i);
  }
  return out;
}

ComplexMatrix permute_factors(const ComplexMatrix& a, const SpaceLayout& layout, const Labels& order) {
  require(order.size() == layout.size(), "permute_factors: order must list every factor");
  require(a.rows() == layout.dim() && a.cols() == layout.dim(), "permute_factors: dimension mismatch");
  FactorSplit split(layout, order);
  ComplexMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = a(split.full(0, i), split.full(0, j));
  return out;
}

ComplexVector permute_factors(const ComplexVector& v, const SpaceLayout& layout, const Labels& order) {
  require(order.size() == layout.size(), "permute_factors: order must list every factor");
  require(v.size() == layout.dim(), "permute_factors: dimension mismatch");
  FactorSplit split(layout, order);
  ComplexVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = v(split.full(0, i));
  return out;
}

Norms norms(const ComplexMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.sum(), s.size() ? s(0) : 0.0};
}

double trace_norm(const ComplexMatrix& a) { return norms(a).trace_norm; }
double spectral_norm(const ComplexMatrix& a) { return norms(a).spectral_norm; }

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "hs_inner: dimension mismatch");
  return (a.conjugate().cwiseProduct(b)).sum();
}

HermitianEigen eigh(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), "eigh: matrix must be square");
  ComplexMatrix sym = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return eigh(a).values(0);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  auto e = eigh(a);
  RealVector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

double fidelity(const ComplexMatrix& x, const ComplexMatrix& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), "fidelity: dimension mismatch");
  HermitianMatrix hx(x), hy(y);
  require(min_eigenvalue(hx.matrix()) >= -kTolPsd && min_eigenvalue(hy.matrix()) >= -kTolPsd,
          "fidelity: arguments must be positive semidefinite");
  return trace_norm(psd_sqrt(hx.matrix()) * psd_sqrt(hy.matrix()));
}

JordanParts jordan_decompose(const ComplexMatrix& k) {
  HermitianMatrix h(k);
  auto e = eigh(h.matrix());
  RealVector pos = e.values.cwiseMax(0.0);
  RealVector neg = (-e.values).cwiseMax(0.0);
  return {e.vectors * pos.asDiagonal() * e.vectors.adjoint(), e.vectors * neg.asDiagonal() * e.vectors.adjoint()};
}

Index numerical_rank(const ComplexMatrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

ComplexVector purify(const ComplexMatrix& x, Index env_dim) {
  require(env_dim >= 1, "purify: environment dimension must be positive");
  HermitianMatrix h(x);
  require(min_eigenvalue(h.matrix()) >= -kTolPsd, "purify: matrix must be positive semidefinite");
  const Index n = h.dim();
  auto e = eigh(h.matrix());
  const double top = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
  // Eigenvalues ascend, so the significant ones are at the tail.
  std::vector<Index> keep;
  for (Index k = n - 1; k >= 0; --k)
    if (top > 0.0 && e.values(k) > 1e-10 * top) keep.push_back(k);
  require(static_cast<Index>(keep.size()) <= env_dim,
          "purification impossible: environment dimension " + std::to_string(env_dim) + " below numerical rank " +
              std::to_string(keep.size()));
  ComplexVector v = ComplexVector::Zero(n * env_dim);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const Index k = keep[j];
    const double w = std::sqrt(e.values(k));
    for (Index i = 0; i < n; ++i) v(i * env_dim + static_cast<Index>(j)) += w * e.vectors(i, k);
  }
  return v;
}

ComplexMatrix connecting_unitary(const ComplexVector& u, const ComplexVector& v, const SpaceLayout& layout,
                                 const Labels& env, double tol_match) {
  require(u.size() == layout.dim() && v.size() == layout.dim(), "connecting_unitary: dimension mismatch");
  FactorSplit split(layout, env);
  const Index rd = split.rest_dim();
  const Index ed = split.acting_dim();
  ComplexMatrix um(rd, ed), vm(rd, ed);
  for (Index r = 0; r < rd; ++r)
    for (Index e = 0; e < ed; ++e) {
      um(r, e) = u(split.full(r, e));
      vm(r, e) = v(split.full(r, e));
    }
  const double diff = (um * um.adjoint() - vm * vm.adjoint()).norm();
  require(diff <= tol_match, "connecting_unitary: reduced states differ by " + std::to_string(diff));
  // (I (x) U) u corresponds to um * U^T; maximise Re Tr(conj(U) um* vm).
  ComplexMatrix m = um.adjoint() * vm;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV().conjugate() * svd.matrixU().transpose();
}

RealVector real_embed(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), "real_embed: matrix must be square");
  const Index n = a.rows();
  RealVector x(n * n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) x(p++) = a(i, i).real();
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const cplx z = (a(i, j) + std::conj(a(j, i))) / 2.0;
      x(p++) = r2 * z.real();
      x(p++) = r2 * z.imag();
    }
  return x;
}

ComplexMatrix real_unembed(const RealVector& x, Index dim) {
  require(x.size() == dim * dim, "real_unembed: vector length must be dim^2");
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  Index p = 0;
  for (Index i = 0; i < dim; ++i) a(i, i) = x(p++);
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < dim; ++i)
    for (Index j = i + 1; j < dim; ++j) {
      const double re = x(p++) / r2;
      const double im = x(p++) / r2;
      a(i, j) = cplx(re, im);
      a(j, i) = cplx(re, -im);
    }
  return a;
}

StandardMeasurement ground_and_projectors(const SpaceLayout& layout, const std::string& output_label) {
  require(layout.dim_of(output_label) == 2, "output factor must have dimension 2");
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  StandardMeasurement m;
  m.ground = basis_vector(layout.dim(), 0);
  m.reject = embed_lift(zero, {output_label}, layout);
  m.accept = ComplexMatrix::Identity(layout.dim(), layout.dim()) - m.reject;
  return m;
}

ComplexMatrix round_to_bits(const ComplexMatrix& a, int t) {
  require(t >= 0 && t <= 52, "round_to_bits: t must lie in [0, 52]");
  auto rnd = [t](double x) { return std::ldexp(std::nearbyint(std::ldexp(x, t)), -t); };
  ComplexMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = cplx(rnd(a(i, j).real()), rnd(a(i, j).imag()));
  return out;
}

ComplexMatrix outer(const ComplexVector& u) { return u * u.adjoint(); }

ComplexVector basis_vector(Index dim, Index i) {
  require(i >= 0 && i < dim, "basis_vector: index out of range");
  ComplexVector e = ComplexVector::Zero(dim);
  e(i) = 1.0;
  return e;
}

}  // namespace refgame
