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

// Dense complex linear algebra on labelled tensor-product spaces.
//
// Index convention: a space with factors (f_1, ..., f_k) is ordered as the
// Kronecker product f_1 (x) ... (x) f_k, i.e. the first factor is the most
// significant digit of a basis index.

#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "refgame/error.hpp"

namespace refgame {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Labels = std::vector<std::string>;

inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolPsd = 1e-9;
inline constexpr double kTolTrace = 1e-9;
inline constexpr double kTolUnitary = 1e-9;

struct Factor {
  std::string label;
  Index dim = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered list of labelled tensor factors.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  Index dim() const { return dim_; }
  std::size_t size() const { return factors_.size(); }
  bool contains(std::string_view label) const;
  std::size_t position(std::string_view label) const;
  Index dim_of(std::string_view label) const;
  Index dim_of(const Labels& labels) const;
  Labels labels() const;
  /// Labels of the layout that are not in `labels`, in layout order.
  Labels complement(const Labels& labels) const;
  SpaceLayout appended(Factor f) const;
  SpaceLayout prepended(Factor f) const;
  /// Sub-layout made of the listed factors, in the listed order.
  SpaceLayout select(const Labels& labels) const;

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;

 private:
  std::vector<Factor> factors_;
  Index dim_ = 1;
};

/// Index bookkeeping for operators acting on a subset of factors.
///
/// `full(rest, a)` is the basis index of the whole space whose digits on the
/// acting factors (taken in the order given) encode `a` and whose remaining
/// digits (in layout order) encode `rest`.
class FactorSplit {
 public:
  FactorSplit(const SpaceLayout& layout, const Labels& acting);

  Index acting_dim() const { return acting_dim_; }
  Index rest_dim() const { return rest_dim_; }
  Index full(Index rest, Index a) const { return table_[static_cast<std::size_t>(rest * acting_dim_ + a)]; }

 private:
  Index acting_dim_ = 1;
  Index rest_dim_ = 1;
  std::vector<Index> table_;
};

// Validated wrappers. Each stores the matrix it was built from; the Hermitian
// family stores the symmetrized matrix (A + A*)/2.

class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kTolHerm);
  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, double tol_psd = kTolPsd, double tol_tr = kTolTrace);
  const ComplexMatrix& matrix() const { return h_.matrix(); }
  const HermitianMatrix& hermitian() const { return h_; }
  Index dim() const { return h_.dim(); }

 private:
  HermitianMatrix h_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(const ComplexMatrix& m, double tol = kTolUnitary);
  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

// Checks used by the wrappers, exposed for callers validating raw matrices.
void require_finite(const ComplexMatrix& m, std::string_view what);
double hermiticity_defect(const ComplexMatrix& m);
double unitarity_defect(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& m, double tol = kTolUnitary);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

ComplexMatrix partial_trace(const ComplexMatrix& a, const SpaceLayout& layout, const Labels& traced);

/// Operator equal to `a` on the acting factors (in the listed order) and the
/// identity on every other factor of `layout`.
ComplexMatrix embed_lift(const ComplexMatrix& a, const Labels& acting, const SpaceLayout& layout);

/// embed_lift(a, acting, layout) * v without forming the lifted matrix.
ComplexVector apply_lifted(const ComplexMatrix& a, const Labels& acting, const SpaceLayout& layout,
                           const ComplexVector& v);

/// Re-expresses an operator on `layout` in the factor order `order`.
ComplexMatrix permute_factors(const ComplexMatrix& a, const SpaceLayout& layout, const Labels& order);
ComplexVector permute_factors(const ComplexVector& v, const SpaceLayout& layout, const Labels& order);

struct Norms {
  double trace_norm = 0.0;
  double spectral_norm = 0.0;
};

Norms norms(const ComplexMatrix& a);
double trace_norm(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Spectrum of the symmetrized matrix, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};
HermitianEigen eigh(const ComplexMatrix& a);
double min_eigenvalue(const ComplexMatrix& a);
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

double fidelity(const ComplexMatrix& x, const ComplexMatrix& y);

struct JordanParts {
  ComplexMatrix plus;
  ComplexMatrix minus;
};
JordanParts jordan_decompose(const ComplexMatrix& k);

/// Number of singular values above `rel_tol` times the largest one.
Index numerical_rank(const ComplexMatrix& a, double rel_tol = 1e-10);

/// Vector v on (space of x) (x) env with Tr_env(vv*) = x.
ComplexVector purify(const ComplexMatrix& x, Index env_dim);

/// Unitary U on the env factors (in the listed order) minimising
/// ||(I (x) U) u - v||. Throws if the reduced states on the other factors
/// differ by more than `tol_match` in Frobenius norm.
ComplexMatrix connecting_unitary(const ComplexVector& u, const ComplexVector& v, const SpaceLayout& layout,
                                 const Labels& env, double tol_match = 1e-6);

/// Isometry from Hermitian n x n matrices onto R^{n^2}: diagonal entries
/// first, then sqrt(2) Re and sqrt(2) Im of each upper off-diagonal entry.
RealVector real_embed(const ComplexMatrix& a);
ComplexMatrix real_unembed(const RealVector& x, Index dim);

struct StandardMeasurement {
  ComplexVector ground;
  ComplexMatrix accept;
  ComplexMatrix reject;
};
StandardMeasurement ground_and_projectors(const SpaceLayout& layout, const std::string& output_label);

/// Rounds real and imaginary parts to the nearest multiple of 2^-t.
ComplexMatrix round_to_bits(const ComplexMatrix& a, int t);

ComplexMatrix outer(const ComplexVector& u);
ComplexVector basis_vector(Index dim, Index i);

}  // namespace refgame
