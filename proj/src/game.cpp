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

#include "refgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace refgame {
namespace {

using detail::require;

bool has(const Labels& l, const std::string& s) { return std::find(l.begin(), l.end(), s) != l.end(); }

std::string fresh_label(const SpaceLayout& layout, std::string base) {
  while (layout.contains(base)) base += "'";
  return base;
}

Labels layout_ordered(const SpaceLayout& layout, const Labels& labels) {
  Labels out;
  for (const auto& l : layout.labels())
    if (has(labels, l)) out.push_back(l);
  return out;
}

// Applies a lifted operator to every column.
ComplexMatrix apply_columns(const ComplexMatrix& a, const Labels& acting, const SpaceLayout& layout,
                            const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) out.col(c) = apply_lifted(a, acting, layout, m.col(c));
  return out;
}

void check_prover(const Prover& p, std::size_t moves, Index msg_dim, const std::string& who) {
  require(p.env_dim >= 1, who + " private dimension must be positive");
  require(p.unitaries.size() == moves, who + " must supply " + std::to_string(moves) + " unitaries");
  for (const auto& u : p.unitaries) {
    require(u.rows() == msg_dim * p.env_dim && u.cols() == msg_dim * p.env_dim,
            who + " unitary has the wrong dimension");
    require(is_unitary(u), who + " matrix is not unitary");
  }
}

// Y_{r1} V_{r1-1} ... Y_1 V_0 on the layout followed by the yes-prover's factor.
ComplexMatrix yes_circuit(const DqipVerifier& v, const Prover& yes) {
  RoundSequence seq = v.yes_sequence();
  check_prover(yes, v.r1(), v.layout.dim_of(v.yes_message), "yes-prover");
  const SpaceLayout full = prover_layout(seq, yes.env_dim);
  const Labels acting = prover_labels(seq);
  const Labels base = v.layout.labels();
  ComplexMatrix c = ComplexMatrix::Identity(full.dim(), full.dim());
  for (std::size_t i = 0; i < v.r1(); ++i) {
    c = apply_columns(v.yes_rounds[i], base, full, c);
    c = apply_columns(yes.unitaries[i], acting, full, c);
  }
  return c;
}

}  // namespace

Labels DqipVerifier::private_labels() const {
  Labels l = layout.complement(yes_message);
  Labels out;
  for (const auto& x : l)
    if (!has(no_message, x)) out.push_back(x);
  return out;
}

void DqipVerifier::validate() const {
  require(layout.size() > 0, "verifier layout is empty");
  require(!yes_message.empty(), "verifier needs a yes-message factor");
  require(!no_message.empty(), "verifier needs a no-message factor");
  for (const auto& l : yes_message) {
    layout.position(l);
    require(!has(no_message, l), "factor '" + l + "' cannot belong to both provers");
  }
  for (const auto& l : no_message) layout.position(l);
  require(layout.contains(output), "unknown output factor '" + output + "'");
  require(has(private_labels(), output), "output factor must be private to the verifier");
  require(layout.dim_of(output) == 2, "output factor must be a qubit");
  require(yes_rounds.size() >= 2, "verifier needs at least one yes-prover move");
  const Index d = layout.dim();
  for (const auto* list : {&yes_rounds, &no_rounds})
    for (const auto& m : *list) {
      require(m.rows() == d && m.cols() == d, "verifier round dimension does not match the layout");
      require_finite(m, "verifier round");
      require(is_unitary(m), "verifier rounds must be unitary");
    }
}

RoundSequence DqipVerifier::yes_sequence() const {
  return RoundSequence(yes_rounds, layout, layout.complement(yes_message), yes_message);
}

ComplexMatrix output_projector(const SpaceLayout& layout, const std::string& output, int value) {
  require(value == 0 || value == 1, "output value must be 0 or 1");
  require(layout.dim_of(output) == 2, "output factor must be a qubit");
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(value, value) = 1.0;
  return embed_lift(p, {output}, layout);
}

RoundSequence no_prover_sequence(const DqipVerifier& v, const ComplexMatrix& c, Index yes_env) {
  const SpaceLayout full = prover_layout(v.yes_sequence(), yes_env);
  require(c.rows() == full.dim() && c.cols() == full.dim(), "yes circuit dimension mismatch");
  const Labels base = v.layout.labels();
  const ComplexMatrix rej = output_projector(full, v.output, 0);
  std::vector<ComplexMatrix> m;
  m.push_back(apply_columns(v.yes_rounds.back(), base, full, c));
  for (const auto& w : v.no_rounds) m.push_back(embed_lift(w, base, full));
  m.back() = rej * m.back();
  return RoundSequence(m, full, full.complement(v.no_message), v.no_message);
}

RoundSequence rejection_sequence(const DqipVerifier& v, const Prover& yes) {
  v.validate();
  return no_prover_sequence(v, yes_circuit(v, yes), yes.env_dim);
}

RoundSequence acceptance_sequence(const DqipVerifier& v, const Prover& no) {
  v.validate();
  check_prover(no, v.r2(), v.layout.dim_of(v.no_message), "no-prover");
  const SpaceLayout full = v.layout.appended({fresh_label(v.layout, "N"), no.env_dim});
  Labels acting = layout_ordered(v.layout, v.no_message);
  acting.push_back(full.factors().back().label);
  const Labels base = v.layout.labels();
  std::vector<ComplexMatrix> m;
  for (std::size_t i = 0; i < v.r1(); ++i) m.push_back(embed_lift(v.yes_rounds[i], base, full));
  ComplexMatrix last = embed_lift(v.yes_rounds.back(), base, full);
  for (std::size_t j = 0; j < v.r2(); ++j) {
    last = apply_columns(no.unitaries[j], acting, full, last);
    last = apply_columns(v.no_rounds[j], base, full, last);
  }
  m.push_back(output_projector(full, v.output, 1) * last);
  return RoundSequence(m, full, full.complement(v.yes_message), v.yes_message);
}

OptResult qrg_value_given_yes(const DqipVerifier& v, const Prover& yes, double epsilon) {
  return solve_opt(rejection_sequence(v, yes), epsilon);
}

OptResult yes_value_given_no(const DqipVerifier& v, const Prover& no, double epsilon) {
  return solve_opt(acceptance_sequence(v, no), epsilon);
}

SepOutput sep_oracle(const WinSetParams& w, const ComplexMatrix& x, double epsilon, const SepOptions& opts) {
  const DqipVerifier& v = w.verifier;
  v.validate();
  require(epsilon > 0.0, "epsilon must be positive");
  const Index d = v.layout.dim();
  const std::size_t r1 = v.r1();
  const Index n = static_cast<Index>(r1 + 1) * d;
  require(x.rows() == n && x.cols() == n, "stacked transcript has the wrong dimension");
  SepOutput out;
  out.epsilon = epsilon;
  out.objective = std::numeric_limits<double>::quiet_NaN();

  // Step 1: a negative eigenvalue gives the cut -uu*.
  double worst = -kTolPsd;
  for (std::size_t k = 1; k <= r1; ++k) {
    const Index off = static_cast<Index>(k) * d;
    auto e = eigh(x.block(off, off, d, d));
    if (e.values(0) < worst) {
      worst = e.values(0);
      ComplexVector u = ComplexVector::Zero(n);
      u.segment(off, d) = e.vectors.col(0);
      out.kind = SepOutput::Kind::hyperplane;
      out.h = -outer(u);
      out.margin = -e.values(0);
      out.psd_cut = true;
    }
  }
  if (out.psd_cut) return out;

  // Step 2: a yes-prover producing x.
  RoundSequence yes_seq = v.yes_sequence();
  Transcript t;
  for (std::size_t k = 1; k <= r1; ++k) {
    const Index off = static_cast<Index>(k) * d;
    t.snapshots.push_back(x.block(off, off, d, d));
  }
  Prover yes = transcript_to_prover(yes_seq, t, epsilon / 4.0);
  ComplexMatrix c = yes_circuit(v, yes);
  if (opts.precision_bits > 0) c = round_to_bits(c, opts.precision_bits);

  // Step 3: the best no-prover against it.
  RoundSequence inner = no_prover_sequence(v, c, yes.env_dim);
  OptResult opt = solve_opt(inner, epsilon / 2.0);
  out.objective = opt.value;
  if (opt.value <= w.c) {
    out.kind = SepOutput::Kind::near_feasible;
    return out;
  }

  // Step 4: D*D for that no-prover, compressed to |0_N>.
  Prover no = transcript_to_prover(inner, opt.transcript, std::max(epsilon / 8.0, kTolConsistency));
  const SpaceLayout full = v.layout.appended({fresh_label(v.layout, "N"), no.env_dim});
  Labels acting = layout_ordered(v.layout, v.no_message);
  acting.push_back(full.factors().back().label);
  const Labels base = v.layout.labels();
  ComplexMatrix dm = ComplexMatrix::Zero(full.dim(), d);
  for (Index i = 0; i < d; ++i) dm(i * no.env_dim, i) = 1.0;
  dm = apply_columns(v.yes_rounds.back(), base, full, dm);
  for (std::size_t j = 0; j < v.r2(); ++j) {
    dm = apply_columns(no.unitaries[j], acting, full, dm);
    dm = apply_columns(v.no_rounds[j], base, full, dm);
  }
  dm = output_projector(full, v.output, 0) * dm;
  if (opts.precision_bits > 0) dm = round_to_bits(dm, opts.precision_bits);
  ComplexMatrix block = dm.adjoint() * dm;
  block = (block + block.adjoint()).eval() / 2.0;
  const double scale = block.norm();
  if (!(scale > 0.0)) throw NumericalError("separating hyperplane vanished");
  out.kind = SepOutput::Kind::hyperplane;
  out.h = ComplexMatrix::Zero(n, n);
  out.h.bottomRightCorner(d, d) = block / scale;
  out.margin = std::max(0.0, (hs_inner(block, t.snapshots.back()).real() - w.c) / scale);
  return out;
}

std::size_t ellipsoid_iteration_cap(Index n, double radius_big, double radius_small) {
  require(radius_big > radius_small && radius_small > 0.0, "ellipsoid radii must satisfy R > r > 0");
  require(n >= 1, "ellipsoid dimension must be positive");
  const double nn = static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(2.0 * nn * (nn + 1.0) * std::log(radius_big / radius_small)));
}

EllipsoidResult ellipsoid_feasibility(Index n, double radius_big, double radius_small, const EllipsoidOracle& oracle,
                                      const EllipsoidOptions& opts) {
  const std::size_t cap =
      opts.max_iterations ? opts.max_iterations : ellipsoid_iteration_cap(n, radius_big, radius_small);
  const double nn = static_cast<double>(n);
  EllipsoidResult res;
  RealVector center = RealVector::Zero(n);
  RealMatrix shape = radius_big * radius_big * RealMatrix::Identity(n, n);
  double logvol = nn * std::log(radius_big);
  auto breakdown = [&](const std::string& why) {
    std::ostringstream os;
    os << "ellipsoid breakdown at iteration " << res.iterations << ": " << why << "; trace:";
    const std::size_t from = res.log.size() > 5 ? res.log.size() - 5 : 0;
    for (std::size_t i = from; i < res.log.size(); ++i)
      os << " [" << res.log[i].iteration << " " << res.log[i].kind << " " << res.log[i].log_volume << "]";
    throw NumericalError(os.str());
  };
  for (std::size_t it = 1; it <= cap; ++it) {
    res.iterations = it;
    EllipsoidAnswer ans = oracle(center);
    if (ans.near_feasible) {
      res.log.push_back({it, ans.label.empty() ? "near_feasible" : ans.label, ans.objective, logvol});
      res.feasible = true;
      res.point = center;
      return res;
    }
    require(ans.g.size() == n, "oracle gradient has the wrong dimension");
    if (ans.g.norm() <= 1e-12 && ans.margin > 0.0) {
      // The cut is constant on the whole space and excludes it.
      res.log.push_back({it, "empty_cut", ans.objective, logvol});
      return res;
    }
    const RealVector bg = shape * ans.g;
    const double gbg = ans.g.dot(bg);
    if (!std::isfinite(gbg)) breakdown("non-finite cut direction");
    if (!(gbg > 0.0)) breakdown("degenerate cut direction");
    const RealVector b = bg / std::sqrt(gbg);
    double alpha = 0.0;
    if (opts.deep_cut) {
      alpha = std::max(0.0, ans.margin / std::sqrt(gbg));
      if (alpha >= 1.0) {
        // The cut misses the ellipsoid entirely.
        res.log.push_back({it, "empty_cut", ans.objective, logvol});
        return res;
      }
      alpha = std::min(alpha, 0.9);
    }
    if (n == 1) {
      center -= 0.5 * (1.0 + alpha) * b;
      shape *= 0.25 * (1.0 - alpha) * (1.0 - alpha);
    } else {
      const double tau = (1.0 + nn * alpha) / (nn + 1.0);
      const double delta = nn * nn * (1.0 - alpha * alpha) / (nn * nn - 1.0);
      const double sigma = 2.0 * (1.0 + nn * alpha) / ((nn + 1.0) * (1.0 + alpha));
      center -= tau * b;
      shape = delta * (shape - sigma * b * b.transpose());
    }
    shape = (shape + shape.transpose()).eval() / 2.0;
    if (!shape.allFinite() || !center.allFinite()) breakdown("non-finite ellipsoid");
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(shape, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues()(0);
    if (lmin < radius_small * radius_small) {
      // The shortest semi-axis is below r, so no r-ball fits inside.
      res.log.push_back({it, "width_collapse", ans.objective, logvol});
      return res;
    }
    logvol = 0.5 * eig.eigenvalues().array().log().sum();
    res.log.push_back({it, ans.label.empty() ? "cut" : ans.label, ans.objective, logvol});
  }
  return res;
}

TranscriptCoordinates::TranscriptCoordinates(const RoundSequence& rounds) : rounds_(rounds) {
  require(rounds.rounds() >= 1, "transcript coordinates need at least one prover move");
  const Index d = rounds.dim();
  const std::size_t r = rounds.rounds();
  stacked_dim_ = static_cast<Index>(r + 1) * d;
  faces_ = consistency_faces(rounds);
  Index total = 0;
  for (const auto& q : faces_) {
    offsets_.push_back(total);
    total += q.cols() * q.cols();
  }
  offsets_.push_back(total);
  const Index df = rounds.kept_dim();
  const Index rows = static_cast<Index>(r) * df * df;
  auto marginal = [&](const ComplexMatrix& m) { return partial_trace(m, rounds.layout, rounds.traced); };

  RealMatrix l = RealMatrix::Zero(rows, total);
  RealVector b = RealVector::Zero(rows);
  {
    const ComplexVector first = rounds.matrices[0].col(0);
    b.segment(0, df * df) = real_embed(marginal(outer(first)));
  }
  for (std::size_t k = 0; k < r; ++k) {
    const Index m = faces_[k].cols();
    for (Index j = 0; j < m * m; ++j) {
      ComplexMatrix x = faces_[k] * real_unembed(RealVector::Unit(m * m, j), m) * faces_[k].adjoint();
      const Index col = offsets_[k] + j;
      l.block(static_cast<Index>(k) * df * df, col, df * df, 1) = real_embed(marginal(x));
      if (k + 1 < r) {
        const auto& a = rounds.matrices[k + 1];
        l.block(static_cast<Index>(k + 1) * df * df, col, df * df, 1) = -real_embed(marginal(a * x * a.adjoint()));
      }
    }
  }
  Eigen::JacobiSVD<RealMatrix> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  const double top = sv.size() ? sv(0) : 0.0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * std::max(top, 1.0)) ++rank;
  particular_ = RealVector::Zero(total);
  for (Index i = 0; i < rank; ++i) particular_ += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / sv(i));
  if ((l * particular_ - b).norm() > 1e-8) throw NumericalError("consistency equalities have no solution on the face");
  null_basis_ = svd.matrixV().rightCols(total - rank);
}

ComplexMatrix TranscriptCoordinates::stacked(const RealVector& y) const {
  require(y.size() == dim(), "coordinate vector has the wrong dimension");
  const RealVector s = particular_ + null_basis_ * y;
  const Index d = rounds_.dim();
  ComplexMatrix x = ComplexMatrix::Zero(stacked_dim_, stacked_dim_);
  x(0, 0) = 1.0;
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    const Index m = faces_[k].cols();
    ComplexMatrix sigma = real_unembed(s.segment(offsets_[k], m * m), m);
    x.block(static_cast<Index>(k + 1) * d, static_cast<Index>(k + 1) * d, d, d) =
        faces_[k] * sigma * faces_[k].adjoint();
  }
  return x;
}

RealVector TranscriptCoordinates::face_vector(const ComplexMatrix& x) const {
  require(x.rows() == stacked_dim_ && x.cols() == stacked_dim_, "stacked matrix has the wrong dimension");
  const Index d = rounds_.dim();
  RealVector f(offsets_.back());
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    const Index m = faces_[k].cols();
    ComplexMatrix blk = x.block(static_cast<Index>(k + 1) * d, static_cast<Index>(k + 1) * d, d, d);
    ComplexMatrix c = faces_[k].adjoint() * blk * faces_[k];
    f.segment(offsets_[k], m * m) = real_embed((c + c.adjoint()) / 2.0);
  }
  return f;
}

RealVector TranscriptCoordinates::gradient(const ComplexMatrix& h) const {
  return null_basis_.transpose() * face_vector(h);
}

RealVector TranscriptCoordinates::coordinates(const ComplexMatrix& x) const {
  return null_basis_.transpose() * (face_vector(x) - particular_);
}

DecideResult decide_dqip(const DqipVerifier& v, double c, double s, const DecideOptions& opts) {
  v.validate();
  require(c >= 0.0 && c <= 1.0 && s >= 0.0 && s <= 1.0, "error bounds must lie in [0, 1]");
  require(1.0 - c - s > 0.0, "decide_dqip needs 1 - c - s > 0");
  DecideResult res;
  res.epsilon = 1.0 - c - s;
  res.c_prime = c + res.epsilon / 2.0;
  TranscriptCoordinates coords(v.yes_sequence());
  res.coordinates = coords.dim();
  res.radius_big = std::sqrt(static_cast<double>(coords.stacked_dim()));
  res.radius_small = res.epsilon / (16.0 * static_cast<double>(coords.stacked_dim()));
  const WinSetParams params{v, res.c_prime};
  SepOptions so;
  so.precision_bits = opts.precision_bits;
  const double acc = res.epsilon / 4.0;

  if (coords.dim() == 0) {
    // A single consistent transcript: test it directly.
    const ComplexMatrix x = coords.stacked(RealVector());
    SepOutput out = sep_oracle(params, x, acc, so);
    res.accept = out.kind == SepOutput::Kind::near_feasible;
    res.ellipsoid.feasible = res.accept;
    res.ellipsoid.iterations = 1;
    res.ellipsoid.log.push_back(
        {1, res.accept ? "near_feasible" : (out.psd_cut ? "psd_cut" : "value_cut"), out.objective, 0.0});
    if (res.accept) res.witness = x;
    return res;
  }

  res.iteration_cap = opts.max_iterations ? opts.max_iterations
                                          : ellipsoid_iteration_cap(coords.dim(), res.radius_big, res.radius_small);
  EllipsoidOracle oracle = [&](const RealVector& y) {
    SepOutput out = sep_oracle(params, coords.stacked(y), acc, so);
    EllipsoidAnswer ans;
    ans.objective = out.objective;
    if (out.kind == SepOutput::Kind::near_feasible) {
      ans.near_feasible = true;
      ans.label = "near_feasible";
      return ans;
    }
    ans.g = coords.gradient(out.h);
    ans.margin = out.margin;
    ans.label = out.psd_cut ? "psd_cut" : "value_cut";
    return ans;
  };
  EllipsoidOptions eo;
  eo.deep_cut = opts.deep_cut;
  eo.max_iterations = res.iteration_cap;
  res.ellipsoid = ellipsoid_feasibility(coords.dim(), res.radius_big, res.radius_small, oracle, eo);
  res.accept = res.ellipsoid.feasible;
  if (res.accept) res.witness = coords.stacked(res.ellipsoid.point);
  return res;
}

}  // namespace refgame
