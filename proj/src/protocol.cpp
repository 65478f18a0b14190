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

#include "refgame/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace refgame {
namespace {

using detail::require;

std::string fresh_label(const SpaceLayout& layout, std::string base) {
  while (layout.contains(base)) base += "'";
  return base;
}

Labels layout_ordered(const SpaceLayout& layout, const Labels& labels) {
  Labels out;
  for (const auto& l : layout.labels())
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) out.push_back(l);
  return out;
}

// Permutation matrix sending basis state i to f(i).
template <class F>
ComplexMatrix permutation(Index n, F f) {
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(f(i), i) = 1.0;
  return p;
}

std::string copy_label(const std::string& l, std::size_t j) { return l + "#" + std::to_string(j); }

}  // namespace

DqipVerifier build_close_images_verifier(const CloseImagesInstance& inst, Index max_dim) {
  const MixedCircuit& q0 = inst.q0;
  const MixedCircuit& q1 = inst.q1;
  require(q0.in_dim() == q1.in_dim() && q0.out_dim() == q1.out_dim(),
          "channels must share input and output dimensions");
  const Index in = q0.in_dim(), out = q0.out_dim();
  require(out % 2 == 0, "channel output dimension must be even to carry the returned bit");
  const Index env = std::max(q0.env_dim(), q1.env_dim());
  const SpaceLayout layout(
      {{"X0", in}, {"X1", in}, {"coin", 2}, {"O", out}, {"E", env}, {"out", 2}, {"B", out}});
  require(layout.dim() <= max_dim, "close-images verifier exceeds the dimension cap");
  const Index d = layout.dim();

  // U_i on (X_i, O, E) with the environment padded by identity blocks.
  auto padded = [&](const MixedCircuit& q) {
    const Index e = q.env_dim();
    const Index n = in * out * env;
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    auto full = [&](Index f, Index g, Index h) { return (f * out + g) * env + h; };
    const Index m = in * out * e;
    for (Index a = 0; a < m; ++a) {
      const Index fa = a / (out * e), ga = (a / e) % out, ha = a % e;
      for (Index b = 0; b < m; ++b) {
        const Index fb = b / (out * e), gb = (b / e) % out, hb = b % e;
        u(full(fa, ga, ha), full(fb, gb, hb)) = q.stinespring()(a, b);
      }
    }
    return u;
  };
  ComplexMatrix had(2, 2);
  had << 1.0, 1.0, 1.0, -1.0;
  had /= std::sqrt(2.0);
  const ComplexMatrix p0 = ComplexMatrix::Identity(2, 2).col(0) * ComplexMatrix::Identity(2, 2).row(0);
  const ComplexMatrix p1 = ComplexMatrix::Identity(2, 2).col(1) * ComplexMatrix::Identity(2, 2).row(1);
  // |0><0| (x) U_0 + |1><1| (x) U_1.
  ComplexMatrix ctrl = embed_lift(kron(p0, padded(q0)), {"coin", "X0", "O", "E"}, layout) +
                       embed_lift(kron(p1, padded(q1)), {"coin", "X1", "O", "E"}, layout);
  ComplexMatrix swap_ob = permutation(out * out, [&](Index i) { return (i % out) * out + i / out; });
  ComplexMatrix v1 = embed_lift(swap_ob, {"O", "B"}, layout) * ctrl * embed_lift(had, {"coin"}, layout);
  // out ^= coin, then out ^= top bit of B.
  ComplexMatrix cnot_coin = permutation(4, [](Index i) { return (i & 2) ? (i ^ 1) : i; });
  ComplexMatrix cnot_b = permutation(out * 2, [&](Index i) { return (i / 2 >= out / 2) ? (i ^ 1) : i; });
  ComplexMatrix v2 = embed_lift(cnot_b, {"B", "out"}, layout) * embed_lift(cnot_coin, {"coin", "out"}, layout);

  DqipVerifier v;
  v.layout = layout;
  v.yes_message = {"X0", "X1"};
  v.no_message = {"B"};
  v.output = "out";
  v.yes_rounds = {ComplexMatrix::Identity(d, d), v1};
  v.no_rounds = {v2};
  v.validate();
  return v;
}

std::string to_string(Vote v) { return v == Vote::unanimous_accept ? "unanimous_accept" : "unanimous_reject"; }

Vote parse_vote(const std::string& s) {
  if (s == "unanimous_accept" || s == "accept") return Vote::unanimous_accept;
  if (s == "unanimous_reject" || s == "reject") return Vote::unanimous_reject;
  detail::fail_precondition("unknown vote '" + s + "'");
}

DqipVerifier parallel_repeat(const DqipVerifier& v, std::size_t k, Vote vote, Index max_dim) {
  v.validate();
  require(k >= 1, "parallel repetition needs k >= 1");
  std::vector<Factor> factors;
  DqipVerifier out;
  const Labels priv = v.private_labels();
  auto add_group = [&](const Labels& group, Labels* sink) {
    for (std::size_t j = 1; j <= k; ++j)
      for (const auto& l : layout_ordered(v.layout, group)) {
        factors.push_back({copy_label(l, j), v.layout.dim_of(l)});
        if (sink) sink->push_back(copy_label(l, j));
      }
  };
  add_group(v.yes_message, &out.yes_message);
  add_group(priv, nullptr);
  SpaceLayout probe(factors);
  const std::string vote_label = fresh_label(probe, "vote");
  factors.push_back({vote_label, 2});
  add_group(v.no_message, &out.no_message);
  double total = 1.0;
  for (const auto& f : factors) total *= static_cast<double>(f.dim);
  require(total <= static_cast<double>(max_dim), "repeated verifier exceeds the dimension cap");
  out.layout = SpaceLayout(factors);
  out.output = vote_label;

  const Labels base = v.layout.labels();
  auto copy_acting = [&](std::size_t j) {
    Labels l;
    for (const auto& b : base) l.push_back(copy_label(b, j));
    return l;
  };
  auto power = [&](const ComplexMatrix& m) {
    ComplexMatrix p = ComplexMatrix::Identity(out.layout.dim(), out.layout.dim());
    for (std::size_t j = 1; j <= k; ++j) p = embed_lift(m, copy_acting(j), out.layout) * p;
    return p;
  };
  for (const auto& m : v.yes_rounds) out.yes_rounds.push_back(power(m));
  for (const auto& m : v.no_rounds) out.no_rounds.push_back(power(m));

  // Vote circuit on (out#1, ..., out#k, vote).
  Labels vote_acting;
  for (std::size_t j = 1; j <= k; ++j) vote_acting.push_back(copy_label(v.output, j));
  vote_acting.push_back(vote_label);
  const Index all_ones = (Index{1} << k) - 1;
  const Index n = Index{1} << (k + 1);
  ComplexMatrix vc = permutation(n, [&](Index i) {
    const Index outs = i >> 1;
    const bool flip = vote == Vote::unanimous_accept ? outs == all_ones : outs != 0;
    return flip ? (i ^ 1) : i;
  });
  ComplexMatrix vl = embed_lift(vc, vote_acting, out.layout);
  if (out.no_rounds.empty())
    out.yes_rounds.back() = vl * out.yes_rounds.back();
  else
    out.no_rounds.back() = vl * out.no_rounds.back();
  out.validate();
  return out;
}

Prover repeat_prover(const Prover& p, const DqipVerifier& v, std::size_t k) {
  require(k >= 1, "k must be positive");
  Prover out;
  out.env_dim = 1;
  for (std::size_t j = 0; j < k; ++j) out.env_dim *= p.env_dim;
  if (p.unitaries.empty()) return out;
  const Index msg = p.unitaries.front().rows() / p.env_dim;
  // Per-copy factor order (m_1, h_1, ..., m_k, h_k) regrouped as (m_1..m_k, h_1..h_k).
  std::vector<Factor> f;
  Labels order;
  for (std::size_t j = 1; j <= k; ++j) {
    f.push_back({"m" + std::to_string(j), msg});
    f.push_back({"h" + std::to_string(j), p.env_dim});
  }
  for (std::size_t j = 1; j <= k; ++j) order.push_back("m" + std::to_string(j));
  for (std::size_t j = 1; j <= k; ++j) order.push_back("h" + std::to_string(j));
  const SpaceLayout pl(f);
  (void)v;
  for (const auto& u : p.unitaries) {
    ComplexMatrix t = u;
    for (std::size_t j = 1; j < k; ++j) t = kron(t, u);
    out.unitaries.push_back(permute_factors(t, pl, order));
  }
  return out;
}

double simulate(const DqipVerifier& v, const Prover& yes, const Prover& no) {
  v.validate();
  const Index dy = v.layout.dim_of(v.yes_message), dn = v.layout.dim_of(v.no_message);
  auto check = [](const Prover& p, std::size_t moves, Index msg, const std::string& who) {
    require(p.env_dim >= 1, who + " private dimension must be positive");
    require(p.unitaries.size() == moves, who + " has the wrong number of moves");
    for (const auto& u : p.unitaries) {
      require(u.rows() == msg * p.env_dim && u.cols() == msg * p.env_dim, who + " unitary has the wrong dimension");
      require(is_unitary(u), who + " matrix is not unitary");
    }
  };
  check(yes, v.r1(), dy, "yes-prover");
  check(no, v.r2(), dn, "no-prover");
  const std::string yl = fresh_label(v.layout, "Y");
  const SpaceLayout with_y = v.layout.prepended({yl, yes.env_dim});
  const std::string nl = fresh_label(with_y, "N");
  const SpaceLayout full = with_y.appended({nl, no.env_dim});
  Labels ya = layout_ordered(v.layout, v.yes_message);
  ya.push_back(yl);
  Labels na = layout_ordered(v.layout, v.no_message);
  na.push_back(nl);
  const Labels base = v.layout.labels();
  ComplexVector u = basis_vector(full.dim(), 0);
  for (std::size_t i = 0; i < v.r1(); ++i) {
    u = apply_lifted(v.yes_rounds[i], base, full, u);
    u = apply_lifted(yes.unitaries[i], ya, full, u);
  }
  u = apply_lifted(v.yes_rounds.back(), base, full, u);
  for (std::size_t j = 0; j < v.r2(); ++j) {
    u = apply_lifted(no.unitaries[j], na, full, u);
    u = apply_lifted(v.no_rounds[j], base, full, u);
  }
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return apply_lifted(p1, {v.output}, full, u).squaredNorm();
}

Prover mixture_prover(const std::vector<Prover>& provers, const std::vector<double>& weights) {
  require(!provers.empty() && provers.size() == weights.size(), "mixture needs one weight per prover");
  const std::size_t moves = provers.front().unitaries.size();
  Index emax = 1;
  Index msg = 0;
  double total = 0.0;
  for (std::size_t j = 0; j < provers.size(); ++j) {
    const auto& p = provers[j];
    require(p.unitaries.size() == moves, "mixed provers must have the same number of moves");
    require(weights[j] >= 0.0, "mixture weights must be nonnegative");
    total += weights[j];
    emax = std::max(emax, p.env_dim);
    if (moves) {
      const Index m = p.unitaries.front().rows() / p.env_dim;
      require(msg == 0 || msg == m, "mixed provers must share the message dimension");
      msg = m;
    }
  }
  require(total > 0.0, "mixture weights must not all vanish");
  const Index k = static_cast<Index>(provers.size());
  Prover out;
  out.env_dim = k * emax;
  if (moves == 0) return out;
  // Private space is (control, env); control starts in sum_j sqrt(w_j) |j>.
  ComplexVector amp(k);
  for (Index j = 0; j < k; ++j) amp(j) = std::sqrt(weights[static_cast<std::size_t>(j)] / total);
  ComplexMatrix basis(k, k + 1);
  basis << amp, ComplexMatrix::Identity(k, k);
  Eigen::HouseholderQR<ComplexMatrix> qr(basis);
  ComplexMatrix prep = qr.householderQ() * ComplexMatrix::Identity(k, k);
  const cplx phase = prep.col(0).dot(amp);
  prep.col(0) *= phase / std::abs(phase);
  const SpaceLayout pl({{"m", msg}, {"c", k}, {"e", emax}});
  for (std::size_t i = 0; i < moves; ++i) {
    ComplexMatrix u = ComplexMatrix::Zero(pl.dim(), pl.dim());
    for (Index j = 0; j < k; ++j) {
      const auto& p = provers[static_cast<std::size_t>(j)];
      const Index e = p.env_dim;
      // U_j padded to the larger environment by identity blocks, on (m, e).
      ComplexMatrix pad = ComplexMatrix::Identity(msg * emax, msg * emax);
      for (Index a = 0; a < msg * e; ++a)
        for (Index b = 0; b < msg * e; ++b) pad((a / e) * emax + a % e, (b / e) * emax + b % e) = p.unitaries[i](a, b);
      ComplexMatrix proj = ComplexMatrix::Zero(k, k);
      proj(j, j) = 1.0;
      u += embed_lift(kron(proj, pad), {"c", "m", "e"}, pl);
    }
    if (i == 0) u = u * embed_lift(prep, {"c"}, pl);
    out.unitaries.push_back(u);
  }
  return out;
}

Prover identity_prover(Index message_dim, Index env_dim, std::size_t moves) {
  Prover p;
  p.env_dim = env_dim;
  const Index n = message_dim * env_dim;
  for (std::size_t i = 0; i < moves; ++i) p.unitaries.push_back(ComplexMatrix::Identity(n, n));
  return p;
}

}  // namespace refgame
