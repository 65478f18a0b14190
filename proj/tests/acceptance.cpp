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

// Acceptance run: one PASS/FAIL line per criterion, each checked against an
// independent reference computation with pinned tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "refgame/channel.hpp"
#include "refgame/distinguish.hpp"
#include "refgame/game.hpp"
#include "refgame/protocol.hpp"
#include "refgame/random.hpp"
#include "refgame/sdp.hpp"
#include "refgame/search.hpp"
#include "refgame/transcript.hpp"
#include "support.hpp"

using namespace refgame;
using namespace refgame::testing;

namespace {

// Pinned tolerances and limits.
constexpr double kSdpTol = 1e-6;
constexpr double kSdpSeconds = 60.0;
constexpr double kSearchTol = 1e-4;
constexpr double kSearchSeconds = 300.0;
constexpr double kRoundTripTol = 1e-5;
constexpr double kResidualTol = 1e-7;
constexpr double kNormSlack = 1e-9;
constexpr double kHelstromTol = 1e-10;
constexpr double kGridSlack = 1e-6;
constexpr double kSetSlack = 1e-6;
constexpr double kCloseTol = 1e-3;
constexpr double kCloseSeconds = 600.0;
constexpr double kDecideSeconds = 1800.0;
constexpr double kSaddleGap = 0.2;
constexpr double kRepeatSlack = 1e-4;
constexpr double kRepeatSeconds = 1200.0;
constexpr double kFidelitySlack = 1e-10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Trace norm of a Hermitian matrix from the Jacobi reference spectrum. The
// real embedding doubles every eigenvalue.
double trace_norm_reference(const ComplexMatrix& h) {
  double s = 0.0;
  for (double e : jacobi_eigenvalues(h)) s += std::abs(e);
  return s / 2.0;
}

double spectral_norm_reference(const ComplexMatrix& a) {
  return std::sqrt(std::max(0.0, lambda_max_reference(a.adjoint() * a)));
}

// Fidelity as the sum of square roots of the spectrum of rho * sigma, which
// equals the spectrum of sqrt(rho) sigma sqrt(rho).
double fidelity_reference(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(rho * sigma, false);
  double f = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) f += std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  return f;
}

RoundSequence random_verifier(Rng& rng, std::size_t r, Index dv, Index dm) {
  const SpaceLayout l({{"V", dv}, {"M", dm}});
  std::vector<ComplexMatrix> m;
  for (std::size_t i = 0; i <= r; ++i) m.push_back(rng.haar_unitary(l.dim()));
  return RoundSequence(m, l, {"V"}, {"M"});
}

Prover random_prover(Rng& rng, Index msg, Index env, std::size_t moves) {
  Prover p;
  p.env_dim = env;
  for (std::size_t i = 0; i < moves; ++i) p.unitaries.push_back(rng.haar_unitary(msg * env));
  return p;
}

// A prover that answers with a uniformly random bit, kept coherent in its
// private register.
Prover coin_prover() {
  Prover keep = identity_prover(2, 1, 1);
  Prover flip = keep;
  flip.unitaries[0] = pauli_x();
  return mixture_prover({keep, flip}, {0.5, 0.5});
}

Outcome sdp_correctness() {
  Rng rng(9001);
  const auto t0 = std::chrono::steady_clock::now();
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t % 15;
    const ComplexMatrix h = rng.hermitian(n);
    SdpProblem p;
    p.objective = h;
    p.add_constraint(to_sparse(ComplexMatrix::Identity(n, n)), 1.0);
    p.x_init = ket_bra(n, 0, 0);
    p.epsilon = 1e-7;
    const SdpSolution s = solve_sdp(p);
    const double err = std::abs(s.objective_value - lambda_max_reference(h));
    worst = std::max(worst, err);
    good += s.status == SdpStatus::optimal && err <= kSdpTol;
  }
  const double secs = seconds_since(t0);
  return {good == 50 && secs < kSdpSeconds,
          fmt("%d/50 lambda_max instances (dims 2-16) within %.0e, max err %.2e, %.1f s (limit %.0f s)", good,
              kSdpTol, worst, secs, kSdpSeconds)};
}

Outcome opt_vs_search() {
  Rng rng(9002);
  const auto t0 = std::chrono::steady_clock::now();
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const RoundSequence rs = random_verifier(rng, 1, 2, 2);
    const ComplexMatrix acc = ground_and_projectors(rs.layout, "V").accept;
    const double exact = qip_value(rs, acc, 1e-9).value;
    RoundSequence a = rs;
    a.matrices.back() = acc * rs.matrices.back();
    SearchConfig sc;
    sc.seed = static_cast<std::uint64_t>(t);
    sc.restarts = 20;
    const double found = search_prover(a, sc).value;
    worst = std::max(worst, std::abs(found - exact));
    good += std::abs(found - exact) <= kSearchTol;
  }
  const double secs = seconds_since(t0);
  return {good == 20 && secs < kSearchSeconds,
          fmt("%d/20 one-round verifiers agree with 20-restart search within %.0e, max gap %.2e, %.1f s (limit %.0f s)",
              good, kSearchTol, worst, secs, kSearchSeconds)};
}

Outcome round_trip() {
  Rng rng(9003);
  int good = 0;
  double worst_value = 0.0, worst_res = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = static_cast<std::size_t>(rng.integer(1, 2));
    const Index dv = rng.integer(1, 4), dm = rng.integer(2, 4);
    const SpaceLayout l({{"out", 2}, {"V", dv}, {"M", dm}});
    std::vector<ComplexMatrix> rounds;
    for (std::size_t i = 0; i <= r; ++i) rounds.push_back(rng.haar_unitary(l.dim()));
    RoundSequence rs(rounds, l, {"out", "V"}, {"M"});
    rs.matrices.back() = ground_and_projectors(l, "out").accept * rs.matrices.back();
    const Prover p = random_prover(rng, dm, rng.integer(1, dm), r);
    const Transcript tr = prover_to_transcript(rs, p);
    const Prover back = transcript_to_prover(rs, tr);
    const double res = std::max(consistency_residual(rs, tr), consistency_residual(rs, prover_to_transcript(rs, back)));
    const double gap = std::abs(prover_value(rs, back) - transcript_value(rs, tr));
    worst_value = std::max(worst_value, gap);
    worst_res = std::max(worst_res, res);
    good += gap <= kRoundTripTol && res <= kResidualTol;
  }
  return {good == 50, fmt("%d/50 prover->transcript->prover round trips, max value drift %.2e (tol %.0e), max residual "
                          "%.2e (tol %.0e)",
                          good, worst_value, kRoundTripTol, worst_res, kResidualTol)};
}

Outcome constraint_bound() {
  Rng rng(9004);
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = static_cast<std::size_t>(rng.integer(1, 3));
    const Index dm = rng.integer(2, 4);
    const RoundSequence rs = random_verifier(rng, r, rng.integer(2, 4), dm);
    const Transcript tr = prover_to_transcript(rs, random_prover(rng, dm, rng.integer(1, 3), r));
    double n = 0.0;
    for (const auto& x : tr.snapshots) n = std::max(n, spectral_norm_reference(x));
    worst = std::max(worst, n);
    good += n <= 1.0 + kNormSlack;
  }
  return {good == 200, fmt("%d/200 transcripts have every snapshot norm <= 1 + %.0e, max norm 1 %+.2e", good,
                           kNormSlack, worst - 1.0)};
}

Outcome helstrom() {
  Rng rng(9005);
  auto success = [](const Povm& m, const ComplexMatrix& a, const ComplexMatrix& b) {
    return povm_success(m, {{a, "0"}, {b, "1"}}, {0.5, 0.5});
  };
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index n = rng.integer(2, 6);
    const ComplexMatrix a = rng.density(n, rng.integer(1, n)), b = rng.density(n, rng.integer(1, n));
    const double err = std::abs(success(helstrom_povm(a, b).povm, a, b) - (0.5 + 0.25 * trace_norm_reference(a - b)));
    worst = std::max(worst, err);
    good += err <= kHelstromTol;
  }
  int grid_good = 0;
  double worst_excess = -1.0;
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = rng.density(2), b = rng.density(2);
    const double opt = success(helstrom_povm(a, b).povm, a, b);
    double best = 0.0;
    for (int i = 0; i < 60; ++i)
      for (int j = 0; j < 60; ++j) {
        const ComplexMatrix p = bloch_state(M_PI * i / 59.0, 2.0 * M_PI * j / 60.0);
        best = std::max(best, 0.5 * (hs_inner(p, a).real() + hs_inner(ComplexMatrix::Identity(2, 2) - p, b).real()));
      }
    worst_excess = std::max(worst_excess, best - opt);
    grid_good += best <= opt + kGridSlack;
  }
  return {good == 100 && grid_good == 50,
          fmt("%d/100 pairs match 1/2 + |r0-r1|/4 within %.0e (max err %.2e); %d/50 qubit grids never beat it by > "
              "%.0e (max excess %.2e)",
              good, kHelstromTol, worst, grid_good, kGridSlack, worst_excess)};
}

Outcome set_distinguish() {
  Rng rng(9006);
  int instances = 0, good = 0;
  double worst_uniform = 1.0, worst_one_sided = 1.0;
  for (int draw = 0; draw < 200 && instances < 10; ++draw) {
    const MixedCircuit q0(2, 2, 2, rng.haar_unitary(8)), q1(2, 2, 2, rng.haar_unitary(8));
    const SeparatingPovm s = set_povm(ConvexStateSet::image(q0), ConvexStateSet::image(q1));
    if (s.d < 0.05) continue;
    ++instances;
    bool ok = true;
    for (int k = 0; k < 200; ++k) {
      const ComplexMatrix r0 = q0.apply(rng.density(2, rng.integer(1, 2)));
      const ComplexMatrix r1 = q1.apply(rng.density(2, rng.integer(1, 2)));
      const double u = povm_success(s.povm, {{r0, "0"}, {r1, "1"}}, {0.5, 0.5}) - (0.5 + s.d / 4.0);
      const double w = rng.uniform();
      const double o = std::min({povm_success(s.povm, {{r0, "0"}}, {1.0}), povm_success(s.povm, {{r1, "1"}}, {1.0}),
                                 povm_success(s.povm, {{r0, "0"}, {r1, "1"}}, {w, 1.0 - w})}) -
                       s.d / 2.0;
      // d is a minimum, so no sampled pair may be closer.
      const double closer = s.d - trace_norm_reference(r0 - r1);
      worst_uniform = std::min(worst_uniform, u);
      worst_one_sided = std::min(worst_one_sided, o);
      ok = ok && u >= -kSetSlack && o >= -kSetSlack && closer <= kSetSlack;
    }
    good += ok;
  }
  return {instances == 10 && good == 10,
          fmt("%d/%d image pairs: worst uniform success - (1/2 + d/4) = %+.2e, worst one-sided - d/2 = %+.2e over 200 "
              "pairs each (slack %.0e)",
              good, instances, worst_uniform, worst_one_sided, kSetSlack)};
}

Outcome close_images() {
  Rng rng(9007);
  const auto t0 = std::chrono::steady_clock::now();
  const Prover honest = identity_prover(4, 1, 1);
  const DqipVerifier same = build_close_images_verifier({MixedCircuit::identity(2), MixedCircuit::identity(2), 0.1});
  const double yes_value = qrg_value_given_yes(same, honest, 1e-9).value;
  const DqipVerifier far =
      build_close_images_verifier({MixedCircuit::constant(2, 2, 0), MixedCircuit::constant(2, 2, 1), 0.1});
  std::vector<Prover> yes_provers{honest};
  for (int k = 0; k < 3; ++k) yes_provers.push_back(random_prover(rng, 4, 2, 1));
  double no_value = 1.0;
  for (const auto& y : yes_provers) no_value = std::min(no_value, qrg_value_given_yes(far, y, 1e-9).value);
  const double secs = seconds_since(t0);
  const bool ok = std::abs(yes_value - 0.5) <= kCloseTol && no_value >= 1.0 - kCloseTol && secs < kCloseSeconds;
  return {ok, fmt("identical channels: best no-prover rejection %.6f (target 1/2 +- %.0e); orthogonal constants: "
                  "rejection >= %.6f against honest and 3 random yes-provers (target >= 1 - %.0e); "
                  "%.1f s (limit %.0f s)",
                  yes_value, kCloseTol, no_value, kCloseTol, secs, kCloseSeconds)};
}

Outcome end_to_end() {
  Rng rng(9008);
  const double c = 0.35, s = 0.35;
  const double threshold = c + (1.0 - c - s) / 2.0;
  int used = 0, matched = 0, skipped = 0;
  double slowest = 0.0;
  for (int draw = 0; draw < 60 && used < 10; ++draw) {
    const bool side = used % 2 == 0;
    const DqipVerifier v = synthetic_game(rng, side, rng.uniform(0.3, 1.0));
    SaddleConfig sc;
    sc.search.seed = static_cast<std::uint64_t>(draw);
    sc.search.restarts = 3;
    const SaddleResult sv = saddle_value(v, sc);
    const bool saddle_yes = sv.estimate <= threshold - kSaddleGap;
    const bool saddle_no = sv.lower_bound >= threshold + kSaddleGap;
    if (!saddle_yes && !saddle_no) {
      ++skipped;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const DecideResult d = decide_dqip(v, c, s);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    ++used;
    matched += d.accept == saddle_yes && secs <= kDecideSeconds;
  }
  return {used == 10 && matched == 10,
          fmt("%d/%d short games classified on the saddle side (gap >= %.1f around %.2f, %d draws without gap "
              "skipped), slowest decide %.1f s (limit %.0f s)",
              matched, used, kSaddleGap, threshold, skipped, slowest, kDecideSeconds)};
}

Outcome repetition() {
  Rng rng(9009);
  const auto t0 = std::chrono::steady_clock::now();
  const DqipVerifier v = pennies_game();
  const DqipVerifier ra = parallel_repeat(v, 2, Vote::unanimous_accept);
  const DqipVerifier rr = parallel_repeat(v, 2, Vote::unanimous_reject);
  const Prover coin = coin_prover();
  // The coin strategies certify both single-game values: s <= 1/2 and c <= 1/2.
  const double s1 = yes_value_given_no(v, coin, 1e-9).value;
  const double c1 = qrg_value_given_yes(v, coin, 1e-9).value;
  const double s2 = yes_value_given_no(ra, repeat_prover(coin, v, 2), 1e-9).value;
  const double c2 = qrg_value_given_yes(rr, repeat_prover(coin, v, 2), 1e-9).value;
  bool ok = s2 <= s1 * s1 + kRepeatSlack && c2 <= c1 * c1 + kRepeatSlack;
  // A biased variant against random fixed opponents.
  DqipVerifier w = v;
  w.no_rounds[0] = embed_lift(rotation(0.4), {"out"}, qubit_game_layout()) * w.no_rounds[0];
  const DqipVerifier wa = parallel_repeat(w, 2, Vote::unanimous_accept);
  const DqipVerifier wr = parallel_repeat(w, 2, Vote::unanimous_reject);
  double worst = -1.0;
  for (int k = 0; k < 3; ++k) {
    const Prover n = random_prover(rng, 2, 2, 1), y = random_prover(rng, 2, 2, 1);
    const double s = yes_value_given_no(w, n, 1e-9).value;
    const double cc = qrg_value_given_yes(w, y, 1e-9).value;
    worst = std::max(worst, yes_value_given_no(wa, repeat_prover(n, w, 2), 1e-9).value - s * s);
    worst = std::max(worst, qrg_value_given_yes(wr, repeat_prover(y, w, 2), 1e-9).value - cc * cc);
  }
  ok = ok && worst <= kRepeatSlack;
  const double secs = seconds_since(t0);
  ok = ok && secs < kRepeatSeconds;
  return {ok, fmt("s = %.6f: repeated accept value %.6f <= s^2 + %.0e; c = %.6f: repeated reject value %.6f <= c^2 + "
                  "%.0e; biased variant worst excess %+.2e; %.1f s (limit %.0f s)",
                  s1, s2, kRepeatSlack, c1, c2, kRepeatSlack, worst, secs, kRepeatSeconds)};
}

Outcome roundoff() {
  Rng rng(9010);
  int good = 0, hypotheses = 0;
  for (int t = 0; t < 100; ++t) {
    const Index m = rng.integer(1, 6), n = rng.integer(2, 4);
    const int bits = t % 2 ? 8 : 16;
    const double delta = static_cast<double>(n) * std::ldexp(1.0, -bits);
    ComplexMatrix prod = ComplexMatrix::Identity(n, n), approx = prod;
    bool hyp = true;
    for (Index k = 0; k < m; ++k) {
      // Leave room for the rounding so both factors stay contractions.
      const ComplexMatrix a = rng.contraction(n) * (1.0 - delta);
      const ComplexMatrix b = round_to_bits(a, bits);
      hyp = hyp && spectral_norm_reference(a - b) < delta && spectral_norm_reference(a) <= 1.0 &&
            spectral_norm_reference(b) <= 1.0;
      prod = a * prod;
      approx = b * approx;
    }
    hypotheses += hyp;
    const double na = spectral_norm_reference(prod), nb = spectral_norm_reference(approx);
    const double md = static_cast<double>(m) * delta;
    good += hyp && std::abs(na - nb) < md && std::abs(na * na - nb * nb) < 2.0 * md;
  }
  return {good == 100, fmt("%d/100 contraction products (m <= 6, t in {8, 16}) satisfy the m*delta and 2m*delta "
                           "bounds (%d/100 met the hypotheses)",
                           good, hypotheses)};
}

Outcome fidelity_sandwich() {
  Rng rng(9011);
  int good = 0;
  double worst_low = 1.0, worst_high = 1.0, worst_ref = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Index n = rng.integer(2, 8);
    const ComplexMatrix a = rng.density(n, rng.integer(1, n)), b = rng.density(n, rng.integer(1, n));
    const double f = fidelity(a, b);
    const double d = trace_norm(a - b);
    const double ref = std::max(std::abs(f - fidelity_reference(a, b)), std::abs(d - trace_norm_reference(a - b)));
    const double low = f - (1.0 - d / 2.0);
    const double high = std::sqrt(std::max(0.0, 1.0 - d * d / 4.0)) - f;
    worst_low = std::min(worst_low, low);
    worst_high = std::min(worst_high, high);
    worst_ref = std::max(worst_ref, ref);
    good += low >= -kFidelitySlack && high >= -kFidelitySlack && ref <= 1e-6;
  }
  return {good == 1000, fmt("%d/1000 density pairs (dims 2-8) satisfy 1 - D/2 <= F <= sqrt(1 - D^2/4) with slack %.0e "
                            "(min margins %+.2e, %+.2e; max deviation from reference %.2e)",
                            good, kFidelitySlack, worst_low, worst_high, worst_ref)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"SDP correctness", sdp_correctness},
      {"OPT vs brute force", opt_vs_search},
      {"consistency round trip", round_trip},
      {"consistency constraint bound", constraint_bound},
      {"Helstrom formula", helstrom},
      {"distinguishability of sets", set_distinguish},
      {"CLOSE-IMAGES game", close_images},
      {"end-to-end decide", end_to_end},
      {"parallel repetition", repetition},
      {"roundoff", roundoff},
      {"fidelity sandwich", fidelity_sandwich},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
