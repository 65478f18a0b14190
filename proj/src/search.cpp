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

#include "refgame/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refgame/protocol.hpp"
#include "refgame/random.hpp"

namespace refgame {
namespace {

using detail::require;

// Generator indices: for n-dim unitaries, (a, b, kind) with kind 0/1 for the
// real and imaginary off-diagonal rotations and kind 2 for a phase on a.
struct Generator {
  Index a = 0, b = 0;
  int kind = 0;
};

std::vector<Generator> generators(Index n) {
  std::vector<Generator> g;
  for (Index a = 0; a < n; ++a) {
    g.push_back({a, a, 2});
    for (Index b = a + 1; b < n; ++b) {
      g.push_back({a, b, 0});
      g.push_back({a, b, 1});
    }
  }
  return g;
}

// Left-multiplies u by exp(i t G).
void rotate(ComplexMatrix& u, const Generator& g, double t) {
  if (g.kind == 2) {
    u.row(g.a) *= std::polar(1.0, t);
    return;
  }
  const double c = std::cos(t), s = std::sin(t);
  const ComplexVector ra = u.row(g.a).transpose(), rb = u.row(g.b).transpose();
  if (g.kind == 0) {
    const cplx is(0.0, s);
    u.row(g.a) = (c * ra + is * rb).transpose();
    u.row(g.b) = (is * ra + c * rb).transpose();
  } else {
    u.row(g.a) = (c * ra + s * rb).transpose();
    u.row(g.b) = (-s * ra + c * rb).transpose();
  }
}

}  // namespace

SearchResult search_prover(const RoundSequence& rounds, const SearchConfig& config) {
  require(config.restarts >= 1, "search needs at least one restart");
  require(config.initial_step > 0.0 && config.min_step > 0.0, "search steps must be positive");
  const Index env = config.env_dim > 0 ? config.env_dim : rounds.traced_dim();
  const Index n = rounds.traced_dim() * env;
  const std::vector<Generator> gens = generators(n);
  Rng master(config.seed);
  std::vector<std::uint64_t> seeds;
  for (int j = 0; j < config.restarts; ++j) seeds.push_back(master.split());

  SearchResult best;
  best.value = -1.0;
  for (int j = 0; j < config.restarts; ++j) {
    Rng rng(seeds[static_cast<std::size_t>(j)]);
    Prover p;
    p.env_dim = env;
    for (std::size_t i = 0; i < rounds.rounds(); ++i) p.unitaries.push_back(rng.haar_unitary(n));
    double value = prover_value(rounds, p);
    std::size_t evals = 1;
    double step = config.initial_step;
    std::vector<std::size_t> order(gens.size() * std::max<std::size_t>(rounds.rounds(), 1));
    std::iota(order.begin(), order.end(), 0);
    while (rounds.rounds() > 0 && step >= config.min_step && evals < config.max_evaluations) {
      std::shuffle(order.begin(), order.end(), std::mt19937_64(rng.next_u64()));
      bool improved = false;
      for (std::size_t idx : order) {
        if (evals >= config.max_evaluations) break;
        const std::size_t round = idx / gens.size();
        const Generator& g = gens[idx % gens.size()];
        for (double t : {step, -step}) {
          ComplexMatrix saved = p.unitaries[round];
          rotate(p.unitaries[round], g, t);
          const double v = prover_value(rounds, p);
          ++evals;
          if (v > value) {
            value = v;
            improved = true;
            break;
          }
          p.unitaries[round] = saved;
        }
      }
      if (!improved) step *= 0.5;
    }
    // Re-orthonormalise to remove drift from repeated rotations.
    for (auto& u : p.unitaries) {
      Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
      u = svd.matrixU() * svd.matrixV().adjoint();
    }
    value = prover_value(rounds, p);
    best.restart_values.push_back(value);
    if (value > best.value) {
      best.value = value;
      best.prover = p;
    }
  }
  return best;
}

SearchResult search_prover(const DqipVerifier& v, Role role, const Prover& opponent, const SearchConfig& config) {
  if (role == Role::yes) return search_prover(acceptance_sequence(v, opponent), config);
  return search_prover(rejection_sequence(v, opponent), config);
}

SaddleResult saddle_value(const DqipVerifier& v, const SaddleConfig& config) {
  v.validate();
  require(config.sweeps >= 1, "saddle_value needs at least one sweep");
  const Index dy = v.layout.dim_of(v.yes_message);
  const Index env = config.search.env_dim > 0 ? config.search.env_dim : dy;
  Rng master(config.search.seed);
  SaddleResult res;
  res.estimate = 2.0;
  res.lower_bound = -1.0;
  std::vector<Prover> yes_list{identity_prover(dy, env, v.r1())};
  std::vector<Prover> no_list;
  for (int sweep = 0; sweep <= config.sweeps; ++sweep) {
    SaddleStep step;
    step.sweep = sweep;
    // The newest response alone is also a candidate for the estimate.
    if (yes_list.size() > 1) {
      const double pure = qrg_value_given_yes(v, yes_list.back(), config.epsilon).value;
      if (pure < res.estimate) {
        res.estimate = pure;
        res.yes = yes_list.back();
      }
    }
    const Prover yes = mixture_prover(yes_list, std::vector<double>(yes_list.size(), 1.0));
    RoundSequence rej = rejection_sequence(v, yes);
    OptResult worst = solve_opt(rej, config.epsilon);
    step.worst_rejection = worst.value;
    if (worst.value < res.estimate) {
      res.estimate = worst.value;
      res.yes = yes;
    }
    no_list.push_back(transcript_to_prover(rej, worst.transcript));
    const Prover no = mixture_prover(no_list, std::vector<double>(no_list.size(), 1.0));
    const double floor = 1.0 - yes_value_given_no(v, no, config.epsilon).value;
    step.rejection_floor = floor;
    if (floor > res.lower_bound) {
      res.lower_bound = floor;
      res.no = no;
    }
    res.trace.push_back(step);
    if (sweep == config.sweeps) break;
    SearchConfig sc = config.search;
    sc.seed = master.split();
    sc.env_dim = env;
    yes_list.push_back(search_prover(v, Role::yes, no, sc).prover);
  }
  res.lower_bound = std::clamp(res.lower_bound, 0.0, 1.0);
  return res;
}

}  // namespace refgame
