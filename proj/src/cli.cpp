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

#include "refgame/cli.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "refgame/channel.hpp"
#include "refgame/distinguish.hpp"
#include "refgame/error.hpp"
#include "refgame/game.hpp"
#include "refgame/io.hpp"
#include "refgame/protocol.hpp"
#include "refgame/search.hpp"

namespace refgame {
namespace {

using detail::require;
using nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";

struct Common {
  std::string out_dir;
  std::string seed_text;
  std::uint64_t seed = 0;
};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  require(!text.empty() && text.find_first_not_of("0123456789") == std::string::npos,
          source + " must be a non-negative integer");
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  require(errno != ERANGE, source + " is out of range");
  return v;
}

void resolve_seed(Common& c) {
  if (!c.seed_text.empty()) {
    c.seed = parse_seed(c.seed_text, "--seed");
  } else if (const char* env = std::getenv("REFGAME_SEED"); env && *env) {
    c.seed = parse_seed(env, "REFGAME_SEED");
  }
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

json matrix_doc(const ComplexMatrix& m) { return json::parse(matrix_to_json(m)); }

json document(const std::string& command, const Common& c) {
  return {{"tool", "refgame"}, {"tool_version", kToolVersion}, {"command", command}, {"seed", c.seed}};
}

std::filesystem::path out_path(const Common& c, const std::string& name) {
  return std::filesystem::path(c.out_dir) / name;
}

void prepare_out(const Common& c) {
  if (c.out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  require(!ec, "cannot create output directory '" + c.out_dir + "'");
}

void write_document(const Common& c, const json& doc) {
  if (c.out_dir.empty()) return;
  write_text(out_path(c, "result.json").string(), doc.dump(2) + "\n");
}

struct CsvRow {
  std::size_t iter;
  std::string kind;
  double objective;
  double logvol;
};

void write_csv(const Common& c, const std::string& name, const std::vector<CsvRow>& rows) {
  if (c.out_dir.empty()) return;
  std::ostringstream os;
  os << "iter,case,objective,logvol\n";
  for (const auto& r : rows)
    os << r.iter << "," << r.kind << "," << format_double(r.objective) << "," << format_double(r.logvol) << "\n";
  write_text(out_path(c, name).string(), os.str());
}

void write_file(const Common& c, const std::string& name, const std::string& text) {
  if (!c.out_dir.empty()) write_text(out_path(c, name).string(), text + "\n");
}

json povm_doc(const Povm& p) {
  json a = json::array();
  for (const auto& e : p.elements()) a.push_back({{"outcome", e.outcome}, {"element", matrix_doc(e.e)}});
  return a;
}

// qip-value ----------------------------------------------------------------

struct QipArgs {
  std::string game;
  double epsilon = 1e-6;
};

void run_qip_value(const QipArgs& a, const Common& c, std::ostream& out) {
  const GameFile g = load_game(a.game);
  require(g.single_prover(), "qip-value needs a single-prover game");
  const OptResult r = qip_value(g.prover_rounds(), g.accept_projector(), a.epsilon);
  out << "value " << fixed(r.value) << " ± " << a.epsilon << "\n";
  out << "dual bound " << fixed(r.dual_bound, 9) << ", residual " << r.residual << "\n";
  json doc = document("qip-value", c);
  doc["inputs"] = {{"game", a.game}};
  doc["values"] = {{"value", r.value}, {"dual_bound", r.dual_bound}, {"residual", r.residual},
                   {"status", to_string(r.status)}};
  doc["tolerances"] = {{"epsilon", a.epsilon}};
  write_document(c, doc);
}

// close-images -------------------------------------------------------------

struct CloseArgs {
  std::string q0, q1;
  double epsilon = 0.1;
};

void run_close_images(const CloseArgs& a, const Common& c, std::ostream& out) {
  const MixedCircuit q0 = load_channel(a.q0), q1 = load_channel(a.q1);
  const CloseImagesInstance inst{q0, q1, a.epsilon};
  const SetPovmResult sp = set_povm_detailed(ConvexStateSet::image(q0), ConvexStateSet::image(q1));
  const double d = sp.distance.d;
  const PromiseClass cls = classify_distance(d, a.epsilon);
  out << "d = " << fixed(d) << "\n";
  out << "class " << to_string(cls) << "\n";
  out << "uniform success of separating POVM " << fixed(0.5 + d / 4.0) << "\n";
  json doc = document("close-images", c);
  doc["inputs"] = {{"q0", a.q0}, {"q1", a.q1}};
  doc["values"] = {{"d", d}, {"class", to_string(cls)}, {"uniform_success", 0.5 + d / 4.0},
                   {"povm", povm_doc(sp.sep.povm)}};
  doc["tolerances"] = {{"epsilon", a.epsilon}, {"yes_distance", kYesDistance}};
  if (q0.out_dim() % 2 == 0) {
    const DqipVerifier v = build_close_images_verifier(inst);
    write_file(c, "verifier.json", game_to_json(GameFile::from(v)));
    doc["values"]["verifier_dim"] = v.layout.dim();
  }
  write_document(c, doc);
}

// sqg-decide ---------------------------------------------------------------

struct DecideArgs {
  std::string game;
  double c = 0.0, s = 0.0;
  bool deep_cut = false;
  int precision_bits = 0;
  std::size_t max_iterations = 0;
};

void run_decide(const DecideArgs& a, const Common& c, std::ostream& out) {
  const GameFile g = load_game(a.game);
  require(!g.single_prover(), "sqg-decide needs a game with a no-prover");
  DecideOptions o;
  o.deep_cut = a.deep_cut;
  o.precision_bits = a.precision_bits;
  o.max_iterations = a.max_iterations;
  const DecideResult r = decide_dqip(g.verifier(), a.c, a.s, o);
  out << "decision " << (r.accept ? "accept" : "reject") << "\n";
  out << "coordinates " << r.coordinates << ", iterations " << r.ellipsoid.iterations << " of cap "
      << r.iteration_cap << "\n";
  json doc = document("sqg-decide", c);
  doc["inputs"] = {{"game", a.game}, {"c", a.c}, {"s", a.s}, {"deep_cut", a.deep_cut},
                   {"precision_bits", a.precision_bits}};
  doc["values"] = {{"accept", r.accept},
                   {"coordinates", r.coordinates},
                   {"iterations", r.ellipsoid.iterations},
                   {"iteration_cap", r.iteration_cap},
                   {"final_case", r.ellipsoid.log.empty() ? "" : r.ellipsoid.log.back().kind}};
  doc["tolerances"] = {{"epsilon", r.epsilon}, {"c_prime", r.c_prime}, {"radius_big", r.radius_big},
                       {"radius_small", r.radius_small}};
  std::vector<CsvRow> rows;
  for (const auto& rec : r.ellipsoid.log) rows.push_back({rec.iteration, rec.kind, rec.objective, rec.log_volume});
  write_csv(c, "iterations.csv", rows);
  write_document(c, doc);
}

// distinguish --------------------------------------------------------------

void run_distinguish(const std::string& sets, const Common& c, std::ostream& out) {
  const auto [a0, a1] = sets_from_json(read_text(sets));
  const SetPovmResult sp = set_povm_detailed(a0, a1);
  const double d = sp.distance.d;
  out << "d = " << fixed(d) << "\n";
  out << "worst-case uniform success " << fixed(0.5 + d / 4.0) << ", one-sided " << fixed(d / 2.0) << "\n";
  json doc = document("distinguish", c);
  doc["inputs"] = {{"sets", sets}};
  doc["values"] = {{"d", d}, {"uniform_success", 0.5 + d / 4.0}, {"one_sided_success", d / 2.0},
                   {"povm", povm_doc(sp.sep.povm)}, {"k", matrix_doc(sp.sep.k)}};
  doc["tolerances"] = {{"degenerate_distance", kDegenerateDistance}, {"duality_gap", sp.distance.gap}};
  write_document(c, doc);
}

// repeat -------------------------------------------------------------------

struct RepeatArgs {
  std::string game;
  std::size_t k = 2;
  std::string vote = "unanimous_accept";
};

void run_repeat(const RepeatArgs& a, const Common& c, std::ostream& out) {
  const GameFile g = load_game(a.game);
  require(!g.single_prover(), "repeat needs a game with a no-prover");
  const Vote vote = parse_vote(a.vote);
  const DqipVerifier v = parallel_repeat(g.verifier(), a.k, vote);
  out << "repeated " << a.k << " times with " << to_string(vote) << ", dimension " << v.layout.dim() << "\n";
  write_file(c, "game.json", game_to_json(GameFile::from(v)));
  json doc = document("repeat", c);
  doc["inputs"] = {{"game", a.game}, {"k", a.k}, {"vote", to_string(vote)}};
  doc["values"] = {{"dim", v.layout.dim()}, {"factors", v.layout.labels()}};
  doc["tolerances"] = {{"max_dim", kMaxVerifierDim}};
  write_document(c, doc);
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
  std::string game, yes, no;
};

void run_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  const GameFile g = load_game(a.game);
  require(!g.single_prover(), "simulate needs a game with a no-prover");
  const double p = simulate(g.verifier(), load_prover(a.yes), load_prover(a.no));
  out << "acceptance probability " << fixed(p, 9) << "\n";
  json doc = document("simulate", c);
  doc["inputs"] = {{"game", a.game}, {"yes", a.yes}, {"no", a.no}};
  doc["values"] = {{"accept", p}};
  doc["tolerances"] = json::object();
  write_document(c, doc);
}

// search -------------------------------------------------------------------

struct SearchArgs {
  std::string game, role = "yes", opponent;
  int restarts = 20;
  std::size_t evaluations = 40000;
  Index env_dim = 0;
};

void run_search(const SearchArgs& a, const Common& c, std::ostream& out) {
  const GameFile g = load_game(a.game);
  require(a.role == "yes" || a.role == "no", "role must be 'yes' or 'no'");
  SearchConfig cfg;
  cfg.seed = c.seed;
  cfg.restarts = a.restarts;
  cfg.max_evaluations = a.evaluations;
  cfg.env_dim = a.env_dim;
  SearchResult r;
  std::string meaning;
  if (g.single_prover()) {
    require(a.role == "yes" && a.opponent.empty(), "a single-prover game has only the yes role");
    RoundSequence rs = g.prover_rounds();
    rs.matrices.back() = g.accept_projector() * rs.matrices.back();
    r = search_prover(rs, cfg);
    meaning = "acceptance";
  } else {
    const DqipVerifier v = g.verifier();
    const Role role = a.role == "yes" ? Role::yes : Role::no;
    Prover opp;
    if (!a.opponent.empty()) {
      opp = load_prover(a.opponent);
    } else {
      const Labels& msg = role == Role::yes ? v.no_message : v.yes_message;
      opp = identity_prover(v.layout.dim_of(msg), 1, role == Role::yes ? v.r2() : v.r1());
    }
    r = search_prover(v, role, opp, cfg);
    meaning = role == Role::yes ? "acceptance" : "rejection";
  }
  out << "best " << meaning << " probability " << fixed(r.value, 9) << " over " << r.restart_values.size()
      << " restarts\n";
  write_file(c, "prover.json", prover_to_json(r.prover));
  json doc = document("search", c);
  doc["inputs"] = {{"game", a.game}, {"role", a.role}, {"opponent", a.opponent}, {"restarts", a.restarts},
                   {"max_evaluations", a.evaluations}};
  doc["values"] = {{"value", r.value}, {"meaning", meaning}, {"restart_values", r.restart_values}};
  doc["tolerances"] = {{"min_step", cfg.min_step}};
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < r.restart_values.size(); ++i)
    rows.push_back({i + 1, "restart", r.restart_values[i], std::numeric_limits<double>::quiet_NaN()});
  write_csv(c, "restarts.csv", rows);
  write_document(c, doc);
}

// saddle -------------------------------------------------------------------

struct SaddleArgs {
  std::string game;
  int sweeps = 4;
  int restarts = 4;
  std::size_t evaluations = 4000;
};

void run_saddle(const SaddleArgs& a, const Common& c, std::ostream& out) {
  const GameFile g = load_game(a.game);
  require(!g.single_prover(), "saddle needs a game with a no-prover");
  SaddleConfig cfg;
  cfg.sweeps = a.sweeps;
  cfg.search.seed = c.seed;
  cfg.search.restarts = a.restarts;
  cfg.search.max_evaluations = a.evaluations;
  const SaddleResult r = saddle_value(g.verifier(), cfg);
  out << "rejection value in [" << fixed(r.lower_bound) << ", " << fixed(r.estimate) << "]\n";
  write_file(c, "yes_prover.json", prover_to_json(r.yes));
  write_file(c, "no_prover.json", prover_to_json(r.no));
  json doc = document("saddle", c);
  doc["inputs"] = {{"game", a.game}, {"sweeps", a.sweeps}, {"restarts", a.restarts},
                   {"max_evaluations", a.evaluations}};
  doc["values"] = {{"estimate", r.estimate}, {"lower_bound", r.lower_bound}};
  doc["tolerances"] = {{"epsilon", cfg.epsilon}};
  std::vector<CsvRow> rows;
  for (const auto& s : r.trace) {
    rows.push_back({static_cast<std::size_t>(s.sweep), "worst_rejection", s.worst_rejection,
                    std::numeric_limits<double>::quiet_NaN()});
    rows.push_back({static_cast<std::size_t>(s.sweep), "rejection_floor", s.rejection_floor,
                    std::numeric_limits<double>::quiet_NaN()});
  }
  write_csv(c, "trace.csv", rows);
  write_document(c, doc);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_dir, "Directory for the result document and logs");
  sub->add_option("--seed", c.seed_text, "RNG seed (overrides REFGAME_SEED)");
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for quantum interactive proofs and refereed games", "refgame"};
  app.require_subcommand(1);
  Common common;

  QipArgs qa;
  auto* qip = app.add_subcommand("qip-value", "Optimal acceptance of a single-prover verifier");
  qip->add_option("--game", qa.game, "Game file")->required();
  qip->add_option("--epsilon", qa.epsilon, "Target accuracy");
  add_common(qip, common);

  CloseArgs ca;
  auto* close = app.add_subcommand("close-images", "Trace distance between two channel images");
  close->add_option("--q0", ca.q0, "First channel file")->required();
  close->add_option("--q1", ca.q1, "Second channel file")->required();
  close->add_option("--epsilon", ca.epsilon, "Promise threshold");
  add_common(close, common);

  DecideArgs da;
  auto* decide = app.add_subcommand("sqg-decide", "Decide a short game by the ellipsoid method");
  decide->add_option("--game", da.game, "Game file")->required();
  decide->add_option("--c", da.c, "Completeness threshold on rejection")->required();
  decide->add_option("--s", da.s, "Soundness gap")->required();
  decide->add_flag("--deep-cut", da.deep_cut, "Use deep cuts");
  decide->add_option("--precision-bits", da.precision_bits, "Round circuits to this many bits");
  decide->add_option("--max-iterations", da.max_iterations, "Override the iteration cap");
  add_common(decide, common);

  std::string sets;
  auto* dist = app.add_subcommand("distinguish", "Separating POVM for two convex state sets");
  dist->add_option("--sets", sets, "Sets file")->required();
  add_common(dist, common);

  RepeatArgs ra;
  auto* rep = app.add_subcommand("repeat", "Parallel repetition with a vote");
  rep->add_option("--game", ra.game, "Game file")->required();
  rep->add_option("--k", ra.k, "Number of copies");
  rep->add_option("--vote", ra.vote, "unanimous_accept or unanimous_reject");
  add_common(rep, common);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Acceptance probability for fixed provers");
  sim->add_option("--game", sa.game, "Game file")->required();
  sim->add_option("--yes", sa.yes, "Yes-prover file")->required();
  sim->add_option("--no", sa.no, "No-prover file")->required();
  add_common(sim, common);

  SearchArgs sea;
  auto* search = app.add_subcommand("search", "Random-restart search for a prover strategy");
  search->add_option("--game", sea.game, "Game file")->required();
  search->add_option("--role", sea.role, "yes or no");
  search->add_option("--opponent", sea.opponent, "Opponent prover file");
  search->add_option("--restarts", sea.restarts, "Number of restarts");
  search->add_option("--evaluations", sea.evaluations, "Evaluations per restart");
  search->add_option("--env-dim", sea.env_dim, "Prover private dimension");
  add_common(search, common);

  SaddleArgs sda;
  auto* saddle = app.add_subcommand("saddle", "Best-response estimate of a game's value");
  saddle->add_option("--game", sda.game, "Game file")->required();
  saddle->add_option("--sweeps", sda.sweeps, "Best-response sweeps");
  saddle->add_option("--restarts", sda.restarts, "Search restarts per response");
  saddle->add_option("--evaluations", sda.evaluations, "Search evaluations per restart");
  add_common(saddle, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitPrecondition;
  }

  try {
    resolve_seed(common);
    prepare_out(common);
    if (qip->parsed()) run_qip_value(qa, common, out);
    if (close->parsed()) run_close_images(ca, common, out);
    if (decide->parsed()) run_decide(da, common, out);
    if (dist->parsed()) run_distinguish(sets, common, out);
    if (rep->parsed()) run_repeat(ra, common, out);
    if (sim->parsed()) run_simulate(sa, common, out);
    if (search->parsed()) run_search(sea, common, out);
    if (saddle->parsed()) run_saddle(sda, common, out);
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace refgame
