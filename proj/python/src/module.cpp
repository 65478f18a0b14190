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

// Python bindings for the refgame solvers.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "refgame/channel.hpp"
#include "refgame/cli.hpp"
#include "refgame/distinguish.hpp"
#include "refgame/error.hpp"
#include "refgame/game.hpp"
#include "refgame/io.hpp"
#include "refgame/linalg.hpp"
#include "refgame/protocol.hpp"
#include "refgame/search.hpp"
#include "refgame/transcript.hpp"

namespace py = pybind11;
using namespace refgame;

namespace {

std::vector<std::pair<std::string, Index>> layout_pairs(const SpaceLayout& l) {
  std::vector<std::pair<std::string, Index>> out;
  for (const auto& f : l.factors()) out.emplace_back(f.label, f.dim);
  return out;
}

SpaceLayout layout_from(const std::vector<std::pair<std::string, Index>>& pairs) {
  std::vector<Factor> f;
  for (const auto& [label, dim] : pairs) f.push_back({label, dim});
  return SpaceLayout(std::move(f));
}

py::dict opt_dict(const OptResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["dual_bound"] = r.dual_bound;
  d["residual"] = r.residual;
  d["status"] = to_string(r.status);
  d["snapshots"] = r.transcript.snapshots;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Solvers for quantum interactive proofs and short refereed games";

  static py::exception<PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const PreconditionError& e) {
      py::set_error(precondition, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    }
  });

  py::class_<Prover>(m, "Prover")
      .def(py::init([](Index env_dim, std::vector<ComplexMatrix> unitaries) {
             return Prover{env_dim, std::move(unitaries)};
           }),
           py::arg("env_dim"), py::arg("unitaries"))
      .def_readwrite("env_dim", &Prover::env_dim)
      .def_readwrite("unitaries", &Prover::unitaries)
      .def("to_json", [](const Prover& p) { return prover_to_json(p); })
      .def_static("from_json", &prover_from_json);

  py::class_<GameFile>(m, "Game")
      .def(py::init([](const std::vector<std::pair<std::string, Index>>& layout, Labels yes_message,
                       Labels no_message, std::string output, std::vector<ComplexMatrix> yes_rounds,
                       std::vector<ComplexMatrix> no_rounds) {
             GameFile g{layout_from(layout), std::move(yes_message), std::move(no_message), std::move(output),
                        std::move(yes_rounds), std::move(no_rounds)};
             g.validate();
             return g;
           }),
           py::arg("layout"), py::arg("yes_message"), py::arg("no_message"), py::arg("output"),
           py::arg("yes_rounds"), py::arg("no_rounds") = std::vector<ComplexMatrix>{})
      .def_property_readonly("layout", [](const GameFile& g) { return layout_pairs(g.layout); })
      .def_readonly("yes_message", &GameFile::yes_message)
      .def_readonly("no_message", &GameFile::no_message)
      .def_readonly("output", &GameFile::output)
      .def_readonly("yes_rounds", &GameFile::yes_rounds)
      .def_readonly("no_rounds", &GameFile::no_rounds)
      .def_property_readonly("single_prover", &GameFile::single_prover)
      .def("to_json", [](const GameFile& g) { return game_to_json(g); })
      .def_static("from_json", &game_from_json)
      .def_static("load", &load_game)
      .def("save", [](const GameFile& g, const std::string& path) { save_game(path, g); });

  py::class_<MixedCircuit>(m, "MixedCircuit")
      .def(py::init<Index, Index, Index, const ComplexMatrix&>(), py::arg("in_dim"), py::arg("out_dim"),
           py::arg("env_dim"), py::arg("stinespring"))
      .def_property_readonly("in_dim", &MixedCircuit::in_dim)
      .def_property_readonly("out_dim", &MixedCircuit::out_dim)
      .def_property_readonly("env_dim", &MixedCircuit::env_dim)
      .def_property_readonly("stinespring", &MixedCircuit::stinespring)
      .def("apply", &MixedCircuit::apply, py::arg("rho"))
      .def_static("identity", &MixedCircuit::identity, py::arg("dim"))
      .def_static("constant", &MixedCircuit::constant, py::arg("in_dim"), py::arg("out_dim"), py::arg("k"));

  m.def("trace_norm", &trace_norm, py::arg("a"));
  m.def("fidelity", &fidelity, py::arg("rho"), py::arg("sigma"));

  m.def(
      "helstrom_povm",
      [](const ComplexMatrix& a, const ComplexMatrix& b) {
        const SeparatingPovm s = helstrom_povm(a, b);
        return py::make_tuple(s.povm.element("0"), s.povm.element("1"));
      },
      py::arg("rho0"), py::arg("rho1"), "Optimal two-outcome measurement (E0, E1) for two states.");

  m.def(
      "image_distance",
      [](const MixedCircuit& q0, const MixedCircuit& q1, double epsilon) {
        const SetPovmResult r = set_povm_detailed(ConvexStateSet::image(q0), ConvexStateSet::image(q1));
        py::dict d;
        d["d"] = r.distance.d;
        d["promise_class"] = to_string(classify_distance(r.distance.d, epsilon));
        d["povm"] = py::make_tuple(r.sep.povm.element("0"), r.sep.povm.element("1"));
        d["rho0"] = r.distance.state0;
        d["rho1"] = r.distance.state1;
        return d;
      },
      py::arg("q0"), py::arg("q1"), py::arg("epsilon") = 0.1,
      "Minimum trace distance between two channel images, its promise class and a separating POVM.");

  m.def(
      "qip_value",
      [](const GameFile& g, double epsilon) {
        if (!g.single_prover()) throw PreconditionError("qip_value needs a single-prover game");
        return opt_dict(qip_value(g.prover_rounds(), g.accept_projector(), epsilon));
      },
      py::arg("game"), py::arg("epsilon") = 1e-6, "Optimal acceptance probability of a single-prover verifier.");

  m.def(
      "rejection_given_yes",
      [](const GameFile& g, const Prover& yes, double epsilon) {
        return opt_dict(qrg_value_given_yes(g.verifier(), yes, epsilon));
      },
      py::arg("game"), py::arg("yes"), py::arg("epsilon") = 1e-7);

  m.def(
      "acceptance_given_no",
      [](const GameFile& g, const Prover& no, double epsilon) {
        return opt_dict(yes_value_given_no(g.verifier(), no, epsilon));
      },
      py::arg("game"), py::arg("no"), py::arg("epsilon") = 1e-7);

  m.def(
      "simulate", [](const GameFile& g, const Prover& y, const Prover& n) { return simulate(g.verifier(), y, n); },
      py::arg("game"), py::arg("yes"), py::arg("no"));

  m.def(
      "decide",
      [](const GameFile& g, double c, double s, bool deep_cut) {
        DecideOptions o;
        o.deep_cut = deep_cut;
        const DecideResult r = decide_dqip(g.verifier(), c, s, o);
        py::dict d;
        d["accept"] = r.accept;
        d["iterations"] = r.ellipsoid.iterations;
        d["iteration_cap"] = r.iteration_cap;
        d["coordinates"] = r.coordinates;
        py::list log;
        for (const auto& rec : r.ellipsoid.log)
          log.append(py::make_tuple(rec.iteration, rec.kind, rec.objective, rec.log_volume));
        d["log"] = log;
        return d;
      },
      py::arg("game"), py::arg("c"), py::arg("s"), py::arg("deep_cut") = false,
      "Decide whether the yes-prover can hold rejection to c (accept) or the no-prover forces it above 1 - s.");

  m.def(
      "saddle",
      [](const GameFile& g, std::uint64_t seed, int sweeps, int restarts) {
        SaddleConfig cfg;
        cfg.sweeps = sweeps;
        cfg.search.seed = seed;
        cfg.search.restarts = restarts;
        const SaddleResult r = saddle_value(g.verifier(), cfg);
        return py::make_tuple(r.lower_bound, r.estimate, r.yes, r.no);
      },
      py::arg("game"), py::arg("seed") = 0, py::arg("sweeps") = 4, py::arg("restarts") = 4,
      "Bracket (lower, upper) on the rejection value with the provers that certify it.");

  m.def(
      "search",
      [](const GameFile& g, const std::string& role, const Prover* opponent, std::uint64_t seed, int restarts) {
        SearchConfig cfg;
        cfg.seed = seed;
        cfg.restarts = restarts;
        SearchResult r;
        if (g.single_prover()) {
          RoundSequence rs = g.prover_rounds();
          rs.matrices.back() = g.accept_projector() * rs.matrices.back();
          r = search_prover(rs, cfg);
        } else {
          if (role != "yes" && role != "no") throw PreconditionError("role must be 'yes' or 'no'");
          if (!opponent) throw PreconditionError("a two-prover game needs an opponent");
          const DqipVerifier v = g.verifier();
          r = search_prover(v, role == "yes" ? Role::yes : Role::no, *opponent, cfg);
        }
        return py::make_tuple(r.value, r.prover);
      },
      py::arg("game"), py::arg("role") = "yes", py::arg("opponent") = nullptr, py::arg("seed") = 0,
      py::arg("restarts") = 20);

  m.def(
      "close_images_verifier",
      [](const MixedCircuit& q0, const MixedCircuit& q1) {
        return GameFile::from(build_close_images_verifier({q0, q1, 0.1}));
      },
      py::arg("q0"), py::arg("q1"));

  m.def(
      "parallel_repeat",
      [](const GameFile& g, std::size_t k, const std::string& vote) {
        return GameFile::from(parallel_repeat(g.verifier(), k, parse_vote(vote)));
      },
      py::arg("game"), py::arg("k"), py::arg("vote") = "unanimous_accept");

  m.def(
      "repeat_prover",
      [](const Prover& p, const GameFile& g, std::size_t k) { return repeat_prover(p, g.verifier(), k); },
      py::arg("prover"), py::arg("game"), py::arg("k"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a refgame subcommand; returns (exit code, stdout, stderr).");
}
