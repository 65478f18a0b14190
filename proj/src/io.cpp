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

#include "refgame/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace refgame {
namespace {

using detail::require;
using nlohmann::json;

json matrix_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      entries.push_back({format_double(m(i, j).real()), format_double(m(i, j).imag())});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

const json& field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
  return j.at(key);
}

Index index_field(const json& j, const char* key) {
  const json& v = field(j, key);
  require(v.is_number_integer() && v.get<long long>() >= 0, std::string("field '") + key + "' must be a count");
  return static_cast<Index>(v.get<long long>());
}

ComplexMatrix matrix_value(const json& j) {
  const Index rows = index_field(j, "rows"), cols = index_field(j, "cols");
  const json& e = field(j, "entries");
  require(e.is_array() && e.size() == static_cast<std::size_t>(rows * cols), "matrix entry count mismatch");
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j2 = 0; j2 < cols; ++j2, ++k) {
      const json& p = e[k];
      require(p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string(),
              "complex entries must be pairs of decimal strings");
      m(i, j2) = cplx(parse_double(p[0].get<std::string>()), parse_double(p[1].get<std::string>()));
    }
  return m;
}

std::vector<ComplexMatrix> matrix_list(const json& j) {
  require(j.is_array(), "expected a list of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& m : j) out.push_back(matrix_value(m));
  return out;
}

json matrix_list_json(const std::vector<ComplexMatrix>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(matrix_json(m));
  return a;
}

json parse(const std::string& text, const std::string& format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    detail::fail_precondition(std::string("malformed JSON: ") + e.what());
  }
  require(j.is_object() && j.value("format", "") == format, "expected a '" + format + "' document");
  require(j.value("version", -1) == kFormatVersion, "unsupported " + format + " version");
  return j;
}

json header(const std::string& format) { return {{"format", format}, {"version", kFormatVersion}}; }

json channel_json(const MixedCircuit& q) {
  return {{"in_dim", q.in_dim()},
          {"out_dim", q.out_dim()},
          {"env_dim", q.env_dim()},
          {"stinespring", matrix_json(q.stinespring())}};
}

MixedCircuit channel_value(const json& j) {
  return MixedCircuit(index_field(j, "in_dim"), index_field(j, "out_dim"), index_field(j, "env_dim"),
                      matrix_value(field(j, "stinespring")));
}

json set_json(const ConvexStateSet& s) {
  if (s.is_image()) return {{"kind", "image"}, {"channel", channel_json(std::get<MixedCircuit>(s.kind))}};
  return {{"kind", "hull"}, {"states", matrix_list_json(std::get<std::vector<ComplexMatrix>>(s.kind))}};
}

ConvexStateSet set_value(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "image") return ConvexStateSet::image(channel_value(field(j, "channel")));
  require(kind == "hull", "state set kind must be 'image' or 'hull'");
  return ConvexStateSet::hull(matrix_list(field(j, "states")));
}

bool has(const Labels& ls, const std::string& l) { return std::find(ls.begin(), ls.end(), l) != ls.end(); }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  require(!s.empty(), "empty number");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  // ERANGE on underflow still yields the nearest subnormal, which is exact here.
  require(end == s.c_str() + s.size() && !(errno == ERANGE && std::isinf(x)), "invalid number '" + s + "'");
  return x;
}

void GameFile::validate() const {
  require(layout.size() > 0, "game layout is empty");
  require(!yes_message.empty(), "game needs at least one yes-message factor");
  // Factors appear in the order yes-message, private, no-message.
  int stage = 0;
  for (const auto& l : layout.labels()) {
    const int s = has(yes_message, l) ? 0 : has(no_message, l) ? 2 : 1;
    require(s >= stage, "factors must be ordered yes-message, private, no-message");
    stage = s;
  }
  if (single_prover()) {
    require(no_rounds.empty(), "a single-prover game has no no-rounds");
    (void)prover_rounds();
    require(layout.contains(output) && !has(yes_message, output) && layout.dim_of(output) == 2,
            "output factor must be a private qubit");
    for (const auto& m : yes_rounds) require(is_unitary(m), "verifier rounds must be unitary");
  } else {
    verifier().validate();
  }
}

DqipVerifier GameFile::verifier() const {
  DqipVerifier v;
  v.layout = layout;
  v.yes_message = yes_message;
  v.no_message = no_message;
  v.output = output;
  v.yes_rounds = yes_rounds;
  v.no_rounds = no_rounds;
  return v;
}

RoundSequence GameFile::prover_rounds() const {
  require(single_prover(), "game has a no-prover");
  return RoundSequence(yes_rounds, layout, layout.complement(yes_message), yes_message);
}

ComplexMatrix GameFile::accept_projector() const { return output_projector(layout, output, 1); }

GameFile GameFile::from(const DqipVerifier& v) {
  GameFile g;
  g.layout = v.layout;
  g.yes_message = v.yes_message;
  g.no_message = v.no_message;
  g.output = v.output;
  g.yes_rounds = v.yes_rounds;
  g.no_rounds = v.no_rounds;
  return g;
}

std::string matrix_to_json(const ComplexMatrix& m) { return matrix_json(m).dump(); }

ComplexMatrix matrix_from_json(const std::string& text) {
  try {
    return matrix_value(json::parse(text));
  } catch (const json::exception& e) {
    detail::fail_precondition(std::string("malformed matrix: ") + e.what());
  }
}

std::string game_to_json(const GameFile& g) {
  json j = header("refgame/game");
  json factors = json::array();
  for (const auto& f : g.layout.factors()) {
    const std::string role = has(g.yes_message, f.label)  ? "yes_message"
                             : has(g.no_message, f.label) ? "no_message"
                             : f.label == g.output        ? "output"
                                                          : "private";
    factors.push_back({{"label", f.label}, {"dim", f.dim}, {"role", role}});
  }
  j["factors"] = std::move(factors);
  j["rounds"] = {{"yes", matrix_list_json(g.yes_rounds)}, {"no", matrix_list_json(g.no_rounds)}};
  return j.dump(1);
}

GameFile game_from_json(const std::string& text) {
  try {
    const json j = parse(text, "refgame/game");
    GameFile g;
    std::vector<Factor> factors;
    int outputs = 0;
    for (const auto& f : field(j, "factors")) {
      const std::string label = field(f, "label").get<std::string>();
      const std::string role = field(f, "role").get<std::string>();
      factors.push_back({label, index_field(f, "dim")});
      if (role == "yes_message") {
        g.yes_message.push_back(label);
      } else if (role == "no_message") {
        g.no_message.push_back(label);
      } else if (role == "output") {
        g.output = label;
        ++outputs;
      } else {
        require(role == "private", "unknown factor role '" + role + "'");
      }
    }
    require(outputs == 1, "exactly one factor must have the output role");
    g.layout = SpaceLayout(std::move(factors));
    const json& rounds = field(j, "rounds");
    g.yes_rounds = matrix_list(field(rounds, "yes"));
    g.no_rounds = matrix_list(field(rounds, "no"));
    g.validate();
    return g;
  } catch (const json::exception& e) {
    detail::fail_precondition(std::string("malformed game file: ") + e.what());
  }
}

std::string prover_to_json(const Prover& p) {
  json j = header("refgame/prover");
  j["env_dim"] = p.env_dim;
  j["unitaries"] = matrix_list_json(p.unitaries);
  return j.dump(1);
}

Prover prover_from_json(const std::string& text) {
  try {
    const json j = parse(text, "refgame/prover");
    Prover p;
    p.env_dim = index_field(j, "env_dim");
    p.unitaries = matrix_list(field(j, "unitaries"));
    for (const auto& u : p.unitaries) require(is_unitary(u), "prover moves must be unitary");
    return p;
  } catch (const json::exception& e) {
    detail::fail_precondition(std::string("malformed prover file: ") + e.what());
  }
}

std::string channel_to_json(const MixedCircuit& q) {
  json j = header("refgame/channel");
  j.update(channel_json(q));
  return j.dump(1);
}

MixedCircuit channel_from_json(const std::string& text) {
  try {
    return channel_value(parse(text, "refgame/channel"));
  } catch (const json::exception& e) {
    detail::fail_precondition(std::string("malformed channel file: ") + e.what());
  }
}

std::string sets_to_json(const ConvexStateSet& a0, const ConvexStateSet& a1) {
  json j = header("refgame/sets");
  j["sets"] = {set_json(a0), set_json(a1)};
  return j.dump(1);
}

std::pair<ConvexStateSet, ConvexStateSet> sets_from_json(const std::string& text) {
  try {
    const json j = parse(text, "refgame/sets");
    const json& s = field(j, "sets");
    require(s.is_array() && s.size() == 2, "a sets file holds exactly two sets");
    return {set_value(s[0]), set_value(s[1])};
  } catch (const json::exception& e) {
    detail::fail_precondition(std::string("malformed sets file: ") + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write '" + path + "'");
  out << text;
  require(static_cast<bool>(out), "write to '" + path + "' failed");
}

GameFile load_game(const std::string& path) { return game_from_json(read_text(path)); }
void save_game(const std::string& path, const GameFile& g) { write_text(path, game_to_json(g) + "\n"); }
Prover load_prover(const std::string& path) { return prover_from_json(read_text(path)); }
MixedCircuit load_channel(const std::string& path) { return channel_from_json(read_text(path)); }

}  // namespace refgame
