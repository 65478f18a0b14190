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

// Measurements that tell two states, or two convex sets of states, apart.

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "refgame/channel.hpp"
#include "refgame/linalg.hpp"

namespace refgame {

struct PovmElement {
  std::string outcome;
  ComplexMatrix e;
};

class Povm {
 public:
  explicit Povm(std::vector<PovmElement> elements);
  const std::vector<PovmElement>& elements() const { return elements_; }
  const ComplexMatrix& element(const std::string& outcome) const;
  Index dim() const { return elements_.front().e.rows(); }

 private:
  std::vector<PovmElement> elements_;
};

/// Binary measurement with outcomes "0" and "1" and E_0 - E_1 = k.
struct SeparatingPovm {
  Povm povm;
  ComplexMatrix k;
  double d = 0.0;
};

/// Either the image of a channel or the convex hull of finitely many states.
struct ConvexStateSet {
  std::variant<MixedCircuit, std::vector<ComplexMatrix>> kind;

  static ConvexStateSet image(MixedCircuit q) { return {std::move(q)}; }
  static ConvexStateSet hull(std::vector<ComplexMatrix> states) { return {std::move(states)}; }

  Index dim() const;
  StateFamily family() const;
  /// Member of the set obtained from a density matrix on the channel input
  /// (channel images) or a probability vector (hulls).
  bool is_image() const { return kind.index() == 0; }
};

inline constexpr double kDegenerateDistance = 1e-8;

SeparatingPovm binary_povm_from_k(const ComplexMatrix& k, double d);

SeparatingPovm helstrom_povm(const ComplexMatrix& rho0, const ComplexMatrix& rho1);

struct SetPovmResult {
  SeparatingPovm sep;
  DistanceResult distance;
};

SetPovmResult set_povm_detailed(const ConvexStateSet& a0, const ConvexStateSet& a1);
SeparatingPovm set_povm(const ConvexStateSet& a0, const ConvexStateSet& a1);

struct LabelledState {
  ComplexMatrix rho;
  std::string correct;
};

double povm_success(const Povm& povm, const std::vector<LabelledState>& pairs, const std::vector<double>& weights);

}  // namespace refgame
