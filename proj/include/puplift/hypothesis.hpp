// Copyright 2026 The Puplift Authors
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

#ifndef PUPLIFT_HYPOTHESIS_HPP
#define PUPLIFT_HYPOTHESIS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "puplift/instance.hpp"

namespace puplift {

// A first-order body literal over variables V1..Vmax.
struct BodyLit {
  bool positive = true;
  Pred pred{Pred::PartnerUnits};
  int v1 = 1;
  int v2 = 1;
  auto operator<=>(const BodyLit&) const = default;
};

// Headless rule; body kept in canonical form (sorted literals, variables
// numbered by first occurrence, minimal under variable bijections).
struct Constraint {
  int id = -1;
  std::vector<BodyLit> body;
  bool operator==(const Constraint& other) const { return body == other.body; }
};

struct ModeDecl {
  int recall = 1;
  Pred pred{Pred::PartnerUnits};
  bool symmetric = false;
  bool anti_reflexive = false;
};

enum class ScoreScheme { Default, Custom };

inline bool is_domain_pred(Pred p) {
  return p == Pred::Zone2Sensor || p == Pred::CloseSensors ||
         p == Pred::CloseZones;
}

inline bool is_order_pred(Pred p) {
  return p == Pred::Unit2ZoneGeq || p == Pred::Unit2SensorGeq;
}

// Language bias limits shared by the whole artifact.
inline constexpr int kMaxVars = 3;
inline constexpr int kMaxBodyLits = 3;

// All canonical, safe, recall-respecting constraints over the bias, with
// dense ids assigned in a deterministic order.
std::vector<Constraint> build_space(const std::vector<ModeDecl>& bias);

// The mode declarations used for PUP learning tasks.
std::vector<ModeDecl> pup_bias();

// Theta-subsumption over signed body literals, extended so that a
// single-literal positive rule over an order predicate matches a literal
// of either sign; this reproduces the subsumer sets the conflict analysis
// relies on.
bool subsumes(const Constraint& r1, const Constraint& r2);

// All r' in space with subsumes(r', r); always contains r itself.
std::vector<Constraint> subsumers(const Constraint& r,
                                  const std::vector<Constraint>& space);

int score(const Constraint& r, ScoreScheme scheme);

std::string to_string(const Constraint& r);
std::string write_space(const std::vector<Constraint>& space);

// Parses ":- lit, ..., lit." with `not` for negative literals. Throws
// std::invalid_argument on unknown predicates or malformed input.
Constraint parse_constraint(const std::string& text);
std::vector<Constraint> parse_constraints(const std::string& text);
std::string write_constraints(const std::vector<Constraint>& rules);

// Canonicalizes in place (sorting, variable renumbering); used by
// parse_constraint and the space builder.
void canonicalize(Constraint& r);

}  // namespace puplift

#endif  // PUPLIFT_HYPOTHESIS_HPP
