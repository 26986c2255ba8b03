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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "puplift/hypothesis.hpp"
#include "puplift/instance.hpp"
#include "puplift/solver.hpp"

using namespace puplift;

namespace {

// Single-predicate bias: one assignment relation (zone2sensor), one close
// relation, one order relation, one partner relation.
std::vector<ModeDecl> mini_bias() {
  return {
      {1, Pred::Zone2Sensor, false, false},
      {1, Pred::CloseZones, true, true},
      {2, Pred::Unit2ZoneGeq, false, false},
      {1, Pred::PartnerUnits, false, false},
  };
}

std::set<std::vector<BodyLit>> bodies(const std::vector<Constraint>& rules) {
  std::set<std::vector<BodyLit>> out;
  for (const auto& r : rules) out.insert(r.body);
  return out;
}

const Constraint* find_rule(const std::vector<Constraint>& space,
                            const std::string& text) {
  Constraint want = parse_constraint(text);
  for (const auto& r : space) {
    if (r.body == want.body) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("canonicalize identifies isomorphic rules") {
  Constraint a = parse_constraint(":- partnerunits(V2,V2).");
  Constraint b = parse_constraint(":- partnerunits(V1,V1).");
  CHECK(a.body == b.body);

  Constraint c = parse_constraint(
      ":- partnerunits(V3,V2), not unit2zoneGEQ(V2,V3).");
  Constraint d = parse_constraint(
      ":- not unit2zoneGEQ(V2,V1), partnerunits(V1,V2).");
  CHECK(c.body == d.body);

  SUBCASE("close literals are orientation-free") {
    Constraint e = parse_constraint(":- closezones(V2,V1).");
    Constraint f = parse_constraint(":- closezones(V1,V2).");
    CHECK(e.body == f.body);
  }
  SUBCASE("idempotent") {
    Constraint g = parse_constraint(
        ":- not unit2zoneGEQ(V2,V2), partnerunits(V1,V2), closezones(V2,V1).");
    Constraint h = g;
    canonicalize(h);
    CHECK(g.body == h.body);
  }
  SUBCASE("duplicate literals collapse") {
    Constraint i;
    i.body = {{true, Pred::PartnerUnits, 1, 2},
              {true, Pred::PartnerUnits, 1, 2}};
    canonicalize(i);
    CHECK(i.body.size() == 1);
  }
}

TEST_CASE("space generation is safe, canonical and deterministic") {
  auto space = build_space(mini_bias());
  REQUIRE(!space.empty());
  for (size_t i = 0; i < space.size(); ++i) {
    CHECK(space[i].id == static_cast<int>(i));
    bool has_pos = false;
    std::set<int> pos_vars, all_vars;
    for (const auto& lit : space[i].body) {
      all_vars.insert(lit.v1);
      all_vars.insert(lit.v2);
      if (lit.positive) {
        has_pos = true;
        pos_vars.insert(lit.v1);
        pos_vars.insert(lit.v2);
      }
    }
    CHECK(has_pos);
    CHECK(pos_vars == all_vars);
    CHECK(space[i].body.size() <= static_cast<size_t>(kMaxBodyLits));
    Constraint copy = space[i];
    canonicalize(copy);
    CHECK(copy.body == space[i].body);
  }
  CHECK(bodies(space).size() == space.size());
  CHECK(build_space(mini_bias()) == space);

  SUBCASE("isomorphic variants are absent, representatives present") {
    CHECK(find_rule(space, ":- partnerunits(V1,V1)."));
    CHECK(find_rule(space, ":- partnerunits(V1,V2)."));
    // Only one representative of the q(Vi,Vi) orbit exists.
    size_t reflexive_q = 0;
    for (const auto& r : space) {
      if (r.body.size() == 1 && r.body[0].pred == Pred::PartnerUnits &&
          r.body[0].positive && r.body[0].v1 == r.body[0].v2) {
        ++reflexive_q;
      }
    }
    CHECK(reflexive_q == 1);
  }
  SUBCASE("recall bounds literal multiplicity") {
    for (const auto& r : space) {
      int geq = 0, q = 0;
      for (const auto& lit : r.body) {
        if (lit.pred == Pred::Unit2ZoneGeq) ++geq;
        if (lit.pred == Pred::PartnerUnits) ++q;
      }
      CHECK(geq <= 2);
      CHECK(q <= 1);
    }
  }
  SUBCASE("anti-reflexive close never repeats a variable") {
    for (const auto& r : space) {
      for (const auto& lit : r.body) {
        if (lit.pred == Pred::CloseZones) CHECK(lit.v1 != lit.v2);
      }
    }
  }
}

TEST_CASE("single-literal bias enumerates by hand") {
  std::vector<ModeDecl> bias = {{1, Pred::PartnerUnits, false, false}};
  auto space = build_space(bias);
  CHECK(space.size() == 2);
  CHECK(find_rule(space, ":- partnerunits(V1,V1)."));
  CHECK(find_rule(space, ":- partnerunits(V1,V2)."));
}

TEST_CASE("space size up to two literals matches the independent count") {
  // Frozen from an independent enumeration of canonical safe
  // bodies over this bias: 7 one-literal and 109 two-literal rules.
  auto space = build_space(mini_bias());
  size_t one = 0, two = 0;
  for (const auto& r : space) {
    if (r.body.size() == 1) ++one;
    if (r.body.size() == 2) ++two;
  }
  CHECK(one == 7);
  CHECK(two == 109);
}

TEST_CASE("subsumes on hand cases") {
  auto sub = [](const std::string& a, const std::string& b) {
    return subsumes(parse_constraint(a), parse_constraint(b));
  };
  CHECK(sub(":- partnerunits(V1,V1).",
            ":- not unit2zoneGEQ(V1,V1), partnerunits(V1,V1)."));
  CHECK(sub(":- partnerunits(V1,V2).",
            ":- not unit2zoneGEQ(V1,V1), partnerunits(V1,V1)."));
  CHECK_FALSE(sub(":- unit2zoneGEQ(V1,V1).", ":- partnerunits(V1,V1)."));
  CHECK_FALSE(sub(":- partnerunits(V1,V1).", ":- partnerunits(V1,V2)."));
  // The sign-blind case: a lone positive order literal matches a negated one.
  CHECK(sub(":- unit2zoneGEQ(V1,V1).",
            ":- not unit2zoneGEQ(V1,V1), partnerunits(V1,V1)."));
  CHECK(sub(":- unit2zoneGEQ(V1,V2).",
            ":- not unit2zoneGEQ(V2,V1), partnerunits(V1,V2)."));
  // Sign-blindness is only for lone order literals.
  CHECK_FALSE(sub(":- partnerunits(V1,V2).",
                  ":- not partnerunits(V1,V2), unit2zoneGEQ(V1,V2)."));
}

TEST_CASE("subsumer oracle reproduces the fifteen-rule set") {
  auto space = build_space(mini_bias());
  const Constraint* target =
      find_rule(space, ":- not unit2zoneGEQ(V1,V1), partnerunits(V1,V1).");
  REQUIRE(target);
  auto subs = subsumers(*target, space);
  std::vector<std::string> expected_text = {
      ":- partnerunits(V1,V1).",
      ":- partnerunits(V1,V2).",
      ":- unit2zoneGEQ(V1,V1).",
      ":- unit2zoneGEQ(V1,V2).",
      ":- not unit2zoneGEQ(V1,V1), partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V1,V2), partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V2,V1), partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V2,V2), partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V1,V1), partnerunits(V1,V1).",
      ":- not unit2zoneGEQ(V1,V1), not unit2zoneGEQ(V1,V2), "
      "partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V1,V1), not unit2zoneGEQ(V2,V1), "
      "partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V1,V1), not unit2zoneGEQ(V2,V2), "
      "partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V1,V2), not unit2zoneGEQ(V2,V1), "
      "partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V1,V2), not unit2zoneGEQ(V2,V2), "
      "partnerunits(V1,V2).",
      ":- not unit2zoneGEQ(V2,V1), not unit2zoneGEQ(V2,V2), "
      "partnerunits(V1,V2).",
  };
  std::vector<Constraint> expected;
  for (const auto& text : expected_text) {
    expected.push_back(parse_constraint(text));
  }
  CHECK(subs.size() == 15);
  CHECK(bodies(subs) == bodies(expected));
}

TEST_CASE("the close rule is subsumed only by itself") {
  auto space = build_space(mini_bias());
  const Constraint* r = find_rule(space, ":- closezones(V1,V2).");
  REQUIRE(r);
  auto subs = subsumers(*r, space);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].body == r->body);
}

TEST_CASE("subsumption is reflexive and transitive on random triples") {
  auto space = build_space(mini_bias());
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<size_t> pick(0, space.size() - 1);
  for (int trial = 0; trial < 3000; ++trial) {
    const Constraint& a = space[pick(rng)];
    const Constraint& b = space[pick(rng)];
    const Constraint& c = space[pick(rng)];
    CHECK(subsumes(a, a));
    if (subsumes(a, b) && subsumes(b, c)) CHECK(subsumes(a, c));
  }
}

TEST_CASE("subsumption is semantically sound on enumerated solutions") {
  PupInstance inst = build_topology(Family::Double, 4);
  for (int u = 1; u <= 3; ++u) inst.units.push_back(u);
  SearchConfig cfg;
  auto sols = enumerate_solutions(inst, {}, cfg);
  REQUIRE(!sols.empty());
  std::vector<std::set<GroundAtom>> atom_sets;
  for (size_t i = 0; i < sols.size() && i < 40; ++i) {
    atom_sets.push_back(solution_atoms(inst, sols[i]));
  }
  auto space = build_space(mini_bias());
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<size_t> pick(0, space.size() - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const Constraint& r1 = space[pick(rng)];
    const Constraint& r2 = space[pick(rng)];
    if (!subsumes(r1, r2)) continue;
    for (const auto& atoms : atom_sets) {
      if (violates(r2, inst, atoms)) CHECK(violates(r1, inst, atoms));
    }
  }
}

TEST_CASE("scoring schemes") {
  Constraint c = parse_constraint(
      ":- unit2zoneGEQ(V1,V1), closezones(V1,V2), partnerunits(V2,V3).");
  CHECK(score(c, ScoreScheme::Default) == 3);
  CHECK(score(c, ScoreScheme::Custom) == 6);
  CHECK(score(parse_constraint(":- zone2sensor(V1,V2)."),
              ScoreScheme::Custom) == 1);
  CHECK(score(parse_constraint(":- partnerunits(V1,V1)."),
              ScoreScheme::Custom) == 2);
}

TEST_CASE("constraints print and parse round-trip") {
  auto space = build_space(mini_bias());
  for (const auto& r : space) {
    Constraint back = parse_constraint(to_string(r));
    CHECK(back.body == r.body);
  }
  auto all = parse_constraints(write_constraints(space));
  REQUIRE(all.size() == space.size());
  for (size_t i = 0; i < all.size(); ++i) CHECK(all[i].body == space[i].body);
  CHECK_THROWS_AS(parse_constraint(":- nosuch(V1,V2)."),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_constraint("partnerunits(V1,V2)."),
                  std::invalid_argument);
}

TEST_CASE("maximal order rule is subsumed by its sub-bodies") {
  auto space = build_space(mini_bias());
  const Constraint* full = find_rule(
      space, ":- unit2zoneGEQ(V1,V1), unit2zoneGEQ(V1,V2).");
  REQUIRE(full);
  auto subs = bodies(subsumers(*full, space));
  CHECK(subs.count(parse_constraint(":- unit2zoneGEQ(V1,V1).").body));
  CHECK(subs.count(parse_constraint(":- unit2zoneGEQ(V1,V2).").body));
}
