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
//
// Acceptance suite: each test prints exactly one CRITERION line.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "puplift/examples.hpp"
#include "puplift/hypothesis.hpp"
#include "puplift/instance.hpp"
#include "puplift/learner.hpp"
#include "puplift/solver.hpp"
#include "puplift/stats.hpp"
#include "puplift/symmetry.hpp"

using namespace puplift;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "CRITERION " << criterion << ": " << (pass ? "PASS" : "FAIL")
            << " - " << detail << "\n";
  CHECK_MESSAGE(pass, "criterion ", criterion, ": ", detail);
}

PupInstance small_ladder() {
  PupInstance inst = build_topology(Family::Double, 4);
  inst.units = {1, 2, 3};
  inst.name = "ladder-4";
  return inst;
}

const Constraint* find_rule(const std::vector<Constraint>& space,
                            const std::string& text) {
  Constraint want = parse_constraint(text);
  for (const auto& r : space) {
    if (r.body == want.body) return &r;
  }
  return nullptr;
}

std::set<std::vector<BodyLit>> bodies(const std::vector<Constraint>& rules) {
  std::set<std::vector<BodyLit>> out;
  for (const auto& r : rules) out.insert(r.body);
  return out;
}

std::vector<ModeDecl> mini_bias() {
  return {
      {1, Pred::Zone2Sensor, false, false},
      {1, Pred::CloseZones, true, true},
      {2, Pred::Unit2ZoneGeq, false, false},
      {1, Pred::PartnerUnits, false, false},
  };
}

Solution pinned_solution(const CdpiExample& e) {
  Solution sol;
  sol.zone_unit.assign(e.context.num_zones(), 0);
  sol.sensor_unit.assign(e.context.num_sensors(), 0);
  for (const auto& atom : e.inclusions) {
    if (atom.pred == Pred::Unit2Zone) sol.zone_unit[atom.b - 1] = atom.a;
    if (atom.pred == Pred::Unit2Sensor) sol.sensor_unit[atom.b - 1] = atom.a;
  }
  return sol;
}

AtomPermutation compose(const AtomPermutation& p, const AtomPermutation& q) {
  auto comp = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(b.size());
    for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i] - 1];
    return out;
  };
  return {comp(p.zone_map, q.zone_map), comp(p.sensor_map, q.sensor_map),
          comp(p.unit_map, q.unit_map)};
}

std::vector<AtomPermutation> full_group(
    const std::vector<AtomPermutation>& gens, const PupInstance& inst) {
  AtomPermutation id;
  id.zone_map.resize(inst.num_zones());
  id.sensor_map.resize(inst.num_sensors());
  id.unit_map.resize(inst.num_units());
  for (int i = 0; i < inst.num_zones(); ++i) id.zone_map[i] = i + 1;
  for (int i = 0; i < inst.num_sensors(); ++i) id.sensor_map[i] = i + 1;
  for (int i = 0; i < inst.num_units(); ++i) id.unit_map[i] = i + 1;
  std::vector<AtomPermutation> group{id};
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < group.size(); ++i) {
      for (const auto& g : gens) {
        AtomPermutation next = compose(g, group[i]);
        if (std::find(group.begin(), group.end(), next) == group.end()) {
          group.push_back(next);
          grew = true;
        }
      }
    }
  }
  return group;
}

// One learning run from double-6 with the generalization positives.
CdilpResult learn_run(uint64_t seed, int64_t budget_ms,
                      const std::vector<Constraint>& space) {
  PupInstance train = generate_instance(Family::Double, 6, false, seed);
  auto gens = detect_generators(train);
  auto ord = AtomOrder::from_generators(train, gens);
  auto er = scalable_fullsbcs(train, gens, ord, 20, 5, seed);
  LearnerState state;
  state.space = space;
  state.examples = er.examples;
  for (int zones : {8, 10, 12}) {
    CdpiExample gen =
        gen_positive(generate_instance(Family::Double, zones, false, seed));
    // Gen contexts exceed the 5 s enumeration threshold: analyze by sbca.
    state.sbca_example_ids.insert(gen.id);
    state.examples.push_back(std::move(gen));
  }
  CdilpConfig cfg;
  cfg.budget_ms = budget_ms;
  return cdilp(std::move(state), cfg);
}

}  // namespace

TEST_CASE("criterion 1: solution count oracle") {
  PupInstance fig1 = make_fig1_instance();
  SearchConfig cfg;
  uint64_t count = count_solutions(fig1, {}, cfg);

  // Naive generate-and-test oracle on the 4-zone sub-instance.
  PupInstance lad = small_ladder();
  auto fast = enumerate_solutions(lad, {}, cfg);
  std::set<Solution> fast_set(fast.begin(), fast.end());
  std::set<Solution> naive;
  const int z = lad.num_zones(), s = lad.num_sensors(), u = lad.num_units();
  uint64_t total = 1;
  for (int i = 0; i < z + s; ++i) total *= u;
  for (uint64_t code = 0; code < total; ++code) {
    Solution sol;
    uint64_t c = code;
    for (int i = 0; i < z; ++i) {
      sol.zone_unit.push_back(static_cast<int>(c % u) + 1);
      c /= u;
    }
    for (int i = 0; i < s; ++i) {
      sol.sensor_unit.push_back(static_cast<int>(c % u) + 1);
      c /= u;
    }
    if (valid_solution(lad, sol)) naive.insert(sol);
  }
  bool pass = count == 145368 && fast_set == naive;
  std::ostringstream d;
  d << "reference instance has " << count
    << " solutions (expected 145368); 4-zone naive oracle "
    << (fast_set == naive ? "matches" : "differs") << " (" << naive.size()
    << " solutions)";
  report(1, pass, d.str());
}

TEST_CASE("criterion 2: dominated fraction via full orbit partitioning") {
  PupInstance fig1 = make_fig1_instance();
  auto gens = detect_generators(fig1);
  SearchConfig cfg;
  auto sols = enumerate_solutions(fig1, {}, cfg);
  std::set<Solution> explored;
  uint64_t orbits = 0;
  for (const auto& sol : sols) {
    if (explored.count(sol)) continue;
    ++orbits;
    for (const auto& m : orbit(fig1, sol, gens).members) explored.insert(m);
  }
  uint64_t graph_autos = 0;
  for (const auto& g : gens) {
    bool unit_id = true;
    for (size_t i = 0; i < g.unit_map.size(); ++i) {
      if (g.unit_map[i] != static_cast<int>(i) + 1) unit_id = false;
    }
    if (unit_id) ++graph_autos;
  }
  double fraction =
      1.0 - static_cast<double>(orbits) / static_cast<double>(sols.size());
  bool pass = explored.size() == sols.size() &&
              std::fabs(fraction - 0.989) <= 0.002;
  std::ostringstream d;
  d << "dominated fraction " << fraction << " over " << sols.size()
    << " solutions in " << orbits << " orbits (tolerance 0.989 +- 0.002)";
  if (!pass) {
    // Audit trail: assumed group is Aut(G) x Sym(U) generated by the
    // detected automorphisms and unit transpositions.
    d << "; group assumption Aut(G) x Sym(U) with " << graph_autos
      << " non-trivial graph automorphisms and "
      << fig1.num_units() << " interchangeable units (order "
      << (graph_autos + 1) * 24 << ")";
  }
  report(2, pass, d.str());
}

TEST_CASE("criterion 3: subsumer oracle") {
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
  const Constraint* close = find_rule(space, ":- closezones(V1,V2).");
  REQUIRE(close);
  auto close_subs = subsumers(*close, space);
  bool pass = subs.size() == 15 && bodies(subs) == bodies(expected) &&
              close_subs.size() == 1 && close_subs[0].body == close->body;
  std::ostringstream d;
  d << "order-literal rule has " << subs.size()
    << " subsumers (expected the 15 reference rules, "
    << (bodies(subs) == bodies(expected) ? "exact match" : "MISMATCH")
    << "); close rule has " << close_subs.size() << " (expected itself only)";
  report(3, pass, d.str());
}

TEST_CASE("criterion 4: scoring oracle") {
  Constraint r = parse_constraint(
      ":- unit2zoneGEQ(V1,V1), closezones(V1,V2), partnerunits(V2,V3).");
  int def = score(r, ScoreScheme::Default);
  int cus = score(r, ScoreScheme::Custom);
  bool pass = def == 3 && cus == 6;
  std::ostringstream d;
  d << "three-literal rule scores " << def << " default (expected 3) and "
    << cus << " custom (expected 6)";
  report(4, pass, d.str());
}

TEST_CASE("criterion 5: subsumption conflict analysis property suite") {
  struct Event {
    CdpiExample example;
    std::vector<Constraint> hypothesis;
    CoverageFormula formula;
  };
  std::vector<Event> events;
  auto space = build_space(pup_bias());
  for (uint64_t seed = 1; seed <= 60 && events.size() < 200; ++seed) {
    PupInstance inst = generate_instance(Family::Double, 6, false, seed);
    auto gens = detect_generators(inst);
    auto ord = AtomOrder::from_generators(inst, gens);
    auto er = scalable_fullsbcs(inst, gens, ord, 8, 2, seed);
    if (er.one_sided || er.examples.empty()) continue;
    LearnerState state;
    state.space = space;
    for (auto e : er.examples) {
      if (!e.positive) e.weight = 30;  // favor rules over sacrifices
      if (e.positive) state.sbca_example_ids.insert(e.id);
      state.examples.push_back(std::move(e));
    }
    CdilpConfig cfg;
    cfg.budget_ms = 10000;
    cfg.on_sbca = [&](const CdpiExample& e, const std::vector<Constraint>& h,
                      const CoverageFormula& f) {
      if (events.size() < 200) events.push_back({e, h, f});
    };
    cdilp(std::move(state), cfg);
  }
  size_t false_at_h = 0, sampled = 0, true_at_covering = 0;
  std::mt19937_64 rng(2026);
  for (const auto& ev : events) {
    std::set<int> hyp_ids;
    for (const auto& r : ev.hypothesis) hyp_ids.insert(r.id);
    if (!ev.formula.satisfied_by(hyp_ids)) ++false_at_h;
    // Rejection-sample covering hypotheses and require the formula holds.
    int accepted = 0, attempts = 0;
    while (accepted < 2 && attempts < 40) {
      ++attempts;
      std::set<int> ids;
      size_t k = 1 + rng() % 3;
      std::vector<Constraint> cand;
      while (ids.size() < k) {
        int id = static_cast<int>(rng() % space.size());
        if (ids.insert(id).second) cand.push_back(space[id]);
      }
      if (check_coverage(ev.example, cand, 2000).covered != Ternary::True) {
        continue;
      }
      ++accepted;
      ++sampled;
      if (ev.formula.satisfied_by(ids)) ++true_at_covering;
    }
  }
  bool pass = events.size() >= 200 && false_at_h == events.size() &&
              sampled > 0 && true_at_covering == sampled;
  std::ostringstream d;
  d << events.size() << " conflict events; formula false at H in "
    << false_at_h << "/" << events.size() << "; true for "
    << true_at_covering << "/" << sampled << " sampled covering hypotheses";
  report(5, pass, d.str());
}

TEST_CASE("criterion 6: fullSBCs output bounds") {
  PupInstance inst = generate_instance(Family::Double, 6, false, 1);
  auto gens = detect_generators(inst);
  auto ord = AtomOrder::from_generators(inst, gens);
  size_t violations = 0;
  std::ostringstream detail;
  for (uint64_t cells : {1, 5, 20}) {
    for (uint64_t mcs : {0, 1, 5}) {
      auto er = scalable_fullsbcs(inst, gens, ord, cells, mcs, 7);
      uint64_t pos = 0, neg = 0;
      std::vector<std::set<Solution>> orbits;
      bool ok = true;
      for (const auto& e : er.examples) {
        if (!e.positive) {
          ++neg;
          continue;
        }
        ++pos;
        Solution sol = pinned_solution(e);
        if (dominated(inst, sol, gens, ord)) ok = false;
        auto orb = orbit(inst, sol, gens);
        orbits.emplace_back(orb.members.begin(), orb.members.end());
      }
      for (size_t i = 0; i < orbits.size() && ok; ++i) {
        for (size_t j = i + 1; j < orbits.size(); ++j) {
          for (const auto& m : orbits[i]) {
            if (orbits[j].count(m)) {
              ok = false;
              break;
            }
          }
        }
      }
      if (pos > cells || neg > cells * mcs || !ok) {
        ++violations;
        detail << " (" << cells << "," << mcs << ")";
      }
    }
  }
  bool pass = violations == 0;
  std::ostringstream d;
  d << "sweep {1,5,20}x{0,1,5}: " << violations
    << " violations of size bounds, undominated positives and disjoint "
       "orbits"
    << detail.str();
  report(6, pass, d.str());
}

TEST_CASE("criterion 7: end-to-end effectiveness on double instances") {
  auto space = build_space(pup_bias());
  const std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<CdilpResult> runs;
  for (uint64_t seed : seeds) runs.push_back(learn_run(seed, 60000, space));

  // (a) Every Gen instance stays satisfiable under every learned set.
  bool gen_sat = true;
  for (const auto& run : runs) {
    for (int zones : {8, 10, 12}) {
      PupInstance inst = generate_instance(Family::Double, zones, false, 1);
      SearchConfig cfg;
      cfg.limit = 1;
      cfg.timeout_ms = 120000;
      if (count_solutions(inst, ground_all(run.hypothesis, inst), cfg) == 0) {
        gen_sat = false;
      }
    }
  }

  // (b) A held-out satisfiable double instance loses solutions but not all.
  PupInstance held = small_ladder();
  SearchConfig cfg;
  uint64_t plain_count = count_solutions(held, {}, cfg);
  bool pruned = false;
  uint64_t best_constrained = plain_count;
  for (const auto& run : runs) {
    uint64_t c = count_solutions(held, ground_all(run.hypothesis, held), cfg);
    if (c >= 1 && c < plain_count) {
      pruned = true;
      best_constrained = std::min(best_constrained, c);
    }
  }

  // (c) Median unsat proof nodes with ABK <= plain, per un-double instance.
  bool nodes_ok = true;
  std::ostringstream node_detail;
  for (int zones : {6, 8}) {
    PupInstance un = generate_instance(Family::Double, zones, true, 1);
    SearchOutcome plain_out;
    SearchConfig scfg;
    count_solutions(un, {}, scfg, &plain_out);
    std::vector<uint64_t> abk_nodes;
    for (const auto& run : runs) {
      SearchOutcome out;
      count_solutions(un, ground_all(run.hypothesis, un), scfg, &out);
      abk_nodes.push_back(out.nodes);
    }
    std::sort(abk_nodes.begin(), abk_nodes.end());
    uint64_t median = abk_nodes[abk_nodes.size() / 2];
    node_detail << " " << un.name << ": median " << median << " vs plain "
                << plain_out.nodes << ";";
    if (median > plain_out.nodes) nodes_ok = false;
  }

  bool pass = gen_sat && pruned && nodes_ok;
  std::ostringstream d;
  d << "Gen satisfiable under all " << runs.size() << " learned sets: "
    << (gen_sat ? "yes" : "NO") << "; held-out " << held.name << " count "
    << best_constrained << " vs " << plain_count
    << " unconstrained (pruned: " << (pruned ? "yes" : "NO") << ");"
    << node_detail.str();
  report(7, pass, d.str());
}

TEST_CASE("criterion 8: orbit closure vs brute-force group oracle") {
  PupInstance inst = small_ladder();
  auto gens = detect_generators(inst);
  auto group = full_group(gens, inst);
  SearchConfig cfg;
  auto sols = enumerate_solutions(inst, {}, cfg);
  std::mt19937_64 rng(404);
  size_t mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Solution& sol = sols[rng() % sols.size()];
    std::set<Solution> expect;
    for (const auto& g : group) expect.insert(apply(g, sol));
    auto orb = orbit(inst, sol, gens);
    std::set<Solution> got(orb.members.begin(), orb.members.end());
    if (got != expect || orb.truncated) ++mismatches;
  }
  bool pass = mismatches == 0;
  std::ostringstream d;
  d << "50 random solutions on " << inst.name << " (group order "
    << group.size() << "): " << mismatches << " closure mismatches";
  report(8, pass, d.str());
}

TEST_CASE("criterion 9: Wilcoxon signed-rank sanity") {
  std::vector<double> x = {1, 2, 3, 4, 5, 6};
  std::vector<double> y = {2, 4, 6, 8, 10, 12};
  auto r = wilcoxon_signed_rank(x, y);
  // Exact enumeration oracle: 2 of the 2^6 sign assignments are at least
  // as extreme as an all-one-signed outcome.
  double expected_p = 2.0 / 64.0;
  bool pass = r.n == 6 && r.exact && r.statistic == 0.0 &&
              std::fabs(r.p_value - expected_p) < 1e-9;
  std::ostringstream d;
  d << "n=6 one-signed pairs: statistic " << r.statistic
    << " (expected 0), p " << r.p_value << " (oracle " << expected_p
    << ", tolerance 1e-9)";
  report(9, pass, d.str());
}
