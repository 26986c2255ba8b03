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

#include "puplift/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

namespace puplift {

namespace {

using Clock = std::chrono::steady_clock;

struct DynLit {
  bool positive;
  GroundAtom atom;
};

struct CompiledConstraint {
  std::vector<DynLit> lits;
  int check_depth = 0;
};

class Search {
 public:
  Search(const PupInstance& inst, const std::vector<GroundConstraint>& extra,
         const SearchConfig& cfg)
      : inst_(inst), cfg_(cfg), close_(derive_close(inst)) {
    nz_ = inst.num_zones();
    ns_ = inst.num_sensors();
    nu_ = inst.num_units();
    nvar_ = nz_ + ns_;
    zu_.assign(nz_, 0);
    su_.assign(ns_, 0);
    zcnt_.assign(nu_ + 1, 0);
    scnt_.assign(nu_ + 1, 0);
    pc_.assign((nu_ + 1) * (nu_ + 1), 0);
    deg_.assign(nu_ + 1, 0);
    sensor_zones_.assign(ns_ + 1, {});
    for (const auto& [z, s] : inst.edges) sensor_zones_[s].push_back(z);
    compile(extra);
    build_value_orders();
  }

  SearchOutcome run(const std::function<bool(const Solution&)>& on_solution) {
    on_solution_ = &on_solution;
    deadline_.reset();
    if (cfg_.timeout_ms) {
      deadline_ = Clock::now() + std::chrono::milliseconds(*cfg_.timeout_ms);
    }
    if (!unsat_static_ && nu_ > 0) descend(0);
    if (nvar_ == 0 && !unsat_static_) {
      // Degenerate empty instance: the empty assignment is the one solution.
      outcome_.count = 1;
    }
    return outcome_;
  }

 private:
  void compile(const std::vector<GroundConstraint>& extra) {
    buckets_.assign(std::max(nvar_, 1), {});
    for (const auto& gc : extra) {
      CompiledConstraint cc;
      bool inert = false;
      for (const auto& lit : gc.lits) {
        int st = static_status(lit.atom);
        if (st == kDynamic) {
          cc.lits.push_back({lit.positive, lit.atom});
          cc.check_depth = std::max(cc.check_depth, atom_depth(lit.atom));
          continue;
        }
        bool truth = (st == kTrue);
        if (lit.positive != truth) {
          inert = true;  // literal can never contribute to a violation
          break;
        }
        // Literal condition holds in every total solution: drop it.
      }
      if (inert) continue;
      if (cc.lits.empty()) {
        unsat_static_ = true;  // constraint violated by every solution
        return;
      }
      int idx = static_cast<int>(compiled_.size());
      compiled_.push_back(std::move(cc));
      buckets_[compiled_[idx].check_depth].push_back(idx);
    }
  }

  static constexpr int kDynamic = -1, kFalse = 0, kTrue = 1;

  // Truth status decidable from the instance alone, or kDynamic.
  int static_status(const GroundAtom& a) const {
    switch (a.pred) {
      case Pred::Zone2Sensor:
        return inst_.has_edge(a.a, a.b) ? kTrue : kFalse;
      case Pred::CloseSensors:
      case Pred::CloseZones:
        return close_.count(a) ? kTrue : kFalse;
      case Pred::Unit2Zone:
      case Pred::Unit2ZoneGeq:
        if (a.a < 1 || a.a > nu_ || a.b < 1 || a.b > nz_) return kFalse;
        return kDynamic;
      case Pred::Unit2Sensor:
      case Pred::Unit2SensorGeq:
        if (a.a < 1 || a.a > nu_ || a.b < 1 || a.b > ns_) return kFalse;
        return kDynamic;
      case Pred::PartnerUnits:
        if (a.a < 1 || a.a > nu_ || a.b < 1 || a.b > nu_ || a.a == a.b) {
          return kFalse;
        }
        return kDynamic;
    }
    return kFalse;
  }

  // Index of the decision after which the atom's truth is fixed.
  int atom_depth(const GroundAtom& a) const {
    switch (a.pred) {
      case Pred::Unit2Zone:
      case Pred::Unit2ZoneGeq:
        return a.b - 1;
      case Pred::Unit2Sensor:
      case Pred::Unit2SensorGeq:
        return nz_ + a.b - 1;
      case Pred::PartnerUnits:
        return nvar_ - 1;
      default:
        return 0;
    }
  }

  bool atom_true(const GroundAtom& a) const {
    switch (a.pred) {
      case Pred::Unit2Zone: return zu_[a.b - 1] == a.a;
      case Pred::Unit2ZoneGeq: return zu_[a.b - 1] >= a.a;
      case Pred::Unit2Sensor: return su_[a.b - 1] == a.a;
      case Pred::Unit2SensorGeq: return su_[a.b - 1] >= a.a;
      case Pred::PartnerUnits: return pc_[a.a * (nu_ + 1) + a.b] > 0;
      default: return false;  // statics never reach here
    }
  }

  bool violated_at(int depth) const {
    for (int idx : buckets_[depth]) {
      const auto& cc = compiled_[idx];
      bool fired = true;
      for (const auto& lit : cc.lits) {
        if (atom_true(lit.atom) != lit.positive) {
          fired = false;
          break;
        }
      }
      if (fired) return true;
    }
    return false;
  }

  void build_value_orders() {
    std::mt19937_64 rng(cfg_.seed);
    values_.assign(nvar_, {});
    for (int d = 0; d < nvar_; ++d) {
      values_[d].resize(nu_);
      std::iota(values_[d].begin(), values_[d].end(), 1);
      if (cfg_.randomize_values) {
        std::shuffle(values_[d].begin(), values_[d].end(), rng);
      }
    }
  }

  bool out_of_time() {
    if (!deadline_) return false;
    if (++tick_ % 512 != 0) return false;
    return Clock::now() >= *deadline_;
  }

  bool assign_zone(int z, int u) {
    if (zcnt_[u] >= inst_.ucap) return false;
    zu_[z - 1] = u;
    ++zcnt_[u];
    return true;
  }

  void unassign_zone(int z) {
    --zcnt_[zu_[z - 1]];
    zu_[z - 1] = 0;
  }

  bool assign_sensor(int s, int u) {
    if (scnt_[u] >= inst_.ucap) return false;
    su_[s - 1] = u;
    ++scnt_[u];
    bool ok = true;
    size_t done = 0;
    for (int z : sensor_zones_[s]) {
      int v = zu_[z - 1];
      ++done;
      if (v == u) continue;
      if (pc_[u * (nu_ + 1) + v]++ == 0) {
        ++pc_[v * (nu_ + 1) + u];
        ++deg_[u];
        ++deg_[v];
        if (deg_[u] > inst_.iucap || deg_[v] > inst_.iucap) {
          ok = false;
          break;
        }
      } else {
        ++pc_[v * (nu_ + 1) + u];
      }
    }
    if (!ok) {
      revert_sensor_partners(s, u, done);
      --scnt_[u];
      su_[s - 1] = 0;
    }
    return ok;
  }

  void revert_sensor_partners(int s, int u, size_t upto) {
    for (size_t i = 0; i < upto; ++i) {
      int z = sensor_zones_[s][i];
      int v = zu_[z - 1];
      if (v == u) continue;
      if (--pc_[u * (nu_ + 1) + v] == 0) {
        --deg_[u];
        --deg_[v];
      }
      --pc_[v * (nu_ + 1) + u];
    }
  }

  void unassign_sensor(int s) {
    int u = su_[s - 1];
    revert_sensor_partners(s, u, sensor_zones_[s].size());
    --scnt_[u];
    su_[s - 1] = 0;
  }

  // Returns false to unwind the whole search (limit/timeout/consumer stop).
  bool descend(int depth) {
    if (depth == nvar_) {
      ++outcome_.count;
      Solution sol{zu_, su_};
      if (!(*on_solution_)(sol)) {
        outcome_.truncated = true;
        return false;
      }
      if (cfg_.limit && outcome_.count >= *cfg_.limit) {
        outcome_.truncated = true;
        return false;
      }
      return true;
    }
    bool is_zone = depth < nz_;
    int item = is_zone ? depth + 1 : depth - nz_ + 1;
    for (int u : values_[depth]) {
      if (out_of_time()) {
        outcome_.truncated = true;
        return false;
      }
      bool ok = is_zone ? assign_zone(item, u) : assign_sensor(item, u);
      if (!ok) continue;
      ++outcome_.nodes;
      if (!violated_at(depth)) {
        if (!descend(depth + 1)) {
          if (is_zone) unassign_zone(item); else unassign_sensor(item);
          return false;
        }
      }
      if (is_zone) unassign_zone(item); else unassign_sensor(item);
    }
    return true;
  }

  const PupInstance& inst_;
  SearchConfig cfg_;
  std::set<GroundAtom> close_;
  int nz_ = 0, ns_ = 0, nu_ = 0, nvar_ = 0;
  std::vector<int> zu_, su_, zcnt_, scnt_, pc_, deg_;
  std::vector<std::vector<int>> sensor_zones_;
  std::vector<CompiledConstraint> compiled_;
  std::vector<std::vector<int>> buckets_;
  std::vector<std::vector<int>> values_;
  bool unsat_static_ = false;
  SearchOutcome outcome_;
  const std::function<bool(const Solution&)>* on_solution_ = nullptr;
  std::optional<Clock::time_point> deadline_;
  uint64_t tick_ = 0;
};

}  // namespace

SearchOutcome solve(const PupInstance& inst,
                    const std::vector<GroundConstraint>& extra,
                    const SearchConfig& cfg,
                    const std::function<bool(const Solution&)>& on_solution) {
  Search search(inst, extra, cfg);
  return search.run(on_solution);
}

std::vector<Solution> enumerate_solutions(
    const PupInstance& inst, const std::vector<GroundConstraint>& extra,
    const SearchConfig& cfg, SearchOutcome* outcome) {
  std::vector<Solution> out;
  SearchOutcome o = solve(inst, extra, cfg, [&](const Solution& s) {
    out.push_back(s);
    return true;
  });
  if (outcome) *outcome = o;
  return out;
}

uint64_t count_solutions(const PupInstance& inst,
                         const std::vector<GroundConstraint>& extra,
                         const SearchConfig& cfg, SearchOutcome* outcome) {
  SearchOutcome o = solve(inst, extra, cfg, [](const Solution&) { return true; });
  if (outcome) *outcome = o;
  return o.count;
}

AcceptingResult accepting_answer_set_exists(
    const PupInstance& inst, const std::set<GroundAtom>& inclusions,
    const std::set<GroundAtom>& exclusions,
    const std::vector<Constraint>& hypothesis,
    std::optional<int64_t> timeout_ms) {
  for (const auto& a : inclusions) {
    if (exclusions.count(a)) {
      throw std::invalid_argument("inclusions and exclusions intersect");
    }
  }
  std::vector<GroundConstraint> extra = ground_all(hypothesis, inst);
  for (const auto& a : inclusions) extra.push_back({{{false, a}}});
  for (const auto& a : exclusions) extra.push_back({{{true, a}}});
  SearchConfig cfg;
  cfg.limit = 1;
  cfg.timeout_ms = timeout_ms;
  SearchOutcome outcome;
  std::vector<Solution> sols = enumerate_solutions(inst, extra, cfg, &outcome);
  if (!sols.empty()) return {Ternary::True, sols.front()};
  if (outcome.truncated) return {Ternary::Unknown, std::nullopt};
  return {Ternary::False, std::nullopt};
}

namespace {

// Upper bound of the typed constant range for each argument position.
std::pair<int, int> position_bounds(Pred p, const PupInstance& inst) {
  int nu = inst.num_units(), nz = inst.num_zones(), ns = inst.num_sensors();
  switch (p) {
    case Pred::Unit2Zone:
    case Pred::Unit2ZoneGeq: return {nu, nz};
    case Pred::Unit2Sensor:
    case Pred::Unit2SensorGeq: return {nu, ns};
    case Pred::PartnerUnits: return {nu, nu};
    case Pred::Zone2Sensor: return {nz, ns};
    case Pred::CloseSensors: return {ns, ns};
    case Pred::CloseZones: return {nz, nz};
  }
  return {0, 0};
}

// Per-variable domain bound: intersection of all typed positions.
std::vector<int> variable_bounds(const Constraint& c, const PupInstance& inst) {
  std::vector<int> ub(kMaxVars + 1, -1);
  for (const auto& lit : c.body) {
    auto [b1, b2] = position_bounds(lit.pred, inst);
    auto meet = [&](int v, int b) {
      if (ub[v] < 0 || b < ub[v]) ub[v] = b;
    };
    meet(lit.v1, b1);
    meet(lit.v2, b2);
  }
  return ub;
}

bool domain_literal_true(const GroundAtom& a, const PupInstance& inst,
                         const std::set<GroundAtom>& close) {
  if (a.pred == Pred::Zone2Sensor) return inst.has_edge(a.a, a.b);
  return close.count(a) > 0;
}

}  // namespace

std::vector<GroundConstraint> ground_constraint(const Constraint& c,
                                                const PupInstance& inst) {
  std::vector<int> vars;
  for (const auto& lit : c.body) {
    for (int v : {lit.v1, lit.v2}) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
        vars.push_back(v);
      }
    }
  }
  std::sort(vars.begin(), vars.end());
  std::vector<int> ub = variable_bounds(c, inst);
  std::set<GroundAtom> close = derive_close(inst);

  std::vector<GroundConstraint> out;
  std::vector<int> subst(kMaxVars + 1, 0);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == vars.size()) {
      GroundConstraint gc;
      for (const auto& lit : c.body) {
        GroundAtom a{lit.pred, subst[lit.v1], subst[lit.v2]};
        if (lit.positive && is_domain_pred(lit.pred) &&
            !domain_literal_true(a, inst, close)) {
          return;  // substitution dropped at grounding time
        }
        gc.lits.push_back({lit.positive, a});
      }
      out.push_back(std::move(gc));
      return;
    }
    int v = vars[i];
    for (int val = 1; val <= ub[v]; ++val) {
      subst[v] = val;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<GroundConstraint> ground_all(const std::vector<Constraint>& rules,
                                         const PupInstance& inst) {
  std::vector<GroundConstraint> out;
  for (const auto& c : rules) {
    auto g = ground_constraint(c, inst);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

bool violates(const Constraint& c, const PupInstance& inst,
              const std::set<GroundAtom>& sol_atoms) {
  std::vector<int> vars;
  for (const auto& lit : c.body) {
    for (int v : {lit.v1, lit.v2}) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
        vars.push_back(v);
      }
    }
  }
  std::sort(vars.begin(), vars.end());
  std::vector<int> ub = variable_bounds(c, inst);

  // Literals become checkable once all their variables are bound; failing
  // early prunes most substitutions.
  auto bound_after = [&](const BodyLit& lit) {
    size_t last = 0;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == lit.v1 || vars[i] == lit.v2) last = i;
    }
    return last;
  };
  std::vector<std::vector<const BodyLit*>> check_at(vars.size());
  for (const auto& lit : c.body) check_at[bound_after(lit)].push_back(&lit);

  std::vector<int> subst(kMaxVars + 1, 0);
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (i == vars.size()) return true;
    int v = vars[i];
    for (int val = 1; val <= ub[v]; ++val) {
      subst[v] = val;
      bool ok = true;
      for (const BodyLit* lit : check_at[i]) {
        GroundAtom a{lit->pred, subst[lit->v1], subst[lit->v2]};
        if ((sol_atoms.count(a) > 0) != lit->positive) {
          ok = false;
          break;
        }
      }
      if (ok && rec(i + 1)) return true;
    }
    return false;
  };
  if (vars.empty()) {
    for (const auto& lit : c.body) {
      GroundAtom a{lit.pred, 0, 0};
      if ((sol_atoms.count(a) > 0) != lit.positive) return false;
    }
    return true;
  }
  return rec(0);
}

}  // namespace puplift
