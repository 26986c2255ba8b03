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

#include "puplift/learner.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>

namespace puplift {

bool CoverageFormula::satisfied_by(const std::set<int>& hypothesis_ids) const {
  for (const auto& conj : disjuncts) {
    bool all = true;
    for (const auto& lit : conj.lits) {
      if ((hypothesis_ids.count(lit.id) > 0) != lit.positive) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

CoverageFormula sbca(const CdpiExample& e, const std::vector<Constraint>& hyp,
                     const std::vector<Constraint>& space) {
  (void)e;
  if (hyp.empty()) {
    throw std::logic_error(
        "sbca called with an empty hypothesis; an empty constraint set "
        "covers every satisfiable positive example");
  }
  CoverageFormula formula;
  for (const auto& r : hyp) {
    Conjunction conj;
    for (const auto& sub : subsumers(r, space)) {
      conj.lits.push_back({false, sub.id});
    }
    std::sort(conj.lits.begin(), conj.lits.end());
    formula.disjuncts.push_back(std::move(conj));
  }
  return formula;
}

CoverageFormula semantic_conflict_negative(const CdpiExample& e,
                                           const std::vector<Constraint>& space,
                                           const Solution& witness) {
  CoverageFormula formula;
  std::set<GroundAtom> atoms = solution_atoms(e.context, witness);
  for (const auto& r : space) {
    if (violates(r, e.context, atoms)) {
      formula.disjuncts.push_back({{{true, r.id}}});
    }
  }
  return formula;
}

std::optional<CoverageFormula> semantic_conflict_positive(
    const CdpiExample& e, const std::vector<Constraint>& space,
    uint64_t budget) {
  std::vector<GroundConstraint> pins;
  for (const auto& atom : e.inclusions) pins.push_back({{{false, atom}}});
  for (const auto& atom : e.exclusions) pins.push_back({{{true, atom}}});
  SearchConfig cfg;
  cfg.limit = budget + 1;
  SearchOutcome outcome;
  std::vector<Solution> candidates =
      enumerate_solutions(e.context, pins, cfg, &outcome);
  if (candidates.size() > budget) return std::nullopt;
  CoverageFormula formula;
  for (const auto& sol : candidates) {
    std::set<GroundAtom> atoms = solution_atoms(e.context, sol);
    Conjunction conj;
    for (const auto& r : space) {
      if (violates(r, e.context, atoms)) conj.lits.push_back({false, r.id});
    }
    formula.disjuncts.push_back(std::move(conj));
  }
  return formula;
}

CoverageCheck check_coverage(const CdpiExample& e,
                             const std::vector<Constraint>& hyp,
                             std::optional<int64_t> timeout_ms) {
  AcceptingResult res = accepting_answer_set_exists(
      e.context, e.inclusions, e.exclusions, hyp, timeout_ms);
  CoverageCheck check;
  check.witness = res.witness;
  switch (res.status) {
    case Ternary::True:
      check.covered = e.positive ? Ternary::True : Ternary::False;
      break;
    case Ternary::False:
      check.covered = e.positive ? Ternary::False : Ternary::True;
      break;
    case Ternary::Unknown: check.covered = Ternary::Unknown; break;
  }
  return check;
}

namespace {

struct OptContext {
  std::map<int, uint64_t> rule_cost;
  std::map<int, const Constraint*> rule_by_id;
  // Examples with constraints, sorted by id.
  std::vector<std::pair<std::string, std::vector<const CoverageFormula*>>>
      grouped;
  std::map<std::string, uint64_t> weight;
  std::vector<int> candidates;  // positively mentioned ids

  uint64_t best_cost = 0;
  std::set<int> best_ids;
  std::set<std::string> best_sacrificed;
  bool found = false;

  // Anytime bound: past the deadline the search degrades to cheapest-first
  // descent until one feasible leaf is known, then unwinds.
  std::optional<std::chrono::steady_clock::time_point> deadline;
  uint64_t nodes = 0;
  bool cut = false;
};

bool better(uint64_t cost, const std::set<int>& ids, const OptContext& ctx) {
  if (!ctx.found) return true;
  if (cost != ctx.best_cost) return cost < ctx.best_cost;
  if (ids.size() != ctx.best_ids.size()) {
    return ids.size() < ctx.best_ids.size();
  }
  return std::lexicographical_compare(ids.begin(), ids.end(),
                                      ctx.best_ids.begin(),
                                      ctx.best_ids.end());
}

void descend(OptContext& ctx, std::set<int>& ids,
             std::set<std::string>& sacrificed, uint64_t cost) {
  if (!ctx.cut && ctx.deadline && (++ctx.nodes & 1023) == 0 &&
      std::chrono::steady_clock::now() >= *ctx.deadline) {
    ctx.cut = true;
  }
  if (ctx.cut && ctx.found) return;
  if (ctx.found && cost > ctx.best_cost) return;
  // First non-sacrificed example with an unsatisfied formula.
  const std::string* example = nullptr;
  const CoverageFormula* pending = nullptr;
  for (const auto& [id, formulas] : ctx.grouped) {
    if (sacrificed.count(id)) continue;
    for (const auto* f : formulas) {
      if (!f->satisfied_by(ids)) {
        example = &id;
        pending = f;
        break;
      }
    }
    if (example) break;
  }
  if (!example) {
    if (better(cost, ids, ctx)) {
      ctx.found = true;
      ctx.best_cost = cost;
      ctx.best_ids = ids;
      ctx.best_sacrificed = sacrificed;
    }
    return;
  }
  // Branch per satisfiable disjunct (adding its missing positive ids) or by
  // sacrificing the example; cheapest increments first so the bound bites.
  std::vector<std::pair<uint64_t, std::vector<int>>> branches;
  std::set<std::vector<int>> branch_seen;
  for (const auto& conj : pending->disjuncts) {
    bool feasible = true;
    std::vector<int> additions;
    for (const auto& lit : conj.lits) {
      if (lit.positive) {
        if (!ids.count(lit.id)) additions.push_back(lit.id);
      } else if (ids.count(lit.id)) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    std::sort(additions.begin(), additions.end());
    additions.erase(std::unique(additions.begin(), additions.end()),
                    additions.end());
    if (additions.empty() || !branch_seen.insert(additions).second) continue;
    uint64_t extra = 0;
    for (int id : additions) extra += ctx.rule_cost.at(id);
    branches.push_back({extra, std::move(additions)});
  }
  uint64_t w = ctx.weight.at(*example);
  if (w != kInfiniteWeight) branches.push_back({w, {}});
  std::stable_sort(branches.begin(), branches.end(),
                   [](const auto& a, const auto& b) {
                     return a.first < b.first;
                   });
  for (const auto& [extra, additions] : branches) {
    if (ctx.cut && ctx.found) return;
    if (additions.empty()) {
      sacrificed.insert(*example);
      descend(ctx, ids, sacrificed, cost + extra);
      sacrificed.erase(*example);
    } else {
      for (int id : additions) ids.insert(id);
      descend(ctx, ids, sacrificed, cost + extra);
      for (int id : additions) ids.erase(id);
    }
  }
}

}  // namespace

OptimizeResult optimize(const LearnerState& state,
                        std::optional<int64_t> budget_ms) {
  OptContext ctx;
  if (budget_ms) {
    ctx.deadline = std::chrono::steady_clock::now() +
                   std::chrono::milliseconds(*budget_ms);
  }
  for (const auto& r : state.space) {
    ctx.rule_cost[r.id] = static_cast<uint64_t>(score(r, state.scheme));
    ctx.rule_by_id[r.id] = &r;
  }
  for (const auto& e : state.examples) ctx.weight[e.id] = e.weight;
  std::map<std::string, std::vector<const CoverageFormula*>> grouped;
  for (const auto& cc : state.cc) {
    if (!ctx.weight.count(cc.example_id)) {
      throw std::invalid_argument("coverage constraint for unknown example " +
                                  cc.example_id);
    }
    grouped[cc.example_id].push_back(&cc.formula);
    for (const auto& conj : cc.formula.disjuncts) {
      for (const auto& lit : conj.lits) {
        if (!ctx.rule_cost.count(lit.id)) {
          throw std::invalid_argument("coverage constraint mentions id " +
                                      std::to_string(lit.id) +
                                      " outside the space");
        }
        if (lit.positive) ctx.candidates.push_back(lit.id);
      }
    }
  }
  ctx.grouped.assign(grouped.begin(), grouped.end());
  std::sort(ctx.candidates.begin(), ctx.candidates.end());
  ctx.candidates.erase(
      std::unique(ctx.candidates.begin(), ctx.candidates.end()),
      ctx.candidates.end());

  std::set<int> ids;
  std::set<std::string> sacrificed;
  descend(ctx, ids, sacrificed, 0);

  OptimizeResult result;
  result.proven = !ctx.cut;
  if (!ctx.found) {
    result.satisfiable = false;
    return result;
  }
  result.cost = ctx.best_cost;
  result.sacrificed = ctx.best_sacrificed;
  for (int id : ctx.best_ids) {
    result.hypothesis.push_back(*ctx.rule_by_id.at(id));
  }
  return result;
}

namespace {

std::string method_tag(const std::string& example_id,
                       const std::string& method) {
  return example_id + ":" + method;
}

std::vector<int> id_key(const std::vector<Constraint>& hyp) {
  std::vector<int> key;
  for (const auto& r : hyp) key.push_back(r.id);
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

CdilpResult cdilp(LearnerState state, const CdilpConfig& cfg) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() -
                                                                 start)
        .count();
  };

  std::map<std::string, const CdpiExample*> by_id;
  for (const auto& e : state.examples) {
    if (!by_id.emplace(e.id, &e).second) {
      throw std::invalid_argument("duplicate example id " + e.id);
    }
  }
  // Infinite-weight examples are checked first: they can never be
  // sacrificed, so their conflicts matter most when the budget is short.
  std::vector<const CdpiExample*> check_order;
  for (const auto& [id, e] : by_id) {
    if (e->weight == kInfiniteWeight) check_order.push_back(e);
  }
  size_t hard_count = check_order.size();
  for (const auto& [id, e] : by_id) {
    if (e->weight != kInfiniteWeight) check_order.push_back(e);
  }

  CdilpResult result;
  std::set<std::pair<std::vector<int>, std::string>> analyzed_pairs;

  // Analyzes one uncovered example; throws on the progress invariants.
  auto analyze = [&](const CdpiExample& e, const OptimizeResult& opt,
                     const std::set<int>& hyp_ids,
                     const std::vector<int>& hyp_key,
                     const Solution* witness) -> CoverageConstraint {
    if (!analyzed_pairs.insert({hyp_key, e.id}).second) {
      throw std::logic_error("conflict analysis repeated for example " + e.id +
                             " under an unchanged hypothesis");
    }
    CoverageFormula formula;
    std::string method;
    if (!e.positive) {
      method = "semantic-negative";
      formula = semantic_conflict_negative(e, state.space, *witness);
    } else if (opt.hypothesis.empty()) {
      // No hypothesis, still no accepting answer set: uncoverable.
      method = "uncoverable";
      formula = {};
    } else if (state.sbca_example_ids.count(e.id)) {
      method = "sbca";
      formula = sbca(e, opt.hypothesis, state.space);
      if (cfg.on_sbca) cfg.on_sbca(e, opt.hypothesis, formula);
    } else {
      auto semantic = semantic_conflict_positive(
          e, state.space, cfg.semantic_positive_budget);
      if (semantic) {
        method = "semantic-positive";
        formula = *semantic;
      } else {
        method = "sbca";
        formula = sbca(e, opt.hypothesis, state.space);
        if (cfg.on_sbca) cfg.on_sbca(e, opt.hypothesis, formula);
      }
    }
    if (formula.satisfied_by(hyp_ids)) {
      throw std::logic_error(
          "conflict analysis produced a formula the current hypothesis "
          "satisfies (no progress) for " +
          e.id);
    }
    result.iterations.back().analyzed.push_back(method_tag(e.id, method));
    return {e.id, std::move(formula)};
  };

  // Most recent hypothesis whose infinite-weight examples all verified.
  std::optional<OptimizeResult> hard_ok;
  auto revert_to_verified = [&](const std::string& why) -> CdilpResult& {
    result.optimal = false;
    if (hard_ok) {
      result.hypothesis = hard_ok->hypothesis;
      result.sacrificed = hard_ok->sacrificed;
      result.cost = hard_ok->cost;
      result.warnings.push_back(why + "; reverted to the last hypothesis "
                                      "verified against all infinite-weight "
                                      "examples");
    } else {
      result.hypothesis.clear();
      result.sacrificed.clear();
      result.cost = 0;
      for (const auto& [id, e] : by_id) {
        if (e->weight != kInfiniteWeight) {
          result.sacrificed.insert(id);
          result.cost += e->weight;
        }
      }
      result.warnings.push_back(why + "; no verified hypothesis, returning "
                                      "the empty hypothesis");
    }
    return result;
  };

  // After budget expiry: re-verify the hard examples under the current
  // hypothesis within the grace window, folding conflicts back in; fall
  // back to the last verified hypothesis (or none) when repair fails.
  auto expired_return = [&](OptimizeResult opt) -> CdilpResult& {
    result.optimal = false;
    result.warnings.push_back("learning budget expired; hypothesis is "
                              "best-so-far, not proven optimal");
    auto grace_end =
        clock::now() + std::chrono::milliseconds(cfg.repair_grace_ms);
    auto grace_left = [&] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 grace_end - clock::now())
          .count();
    };
    while (grace_left() > 0) {
      std::set<int> hyp_ids;
      for (const auto& r : opt.hypothesis) hyp_ids.insert(r.id);
      std::vector<int> hyp_key = id_key(opt.hypothesis);
      result.iterations.push_back({state.cc.size(), opt.cost, {}, 0});
      std::vector<CoverageConstraint> fresh;
      bool unknown = false;
      bool stale = false;  // conflict already in cc, re-optimize suffices
      for (size_t i = 0; i < hard_count; ++i) {
        const CdpiExample* e = check_order[i];
        CoverageCheck check = check_coverage(
            *e, opt.hypothesis,
            std::min<int64_t>(cfg.coverage_timeout_ms, grace_left() + 1));
        if (check.covered == Ternary::Unknown) {
          unknown = true;
          break;
        }
        if (check.covered == Ternary::False) {
          if (analyzed_pairs.count({hyp_key, e->id})) {
            stale = true;
            continue;
          }
          fresh.push_back(
              analyze(*e, opt, hyp_ids, hyp_key,
                      check.witness ? &*check.witness : nullptr));
        }
      }
      result.iterations.back().elapsed_ms = elapsed_ms();
      if (!unknown && fresh.empty() && !stale) {
        result.hypothesis = opt.hypothesis;
        result.sacrificed = opt.sacrificed;
        result.cost = opt.cost;
        return result;  // current hypothesis honors the hard examples
      }
      if (unknown) break;
      for (auto& cc : fresh) state.cc.push_back(std::move(cc));
      result.iterations.back().cc_size = state.cc.size();
      OptimizeResult next =
          optimize(state, std::min<int64_t>(grace_left(), 5000));
      if (!next.satisfiable) break;
      opt = std::move(next);
    }
    return revert_to_verified("repair grace expired");
  };

  while (true) {
    IterationLog log;
    int64_t remaining = cfg.budget_ms - elapsed_ms();
    OptimizeResult opt = optimize(state, std::max<int64_t>(remaining, 1));
    if (!opt.satisfiable) {
      if (!opt.proven) {
        result.iterations.push_back({state.cc.size(), 0, {}, elapsed_ms()});
        return expired_return(std::move(opt));
      }
      result.satisfiable = false;
      return result;
    }
    result.hypothesis = opt.hypothesis;
    result.sacrificed = opt.sacrificed;
    result.cost = opt.cost;
    log.cc_size = state.cc.size();
    log.cost = opt.cost;
    result.iterations.push_back(log);

    std::set<int> hyp_ids;
    for (const auto& r : opt.hypothesis) hyp_ids.insert(r.id);
    std::vector<int> hyp_key = id_key(opt.hypothesis);

    bool indeterminate = false;
    bool hard_unknown = false;
    bool expired_mid_checks = false;
    size_t hard_true = 0;
    std::vector<CoverageConstraint> fresh;
    for (size_t i = 0; i < check_order.size(); ++i) {
      if (elapsed_ms() > cfg.budget_ms) {
        expired_mid_checks = true;
        break;
      }
      const CdpiExample* e = check_order[i];
      if (opt.sacrificed.count(e->id)) continue;
      CoverageCheck check =
          check_coverage(*e, opt.hypothesis, cfg.coverage_timeout_ms);
      if (check.covered == Ternary::Unknown) {
        indeterminate = true;
        if (i < hard_count) hard_unknown = true;
        result.warnings.push_back("coverage check timed out for " + e->id +
                                  "; example skipped this iteration");
        continue;
      }
      if (check.covered == Ternary::True) {
        if (i < hard_count) ++hard_true;
        continue;
      }
      // Uncovered and, post-optimize, not implied by cc: analyze.
      fresh.push_back(analyze(*e, opt, hyp_ids, hyp_key,
                              check.witness ? &*check.witness : nullptr));
    }
    if (hard_true == hard_count) hard_ok = opt;

    // Conflicts merge deterministically in example-id order.
    std::sort(fresh.begin(), fresh.end(),
              [](const CoverageConstraint& a, const CoverageConstraint& b) {
                return a.example_id < b.example_id;
              });
    for (auto& cc : fresh) state.cc.push_back(std::move(cc));
    result.iterations.back().cc_size = state.cc.size();
    result.iterations.back().elapsed_ms = elapsed_ms();

    if (fresh.empty() && !expired_mid_checks) {
      if (hard_unknown) {
        // The hypothesis could not be certified against an infinite-weight
        // example; returning it could break a hard requirement.
        return revert_to_verified(
            "coverage of an infinite-weight example stayed unknown");
      }
      result.optimal = !indeterminate && opt.proven;
      if (!opt.proven) {
        result.warnings.push_back("optimization budget expired; hypothesis "
                                  "covers the constraints but is not proven "
                                  "optimal");
      }
      return result;
    }
    if (expired_mid_checks || elapsed_ms() > cfg.budget_ms) {
      return expired_return(std::move(opt));
    }
  }
}

}  // namespace puplift
