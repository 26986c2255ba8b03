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

#ifndef PUPLIFT_LEARNER_HPP
#define PUPLIFT_LEARNER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "puplift/examples.hpp"
#include "puplift/hypothesis.hpp"
#include "puplift/solver.hpp"

namespace puplift {

// Literal over a hypothesis-space constraint id.
struct IdLit {
  bool positive = true;
  int id = -1;
  auto operator<=>(const IdLit&) const = default;
};

struct Conjunction {
  std::vector<IdLit> lits;  // empty conjunction is true
  bool operator==(const Conjunction&) const = default;
};

// Disjunction of conjunctions; the empty disjunction is false.
struct CoverageFormula {
  std::vector<Conjunction> disjuncts;

  bool satisfied_by(const std::set<int>& hypothesis_ids) const;
  bool operator==(const CoverageFormula&) const = default;
};

struct CoverageConstraint {
  std::string example_id;
  CoverageFormula formula;
  bool operator==(const CoverageConstraint&) const = default;
};

// ⋁_{r ∈ H} ⋀_{r' subsuming r} ¬r'_id. Throws std::logic_error on empty H:
// an empty hypothesis covers every satisfiable positive.
CoverageFormula sbca(const CdpiExample& e, const std::vector<Constraint>& hyp,
                     const std::vector<Constraint>& space);

// Disjunction of r_id over every space rule violated by the accepting
// witness; empty when no rule can eliminate it (uncoverable example).
CoverageFormula semantic_conflict_negative(const CdpiExample& e,
                                           const std::vector<Constraint>& space,
                                           const Solution& witness);

// One conjunction of ¬r_id (rules violated by I) per accepting candidate I.
// nullopt when more than `budget` candidates exist; caller falls back to
// sbca.
std::optional<CoverageFormula> semantic_conflict_positive(
    const CdpiExample& e, const std::vector<Constraint>& space,
    uint64_t budget);

// Coverage per the CDPI reading: a positive example is covered iff an
// accepting answer set extends it; a negative iff none does.
struct CoverageCheck {
  Ternary covered = Ternary::Unknown;
  std::optional<Solution> witness;  // accepting answer set when one exists
};
CoverageCheck check_coverage(const CdpiExample& e,
                             const std::vector<Constraint>& hyp,
                             std::optional<int64_t> timeout_ms);

struct LearnerState {
  std::vector<Constraint> space;
  std::vector<CdpiExample> examples;
  std::vector<CoverageConstraint> cc;
  ScoreScheme scheme = ScoreScheme::Default;
  std::set<std::string> sbca_example_ids;
};

struct OptimizeResult {
  bool satisfiable = true;  // false: an infinite-weight example is uncoverable
  bool proven = true;       // search completed within the budget
  std::vector<Constraint> hypothesis;
  std::set<std::string> sacrificed;
  uint64_t cost = 0;
};

// Exact branch-and-bound over the ids mentioned positively in cc; minimizes
// hypothesis score plus sacrificed finite weights, ties broken by fewer
// rules then lexicographically smallest id tuple. With a budget the search
// turns anytime: past the deadline it finishes the cheapest-first descent to
// the next feasible leaf and returns it with proven = false.
OptimizeResult optimize(const LearnerState& state,
                        std::optional<int64_t> budget_ms = std::nullopt);

struct IterationLog {
  size_t cc_size = 0;
  uint64_t cost = 0;
  std::vector<std::string> analyzed;  // "<example_id>:<method>"
  int64_t elapsed_ms = 0;
};

struct CdilpConfig {
  int64_t budget_ms = 300000;
  int64_t coverage_timeout_ms = 10000;
  uint64_t semantic_positive_budget = 1000;
  // Extra time granted after budget expiry to re-verify the infinite-weight
  // examples and repair the hypothesis until it honors them.
  int64_t repair_grace_ms = 60000;
  // Audit hook: observes every subsumption-based conflict event
  // (example, hypothesis at the conflict, resulting formula).
  std::function<void(const CdpiExample&, const std::vector<Constraint>&,
                     const CoverageFormula&)>
      on_sbca;
};

struct CdilpResult {
  bool satisfiable = true;
  bool optimal = false;        // proven optimal and fully verified
  std::vector<Constraint> hypothesis;
  std::set<std::string> sacrificed;
  uint64_t cost = 0;
  std::vector<IterationLog> iterations;
  std::vector<std::string> warnings;  // timed-out coverage checks etc.
};

CdilpResult cdilp(LearnerState state, const CdilpConfig& cfg);

}  // namespace puplift

#endif  // PUPLIFT_LEARNER_HPP
