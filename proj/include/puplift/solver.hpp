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

#ifndef PUPLIFT_SOLVER_HPP
#define PUPLIFT_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "puplift/hypothesis.hpp"
#include "puplift/instance.hpp"

namespace puplift {

struct SearchConfig {
  uint64_t seed = 0;
  std::optional<uint64_t> limit;       // max solutions to emit
  std::optional<int64_t> timeout_ms;   // wall clock budget
  bool randomize_values = false;       // seed-shuffled unit order per variable
};

struct GroundLit {
  bool positive = true;
  GroundAtom atom;
  auto operator<=>(const GroundLit&) const = default;
};

// Violated by a solution iff every positive literal's atom is in
// solution_atoms and every negative literal's atom is not.
struct GroundConstraint {
  std::vector<GroundLit> lits;
};

struct SearchOutcome {
  uint64_t count = 0;
  uint64_t nodes = 0;
  bool truncated = false;  // stopped by limit, timeout or consumer
};

// Complete backtracking search; zones are assigned in ascending id order,
// then sensors. The callback may return false to stop the stream.
SearchOutcome solve(const PupInstance& inst,
                    const std::vector<GroundConstraint>& extra,
                    const SearchConfig& cfg,
                    const std::function<bool(const Solution&)>& on_solution);

std::vector<Solution> enumerate_solutions(
    const PupInstance& inst, const std::vector<GroundConstraint>& extra,
    const SearchConfig& cfg, SearchOutcome* outcome = nullptr);

uint64_t count_solutions(const PupInstance& inst,
                         const std::vector<GroundConstraint>& extra,
                         const SearchConfig& cfg,
                         SearchOutcome* outcome = nullptr);

enum class Ternary { False, True, Unknown };

struct AcceptingResult {
  Ternary status = Ternary::Unknown;
  std::optional<Solution> witness;  // set when status == True
};

// Whether some valid solution extends (inclusions, exclusions) and violates
// no ground instance of any hypothesis constraint. Unknown on timeout.
// Throws std::invalid_argument if inclusions and exclusions intersect.
AcceptingResult accepting_answer_set_exists(
    const PupInstance& inst, const std::set<GroundAtom>& inclusions,
    const std::set<GroundAtom>& exclusions,
    const std::vector<Constraint>& hypothesis,
    std::optional<int64_t> timeout_ms = std::nullopt);

// All typed ground instances of c over the instance's constants; positive
// domain-predicate literals that are false in the instance drop the
// substitution at grounding time.
std::vector<GroundConstraint> ground_constraint(const Constraint& c,
                                                const PupInstance& inst);

std::vector<GroundConstraint> ground_all(const std::vector<Constraint>& rules,
                                         const PupInstance& inst);

// True iff sol violates some ground instance of c. Evaluated directly by
// substitution enumeration, no materialized grounding.
bool violates(const Constraint& c, const PupInstance& inst,
              const std::set<GroundAtom>& sol_atoms);

}  // namespace puplift

#endif  // PUPLIFT_SOLVER_HPP
