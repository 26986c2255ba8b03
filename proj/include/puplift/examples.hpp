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

#ifndef PUPLIFT_EXAMPLES_HPP
#define PUPLIFT_EXAMPLES_HPP

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "puplift/instance.hpp"
#include "puplift/symmetry.hpp"

namespace puplift {

inline constexpr uint64_t kInfiniteWeight =
    std::numeric_limits<uint64_t>::max();

// Context-dependent partial interpretation example. Solution-derived
// examples pin every atom of the symmetry order; generalization examples
// leave both sets empty.
struct CdpiExample {
  std::string id;
  bool positive = true;
  std::set<GroundAtom> inclusions;
  std::set<GroundAtom> exclusions;
  PupInstance context;
  uint64_t weight = kInfiniteWeight;

  bool operator==(const CdpiExample&) const = default;
};

struct ExampleGenResult {
  std::vector<CdpiExample> examples;
  bool one_sided = false;   // degenerate task: only one label present
  std::string diagnostic;   // set when empty or one_sided
};

// Samples up to n distinct solutions by seeded randomized enumeration;
// dominated solutions become weight-1 negatives, the rest positives.
ExampleGenResult scalable_enum(const PupInstance& inst,
                               const std::vector<AtomPermutation>& gens,
                               const AtomOrder& ord, uint64_t n,
                               uint64_t seed);

// Explores up to `cells` pairwise-disjoint orbits: per orbit the first
// max_cell_size closure members other than the lex minimum become
// negatives and the minimum becomes a positive.
ExampleGenResult scalable_fullsbcs(const PupInstance& inst,
                                   const std::vector<AtomPermutation>& gens,
                                   const AtomOrder& ord, uint64_t cells,
                                   uint64_t max_cell_size, uint64_t seed);

// Bare positive example: the hypothesis must keep inst satisfiable.
CdpiExample gen_positive(const PupInstance& inst);

// `#pos(id, {...}, {...}, {ctx})." / `#neg(id@w, ...)` with the context
// block holding the instance text verbatim; bit-exact round-trip.
std::string write_examples(const std::vector<CdpiExample>& examples);
std::vector<CdpiExample> parse_examples(const std::string& text);

}  // namespace puplift

#endif  // PUPLIFT_EXAMPLES_HPP
