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

#ifndef PUPLIFT_SYMMETRY_HPP
#define PUPLIFT_SYMMETRY_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "puplift/instance.hpp"

namespace puplift {

// One solution symmetry: a type-preserving, edge-preserving permutation of
// the vertices paired with a permutation of the units. Entry i-1 holds the
// image of id i.
struct AtomPermutation {
  std::vector<int> zone_map;
  std::vector<int> sensor_map;
  std::vector<int> unit_map;

  bool is_identity() const;
  bool operator==(const AtomPermutation&) const = default;
};

// Generators of Aut(G) x Sym(U): every non-trivial graph automorphism with
// the identity unit map, plus the unit transpositions (i, i+1).
std::vector<AtomPermutation> detect_generators(const PupInstance& inst);

Solution apply(const AtomPermutation& perm, const Solution& sol);
AtomPermutation inverse(const AtomPermutation& perm);

// Image of one assignment/partner atom under the permutation.
GroundAtom apply(const AtomPermutation& perm, const GroundAtom& atom);

// Total order on the atoms moved by at least one generator: the
// unit2zone/unit2sensor/partnerunits atoms, sorted by (predicate name,
// first arg, second arg).
struct AtomOrder {
  std::vector<GroundAtom> atoms;

  static AtomOrder from_generators(const PupInstance& inst,
                                   const std::vector<AtomPermutation>& gens);
};

// Membership bit-vector of a solution over ord's atoms.
std::vector<bool> atom_bitvector(const AtomOrder& ord, const PupInstance& inst,
                                 const Solution& sol);

// v < w iff at the first differing index v holds the atom (true packs
// earlier).
bool lex_less(const std::vector<bool>& v, const std::vector<bool>& w);

// Single-generator dominance: some g in gens maps sol to a lex-smaller
// solution.
bool dominated(const PupInstance& inst, const Solution& sol,
               const std::vector<AtomPermutation>& gens, const AtomOrder& ord);

struct OrbitResult {
  std::vector<Solution> members;  // BFS discovery order
  bool truncated = false;
};

// Closure of {sol} under gens, breadth-first; stops after cap members when
// cap is given.
OrbitResult orbit(const PupInstance& inst, const Solution& sol,
                  const std::vector<AtomPermutation>& gens,
                  std::optional<uint64_t> cap = std::nullopt);

Solution lex_smallest(const std::vector<Solution>& orbit_set,
                      const PupInstance& inst, const AtomOrder& ord);

// Cycle notation, one generator per line:
//   units: (1 2); vertices: (s3 s4)(z2 z5)
std::string write_generators(const std::vector<AtomPermutation>& gens);
std::vector<AtomPermutation> parse_generators(const std::string& text,
                                              const PupInstance& inst);

}  // namespace puplift

#endif  // PUPLIFT_SYMMETRY_HPP
