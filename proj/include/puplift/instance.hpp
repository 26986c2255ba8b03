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

#ifndef PUPLIFT_INSTANCE_HPP
#define PUPLIFT_INSTANCE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace puplift {

// Enumerators are ordered alphabetically by predicate name; the default
// ordering on GroundAtom is therefore the (predicate name, arg1, arg2)
// order used everywhere a total atom order is needed.
enum class Pred : uint8_t {
  CloseSensors,
  CloseZones,
  PartnerUnits,
  Unit2Sensor,
  Unit2SensorGeq,
  Unit2Zone,
  Unit2ZoneGeq,
  Zone2Sensor,
};

const char* pred_name(Pred p);
std::optional<Pred> pred_from_name(const std::string& name);

struct GroundAtom {
  Pred pred{Pred::Unit2Zone};
  int a = 0;
  int b = 0;
  auto operator<=>(const GroundAtom&) const = default;
};

std::string to_string(const GroundAtom& atom);

// A PUP instance: bipartite graph between zones and sensors, a unit pool
// and the two capacity bounds. Ids are 1-based contiguous integers.
struct PupInstance {
  std::vector<int> sensors;
  std::vector<int> zones;
  std::vector<int> units;
  std::set<std::pair<int, int>> edges;  // (zone, sensor)
  int ucap = 2;
  int iucap = 2;
  std::string name;

  int num_sensors() const { return static_cast<int>(sensors.size()); }
  int num_zones() const { return static_cast<int>(zones.size()); }
  int num_units() const { return static_cast<int>(units.size()); }
  bool has_edge(int zone, int sensor) const {
    return edges.count({zone, sensor}) > 0;
  }

  // Throws std::invalid_argument if an invariant is broken.
  void validate() const;

  bool operator==(const PupInstance& other) const {
    return sensors == other.sensors && zones == other.zones &&
           units == other.units && edges == other.edges &&
           ucap == other.ucap && iucap == other.iucap;
  }
};

// Total assignment of zones and sensors to units; entry i holds the unit
// of zone/sensor id i+1.
struct Solution {
  std::vector<int> zone_unit;
  std::vector<int> sensor_unit;
  auto operator<=>(const Solution&) const = default;
};

enum class Family { Double, DoubleV, Triple };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

PupInstance make_fig1_instance();

// Deterministic parametric instance generator. The seed parameter is part
// of the interface for future randomized variants; the current patterns
// ignore it. unsat=true emits one unit fewer than the satisfiable minimum.
PupInstance generate_instance(Family family, int zones, bool unsat,
                              uint64_t seed);

// Topology-only builder used by generate_instance and by tests that need
// sub-minimum sizes (e.g. the 4-zone ladder). Units are left empty.
PupInstance build_topology(Family family, int zones);

bool valid_solution(const PupInstance& inst, const Solution& sol);

// pGEQ closure of one assignment relation: result contains (x, y) iff some
// (x', y) with x' >= x is in assign, for 1 <= x <= max_unit.
// Throws std::invalid_argument if two units share one item.
std::set<GroundAtom> derive_geq(Pred geq_pred,
                                const std::vector<std::pair<int, int>>& assign,
                                int max_unit);

// closesensors/closezones: symmetric, irreflexive common-neighbor relations.
std::set<GroundAtom> derive_close(const PupInstance& inst);

// Full atom view of a solution: assignment atoms, partnerunits, instance
// facts and the derived GEQ/close atoms.
std::set<GroundAtom> solution_atoms(const PupInstance& inst,
                                    const Solution& sol);

std::string write_instance(const PupInstance& inst);
PupInstance parse_instance(const std::string& text);

std::string write_solution(const Solution& sol);

}  // namespace puplift

#endif  // PUPLIFT_INSTANCE_HPP
