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

#include "puplift/instance.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace puplift {

const char* pred_name(Pred p) {
  switch (p) {
    case Pred::CloseSensors: return "closesensors";
    case Pred::CloseZones: return "closezones";
    case Pred::PartnerUnits: return "partnerunits";
    case Pred::Unit2Sensor: return "unit2sensor";
    case Pred::Unit2SensorGeq: return "unit2sensorGEQ";
    case Pred::Unit2Zone: return "unit2zone";
    case Pred::Unit2ZoneGeq: return "unit2zoneGEQ";
    case Pred::Zone2Sensor: return "zone2sensor";
  }
  return "?";
}

std::optional<Pred> pred_from_name(const std::string& name) {
  static const std::map<std::string, Pred> table = {
      {"closesensors", Pred::CloseSensors},
      {"closezones", Pred::CloseZones},
      {"partnerunits", Pred::PartnerUnits},
      {"unit2sensor", Pred::Unit2Sensor},
      {"unit2sensorGEQ", Pred::Unit2SensorGeq},
      {"unit2zone", Pred::Unit2Zone},
      {"unit2zoneGEQ", Pred::Unit2ZoneGeq},
      {"zone2sensor", Pred::Zone2Sensor},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string to_string(const GroundAtom& atom) {
  std::ostringstream os;
  os << pred_name(atom.pred) << '(' << atom.a << ',' << atom.b << ')';
  return os.str();
}

namespace {

void check_contiguous(const std::vector<int>& ids, const char* what) {
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != static_cast<int>(i) + 1) {
      throw std::invalid_argument(std::string(what) +
                                  " ids must be 1-based contiguous ascending");
    }
  }
}

}  // namespace

void PupInstance::validate() const {
  check_contiguous(sensors, "sensor");
  check_contiguous(zones, "zone");
  check_contiguous(units, "unit");
  if (ucap < 1 || iucap < 1) {
    throw std::invalid_argument("ucap and iucap must be >= 1");
  }
  for (const auto& [z, s] : edges) {
    if (z < 1 || z > num_zones() || s < 1 || s > num_sensors()) {
      throw std::invalid_argument("edge outside zones x sensors");
    }
  }
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Double: return "double";
    case Family::DoubleV: return "doublev";
    case Family::Triple: return "triple";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  if (name == "double") return Family::Double;
  if (name == "doublev") return Family::DoubleV;
  if (name == "triple") return Family::Triple;
  return std::nullopt;
}

namespace {

// Zone-level topology: every sensor is an edge between two zones. The
// sensor numbering follows the lexicographic order of its zone pair.
PupInstance from_zone_graph(std::vector<std::pair<int, int>> zone_edges,
                            int num_zones) {
  for (auto& [a, b] : zone_edges) {
    if (a > b) std::swap(a, b);
  }
  std::sort(zone_edges.begin(), zone_edges.end());
  PupInstance inst;
  for (int z = 1; z <= num_zones; ++z) inst.zones.push_back(z);
  int sensor = 0;
  for (const auto& [a, b] : zone_edges) {
    ++sensor;
    inst.sensors.push_back(sensor);
    inst.edges.insert({a, sensor});
    inst.edges.insert({b, sensor});
  }
  return inst;
}

}  // namespace

PupInstance build_topology(Family family, int zones) {
  std::vector<std::pair<int, int>> zone_edges;
  switch (family) {
    case Family::Double: {
      // Ladder: two rails of m zones plus m rungs.
      if (zones < 4 || zones % 2 != 0) {
        throw std::invalid_argument("double requires an even zone count >= 4");
      }
      int m = zones / 2;
      for (int i = 1; i < m; ++i) {
        zone_edges.push_back({i, i + 1});          // top rail
        zone_edges.push_back({m + i, m + i + 1});  // bottom rail
      }
      for (int i = 1; i <= m; ++i) zone_edges.push_back({i, m + i});  // rungs
      break;
    }
    case Family::DoubleV: {
      // Ladder plus one diagonal per cell (top i -- bottom i+1).
      if (zones < 4 || zones % 2 != 0) {
        throw std::invalid_argument("doublev requires an even zone count >= 4");
      }
      int m = zones / 2;
      for (int i = 1; i < m; ++i) {
        zone_edges.push_back({i, i + 1});
        zone_edges.push_back({m + i, m + i + 1});
        zone_edges.push_back({i, m + i + 1});
      }
      for (int i = 1; i <= m; ++i) zone_edges.push_back({i, m + i});
      break;
    }
    case Family::Triple: {
      // 3 x m grid.
      if (zones < 6 || zones % 3 != 0) {
        throw std::invalid_argument(
            "triple requires a zone count divisible by 3, >= 6");
      }
      int m = zones / 3;
      for (int row = 0; row < 3; ++row) {
        for (int i = 1; i < m; ++i) {
          zone_edges.push_back({row * m + i, row * m + i + 1});
        }
      }
      for (int row = 0; row < 2; ++row) {
        for (int i = 1; i <= m; ++i) {
          zone_edges.push_back({row * m + i, (row + 1) * m + i});
        }
      }
      break;
    }
  }
  PupInstance inst = from_zone_graph(std::move(zone_edges), zones);
  inst.ucap = 2;
  inst.iucap = 2;
  return inst;
}

PupInstance make_fig1_instance() {
  PupInstance inst = build_topology(Family::Double, 6);
  inst.units = {1, 2, 3, 4};
  inst.name = "double-6";
  inst.validate();
  return inst;
}

bool valid_solution(const PupInstance& inst, const Solution& sol) {
  if (static_cast<int>(sol.zone_unit.size()) != inst.num_zones() ||
      static_cast<int>(sol.sensor_unit.size()) != inst.num_sensors()) {
    return false;
  }
  int nu = inst.num_units();
  std::vector<int> zcnt(nu + 1, 0), scnt(nu + 1, 0);
  for (int u : sol.zone_unit) {
    if (u < 1 || u > nu) return false;
    if (++zcnt[u] > inst.ucap) return false;
  }
  for (int u : sol.sensor_unit) {
    if (u < 1 || u > nu) return false;
    if (++scnt[u] > inst.ucap) return false;
  }
  std::vector<std::set<int>> partners(nu + 1);
  for (const auto& [z, s] : inst.edges) {
    int uz = sol.zone_unit[z - 1];
    int us = sol.sensor_unit[s - 1];
    if (uz != us) {
      partners[uz].insert(us);
      partners[us].insert(uz);
    }
  }
  for (int u = 1; u <= nu; ++u) {
    if (static_cast<int>(partners[u].size()) > inst.iucap) return false;
  }
  return true;
}

std::set<GroundAtom> derive_geq(Pred geq_pred,
                                const std::vector<std::pair<int, int>>& assign,
                                int max_unit) {
  std::map<int, int> unit_of;
  for (const auto& [x, y] : assign) {
    auto [it, inserted] = unit_of.insert({y, x});
    if (!inserted && it->second != x) {
      throw std::invalid_argument("two units assigned to one item");
    }
  }
  std::set<GroundAtom> out;
  for (const auto& [y, x] : unit_of) {
    for (int v = 1; v <= std::min(x, max_unit); ++v) {
      out.insert({geq_pred, v, y});
    }
  }
  return out;
}

std::set<GroundAtom> derive_close(const PupInstance& inst) {
  std::set<GroundAtom> out;
  std::vector<std::vector<int>> zone_adj(inst.num_zones() + 1);
  std::vector<std::vector<int>> sensor_adj(inst.num_sensors() + 1);
  for (const auto& [z, s] : inst.edges) {
    zone_adj[z].push_back(s);
    sensor_adj[s].push_back(z);
  }
  for (int z = 1; z <= inst.num_zones(); ++z) {
    for (size_t i = 0; i < zone_adj[z].size(); ++i) {
      for (size_t j = i + 1; j < zone_adj[z].size(); ++j) {
        int s1 = zone_adj[z][i], s2 = zone_adj[z][j];
        out.insert({Pred::CloseSensors, s1, s2});
        out.insert({Pred::CloseSensors, s2, s1});
      }
    }
  }
  for (int s = 1; s <= inst.num_sensors(); ++s) {
    for (size_t i = 0; i < sensor_adj[s].size(); ++i) {
      for (size_t j = i + 1; j < sensor_adj[s].size(); ++j) {
        int z1 = sensor_adj[s][i], z2 = sensor_adj[s][j];
        out.insert({Pred::CloseZones, z1, z2});
        out.insert({Pred::CloseZones, z2, z1});
      }
    }
  }
  return out;
}

std::set<GroundAtom> solution_atoms(const PupInstance& inst,
                                    const Solution& sol) {
  std::set<GroundAtom> out;
  std::vector<std::pair<int, int>> zassign, sassign;
  for (int z = 1; z <= inst.num_zones(); ++z) {
    int u = sol.zone_unit[z - 1];
    out.insert({Pred::Unit2Zone, u, z});
    zassign.push_back({u, z});
  }
  for (int s = 1; s <= inst.num_sensors(); ++s) {
    int u = sol.sensor_unit[s - 1];
    out.insert({Pred::Unit2Sensor, u, s});
    sassign.push_back({u, s});
  }
  for (const auto& [z, s] : inst.edges) {
    out.insert({Pred::Zone2Sensor, z, s});
    int uz = sol.zone_unit[z - 1];
    int us = sol.sensor_unit[s - 1];
    if (uz != us) {
      out.insert({Pred::PartnerUnits, uz, us});
      out.insert({Pred::PartnerUnits, us, uz});
    }
  }
  auto zg = derive_geq(Pred::Unit2ZoneGeq, zassign, inst.num_units());
  auto sg = derive_geq(Pred::Unit2SensorGeq, sassign, inst.num_units());
  out.insert(zg.begin(), zg.end());
  out.insert(sg.begin(), sg.end());
  auto close = derive_close(inst);
  out.insert(close.begin(), close.end());
  return out;
}

std::string write_instance(const PupInstance& inst) {
  std::ostringstream os;
  os << "% instance: " << inst.name << '\n';
  for (const auto& [z, s] : inst.edges) {
    os << "zone2sensor(" << z << ',' << s << ").\n";
  }
  for (int u : inst.units) os << "comUnit(" << u << ").\n";
  os << "ucap(" << inst.ucap << ").\n";
  os << "iucap(" << inst.iucap << ").\n";
  return os.str();
}

PupInstance parse_instance(const std::string& text) {
  PupInstance inst;
  int max_zone = 0, max_sensor = 0;
  std::vector<int> units;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                  ": " + why);
    };
    // Strip comments and whitespace.
    auto cut = line.find('%');
    if (cut == 0 && line.rfind("% instance: ", 0) == 0) {
      inst.name = line.substr(12);
      continue;
    }
    if (cut != std::string::npos) line = line.substr(0, cut);
    std::string fact;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) fact.push_back(c);
    }
    if (fact.empty()) continue;
    if (fact.back() != '.') fail("missing terminating period");
    fact.pop_back();
    auto open = fact.find('(');
    auto close = fact.find(')');
    if (open == std::string::npos || close != fact.size() - 1) {
      fail("malformed fact");
    }
    std::string head = fact.substr(0, open);
    std::string args = fact.substr(open + 1, close - open - 1);
    std::vector<int> vals;
    std::istringstream as(args);
    std::string tok;
    while (std::getline(as, tok, ',')) {
      try {
        vals.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        fail("non-integer argument");
      }
    }
    if (head == "zone2sensor" && vals.size() == 2) {
      inst.edges.insert({vals[0], vals[1]});
      max_zone = std::max(max_zone, vals[0]);
      max_sensor = std::max(max_sensor, vals[1]);
    } else if (head == "comUnit" && vals.size() == 1) {
      units.push_back(vals[0]);
    } else if (head == "ucap" && vals.size() == 1) {
      inst.ucap = vals[0];
    } else if (head == "iucap" && vals.size() == 1) {
      inst.iucap = vals[0];
    } else {
      fail("unknown fact " + head);
    }
  }
  for (int z = 1; z <= max_zone; ++z) inst.zones.push_back(z);
  for (int s = 1; s <= max_sensor; ++s) inst.sensors.push_back(s);
  std::sort(units.begin(), units.end());
  inst.units = units;
  inst.validate();
  return inst;
}

std::string write_solution(const Solution& sol) {
  std::set<GroundAtom> atoms;
  for (size_t s = 0; s < sol.sensor_unit.size(); ++s) {
    atoms.insert({Pred::Unit2Sensor, sol.sensor_unit[s], static_cast<int>(s) + 1});
  }
  for (size_t z = 0; z < sol.zone_unit.size(); ++z) {
    atoms.insert({Pred::Unit2Zone, sol.zone_unit[z], static_cast<int>(z) + 1});
  }
  std::ostringstream os;
  for (const auto& a : atoms) os << to_string(a) << ".\n";
  return os.str();
}

}  // namespace puplift
