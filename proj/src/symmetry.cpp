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

#include "puplift/symmetry.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace puplift {

namespace {

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i + 1;
  return m;
}

bool map_is_identity(const std::vector<int>& m) {
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] != static_cast<int>(i) + 1) return false;
  }
  return true;
}

// Enumerates automorphisms of the colored bipartite graph: 1-WL color
// refinement to a stable coloring, then backtracking assignment within
// color classes. The instance families have tiny automorphism groups; a
// hard cap guards against degenerate hand-written inputs.
class AutoSearch {
 public:
  explicit AutoSearch(const PupInstance& inst)
      : nz_(inst.num_zones()), n_(nz_ + inst.num_sensors()) {
    adj_.assign(n_ * n_, 0);
    for (const auto& [z, s] : inst.edges) {
      int a = z - 1, b = nz_ + s - 1;
      adj_[a * n_ + b] = adj_[b * n_ + a] = 1;
    }
    refine();
  }

  std::vector<std::vector<int>> run() {
    map_.assign(n_, -1);
    used_.assign(n_, false);
    descend(0);
    return found_;
  }

 private:
  void refine() {
    color_.assign(n_, 0);
    for (int v = nz_; v < n_; ++v) color_[v] = 1;
    while (true) {
      std::map<std::pair<int, std::vector<int>>, int> next_ids;
      std::vector<int> next(n_);
      for (int v = 0; v < n_; ++v) {
        std::vector<int> sig;
        for (int w = 0; w < n_; ++w) {
          if (adj_[v * n_ + w]) sig.push_back(color_[w]);
        }
        std::sort(sig.begin(), sig.end());
        auto key = std::make_pair(color_[v], std::move(sig));
        auto [it, _] = next_ids.try_emplace(key,
                                            static_cast<int>(next_ids.size()));
        next[v] = it->second;
      }
      if (next == color_) break;
      color_ = next;
    }
  }

  void descend(int v) {
    if (found_.size() >= 512) return;  // degenerate-input guard
    if (v == n_) {
      found_.push_back(map_);
      return;
    }
    for (int cand = 0; cand < n_; ++cand) {
      if (used_[cand] || color_[cand] != color_[v]) continue;
      bool ok = true;
      for (int w = 0; w < v; ++w) {
        if (adj_[v * n_ + w] != adj_[cand * n_ + map_[w]]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      map_[v] = cand;
      used_[cand] = true;
      descend(v + 1);
      used_[cand] = false;
      map_[v] = -1;
    }
  }

  int nz_, n_;
  std::vector<char> adj_;
  std::vector<int> color_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<std::vector<int>> found_;
};

std::set<std::pair<int, int>> partner_pairs(const PupInstance& inst,
                                            const Solution& sol) {
  std::set<std::pair<int, int>> pairs;
  for (const auto& [z, s] : inst.edges) {
    int uz = sol.zone_unit[z - 1];
    int us = sol.sensor_unit[s - 1];
    if (uz != us) {
      pairs.insert({uz, us});
      pairs.insert({us, uz});
    }
  }
  return pairs;
}

}  // namespace

bool AtomPermutation::is_identity() const {
  return map_is_identity(zone_map) && map_is_identity(sensor_map) &&
         map_is_identity(unit_map);
}

std::vector<AtomPermutation> detect_generators(const PupInstance& inst) {
  std::vector<AtomPermutation> gens;
  int nz = inst.num_zones(), ns = inst.num_sensors(), nu = inst.num_units();
  AutoSearch search(inst);
  for (const auto& flat : search.run()) {
    AtomPermutation p;
    p.zone_map.resize(nz);
    p.sensor_map.resize(ns);
    p.unit_map = identity_map(nu);
    for (int z = 0; z < nz; ++z) p.zone_map[z] = flat[z] + 1;
    for (int s = 0; s < ns; ++s) p.sensor_map[s] = flat[nz + s] - nz + 1;
    if (!p.is_identity()) gens.push_back(p);
  }
  for (int u = 1; u < nu; ++u) {
    AtomPermutation p;
    p.zone_map = identity_map(nz);
    p.sensor_map = identity_map(ns);
    p.unit_map = identity_map(nu);
    std::swap(p.unit_map[u - 1], p.unit_map[u]);
    gens.push_back(p);
  }
  return gens;
}

Solution apply(const AtomPermutation& perm, const Solution& sol) {
  Solution out;
  out.zone_unit.resize(sol.zone_unit.size());
  out.sensor_unit.resize(sol.sensor_unit.size());
  for (size_t z = 0; z < sol.zone_unit.size(); ++z) {
    out.zone_unit[perm.zone_map[z] - 1] = perm.unit_map[sol.zone_unit[z] - 1];
  }
  for (size_t s = 0; s < sol.sensor_unit.size(); ++s) {
    out.sensor_unit[perm.sensor_map[s] - 1] =
        perm.unit_map[sol.sensor_unit[s] - 1];
  }
  return out;
}

AtomPermutation inverse(const AtomPermutation& perm) {
  AtomPermutation inv;
  auto invert = [](const std::vector<int>& m) {
    std::vector<int> out(m.size());
    for (size_t i = 0; i < m.size(); ++i) out[m[i] - 1] = static_cast<int>(i) + 1;
    return out;
  };
  inv.zone_map = invert(perm.zone_map);
  inv.sensor_map = invert(perm.sensor_map);
  inv.unit_map = invert(perm.unit_map);
  return inv;
}

GroundAtom apply(const AtomPermutation& perm, const GroundAtom& atom) {
  auto u = [&](int x) { return perm.unit_map[x - 1]; };
  auto z = [&](int x) { return perm.zone_map[x - 1]; };
  auto s = [&](int x) { return perm.sensor_map[x - 1]; };
  switch (atom.pred) {
    case Pred::Unit2Zone:
    case Pred::Unit2ZoneGeq: return {atom.pred, u(atom.a), z(atom.b)};
    case Pred::Unit2Sensor:
    case Pred::Unit2SensorGeq: return {atom.pred, u(atom.a), s(atom.b)};
    case Pred::PartnerUnits: return {atom.pred, u(atom.a), u(atom.b)};
    case Pred::Zone2Sensor: return {atom.pred, z(atom.a), s(atom.b)};
    case Pred::CloseZones: return {atom.pred, z(atom.a), z(atom.b)};
    case Pred::CloseSensors: return {atom.pred, s(atom.a), s(atom.b)};
  }
  return atom;
}

AtomOrder AtomOrder::from_generators(const PupInstance& inst,
                                     const std::vector<AtomPermutation>& gens) {
  std::vector<GroundAtom> universe;
  for (int u : inst.units) {
    for (int z : inst.zones) universe.push_back({Pred::Unit2Zone, u, z});
    for (int s : inst.sensors) universe.push_back({Pred::Unit2Sensor, u, s});
    for (int v : inst.units) {
      // partnerunits is irreflexive in every solution.
      if (u != v) universe.push_back({Pred::PartnerUnits, u, v});
    }
  }
  AtomOrder ord;
  for (const auto& atom : universe) {
    for (const auto& g : gens) {
      if (apply(g, atom) != atom) {
        ord.atoms.push_back(atom);
        break;
      }
    }
  }
  std::sort(ord.atoms.begin(), ord.atoms.end());
  return ord;
}

std::vector<bool> atom_bitvector(const AtomOrder& ord, const PupInstance& inst,
                                 const Solution& sol) {
  auto partners = partner_pairs(inst, sol);
  std::vector<bool> bits(ord.atoms.size(), false);
  for (size_t i = 0; i < ord.atoms.size(); ++i) {
    const GroundAtom& atom = ord.atoms[i];
    switch (atom.pred) {
      case Pred::Unit2Zone:
        bits[i] = sol.zone_unit[atom.b - 1] == atom.a;
        break;
      case Pred::Unit2Sensor:
        bits[i] = sol.sensor_unit[atom.b - 1] == atom.a;
        break;
      case Pred::PartnerUnits:
        bits[i] = partners.count({atom.a, atom.b}) > 0;
        break;
      default: break;
    }
  }
  return bits;
}

bool lex_less(const std::vector<bool>& v, const std::vector<bool>& w) {
  for (size_t i = 0; i < v.size() && i < w.size(); ++i) {
    if (v[i] != w[i]) return v[i];
  }
  return false;
}

bool dominated(const PupInstance& inst, const Solution& sol,
               const std::vector<AtomPermutation>& gens,
               const AtomOrder& ord) {
  std::vector<bool> own = atom_bitvector(ord, inst, sol);
  for (const auto& g : gens) {
    if (lex_less(atom_bitvector(ord, inst, apply(g, sol)), own)) return true;
  }
  return false;
}

OrbitResult orbit(const PupInstance& inst, const Solution& sol,
                  const std::vector<AtomPermutation>& gens,
                  std::optional<uint64_t> cap) {
  (void)inst;
  OrbitResult result;
  std::set<Solution> visited{sol};
  std::deque<Solution> queue{sol};
  result.members.push_back(sol);
  while (!queue.empty()) {
    Solution cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      Solution next = apply(g, cur);
      if (!visited.insert(next).second) continue;
      if (cap && visited.size() > *cap) {
        result.truncated = true;
        return result;
      }
      result.members.push_back(next);
      queue.push_back(next);
    }
  }
  return result;
}

Solution lex_smallest(const std::vector<Solution>& orbit_set,
                      const PupInstance& inst, const AtomOrder& ord) {
  if (orbit_set.empty()) {
    throw std::invalid_argument("lex_smallest on empty orbit");
  }
  const Solution* best = &orbit_set.front();
  std::vector<bool> best_bits = atom_bitvector(ord, inst, *best);
  for (size_t i = 1; i < orbit_set.size(); ++i) {
    std::vector<bool> bits = atom_bitvector(ord, inst, orbit_set[i]);
    if (lex_less(bits, best_bits)) {
      best = &orbit_set[i];
      best_bits = std::move(bits);
    }
  }
  return *best;
}

namespace {

void append_cycles(std::ostringstream& os, const std::vector<int>& m,
                   const std::string& prefix) {
  std::vector<bool> seen(m.size(), false);
  for (size_t i = 0; i < m.size(); ++i) {
    if (seen[i] || m[i] == static_cast<int>(i) + 1) continue;
    os << '(';
    int cur = static_cast<int>(i) + 1;
    bool first = true;
    while (!seen[cur - 1]) {
      seen[cur - 1] = true;
      if (!first) os << ' ';
      os << prefix << cur;
      first = false;
      cur = m[cur - 1];
    }
    os << ')';
  }
}

}  // namespace

std::string write_generators(const std::vector<AtomPermutation>& gens) {
  std::ostringstream os;
  for (const auto& g : gens) {
    os << "units: ";
    append_cycles(os, g.unit_map, "");
    os << "; vertices: ";
    append_cycles(os, g.sensor_map, "s");
    append_cycles(os, g.zone_map, "z");
    os << '\n';
  }
  return os.str();
}

std::vector<AtomPermutation> parse_generators(const std::string& text,
                                              const PupInstance& inst) {
  std::vector<AtomPermutation> gens;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    }
    if (blank) continue;
    AtomPermutation p;
    p.zone_map = identity_map(inst.num_zones());
    p.sensor_map = identity_map(inst.num_sensors());
    p.unit_map = identity_map(inst.num_units());
    size_t pos = 0;
    auto expect = [&](const std::string& tok) {
      while (pos < line.size() &&
             std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
      }
      if (line.compare(pos, tok.size(), tok) != 0) {
        throw std::invalid_argument("bad generator line: " + line);
      }
      pos += tok.size();
    };
    auto parse_cycles = [&](bool vertices) {
      while (true) {
        while (pos < line.size() &&
               std::isspace(static_cast<unsigned char>(line[pos]))) {
          ++pos;
        }
        if (pos >= line.size() || line[pos] != '(') return;
        ++pos;
        // Cycle entries: (map, id) pairs in cycle order.
        std::vector<std::pair<std::vector<int>*, int>> cycle;
        while (pos < line.size() && line[pos] != ')') {
          while (pos < line.size() &&
                 std::isspace(static_cast<unsigned char>(line[pos]))) {
            ++pos;
          }
          std::vector<int>* target = &p.unit_map;
          if (vertices) {
            if (line[pos] == 's') {
              target = &p.sensor_map;
            } else if (line[pos] == 'z') {
              target = &p.zone_map;
            } else {
              throw std::invalid_argument("bad vertex token in: " + line);
            }
            ++pos;
          }
          size_t end = pos;
          while (end < line.size() &&
                 std::isdigit(static_cast<unsigned char>(line[end]))) {
            ++end;
          }
          if (end == pos) {
            throw std::invalid_argument("bad cycle entry in: " + line);
          }
          cycle.emplace_back(target, std::stoi(line.substr(pos, end - pos)));
          pos = end;
        }
        if (pos >= line.size()) {
          throw std::invalid_argument("unclosed cycle in: " + line);
        }
        ++pos;  // ')'
        for (size_t i = 0; i < cycle.size(); ++i) {
          auto [target, id] = cycle[i];
          auto [next_target, next_id] = cycle[(i + 1) % cycle.size()];
          if (target != next_target) {
            throw std::invalid_argument("mixed-type cycle in: " + line);
          }
          if (id < 1 || id > static_cast<int>(target->size())) {
            throw std::invalid_argument("id out of range in: " + line);
          }
          (*target)[id - 1] = next_id;
        }
      }
    };
    expect("units:");
    parse_cycles(false);
    expect(";");
    expect("vertices:");
    parse_cycles(true);
    gens.push_back(p);
  }
  return gens;
}

}  // namespace puplift
