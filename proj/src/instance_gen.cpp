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

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "puplift/instance.hpp"
#include "puplift/solver.hpp"

namespace puplift {

namespace {

int min_satisfiable_units(Family family, int zones) {
  static std::map<std::pair<int, int>, int> cache;
  static std::mutex mutex;
  std::pair<int, int> key{static_cast<int>(family), zones};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  PupInstance inst = build_topology(family, zones);
  int lower = std::max((inst.num_zones() + inst.ucap - 1) / inst.ucap,
                       (inst.num_sensors() + inst.ucap - 1) / inst.ucap);
  for (int k = lower; k <= lower + 8; ++k) {
    inst.units.clear();
    for (int u = 1; u <= k; ++u) inst.units.push_back(u);
    SearchConfig cfg;
    cfg.limit = 1;
    if (count_solutions(inst, {}, cfg) > 0) {
      std::lock_guard<std::mutex> lock(mutex);
      cache[key] = k;
      return k;
    }
  }
  throw std::runtime_error("no satisfiable unit count found for " +
                           std::string(family_name(family)) + "-" +
                           std::to_string(zones));
}

int family_minimum(Family family) {
  switch (family) {
    case Family::Double:
    case Family::DoubleV: return 6;
    case Family::Triple: return 9;
  }
  return 6;
}

}  // namespace

PupInstance generate_instance(Family family, int zones, bool unsat,
                              uint64_t /*seed*/) {
  if (zones < family_minimum(family)) {
    throw std::invalid_argument(std::string(family_name(family)) +
                                " requires at least " +
                                std::to_string(family_minimum(family)) +
                                " zones");
  }
  PupInstance inst = build_topology(family, zones);
  int k = min_satisfiable_units(family, zones);
  if (unsat) --k;
  for (int u = 1; u <= k; ++u) inst.units.push_back(u);
  inst.name = std::string(unsat ? "un-" : "") + family_name(family) + "-" +
              std::to_string(zones);
  inst.validate();
  return inst;
}

}  // namespace puplift
