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

#include "puplift/examples.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "puplift/solver.hpp"

namespace puplift {

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  if (out.empty()) out = "inst";
  return out;
}

CdpiExample from_solution(const PupInstance& inst, const AtomOrder& ord,
                          const Solution& sol, const std::string& id,
                          bool positive) {
  CdpiExample e;
  e.id = id;
  e.positive = positive;
  e.context = inst;
  e.weight = positive ? kInfiniteWeight : 1;
  std::set<GroundAtom> atoms = solution_atoms(inst, sol);
  for (const auto& atom : ord.atoms) {
    if (atoms.count(atom)) {
      e.inclusions.insert(atom);
    } else {
      e.exclusions.insert(atom);
    }
  }
  return e;
}

void finalize(ExampleGenResult& result, const PupInstance& inst) {
  if (result.examples.empty()) {
    result.diagnostic = "no solutions for " + inst.name;
    return;
  }
  bool any_pos = false, any_neg = false;
  for (const auto& e : result.examples) {
    (e.positive ? any_pos : any_neg) = true;
  }
  if (!any_pos || !any_neg) {
    result.one_sided = true;
    result.diagnostic = std::string("one-sided example set for ") + inst.name +
                        (any_pos ? ": positives only" : ": negatives only");
  }
}

}  // namespace

ExampleGenResult scalable_enum(const PupInstance& inst,
                               const std::vector<AtomPermutation>& gens,
                               const AtomOrder& ord, uint64_t n,
                               uint64_t seed) {
  ExampleGenResult result;
  SearchConfig cfg;
  cfg.limit = n;
  cfg.seed = seed;
  cfg.randomize_values = true;
  std::vector<Solution> sols = enumerate_solutions(inst, {}, cfg);
  std::string base = sanitize(inst.name) + "_enum_";
  for (size_t i = 0; i < sols.size(); ++i) {
    bool neg = dominated(inst, sols[i], gens, ord);
    result.examples.push_back(from_solution(
        inst, ord, sols[i], base + std::to_string(i + 1), !neg));
  }
  finalize(result, inst);
  return result;
}

ExampleGenResult scalable_fullsbcs(const PupInstance& inst,
                                   const std::vector<AtomPermutation>& gens,
                                   const AtomOrder& ord, uint64_t cells,
                                   uint64_t max_cell_size, uint64_t seed) {
  ExampleGenResult result;
  std::string base = sanitize(inst.name) + "_full_";
  std::set<Solution> explored;
  uint64_t cell = 0;
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.randomize_values = true;
  solve(inst, {}, cfg, [&](const Solution& sol) {
    if (explored.count(sol)) return true;
    OrbitResult orb = orbit(inst, sol, gens);
    explored.insert(orb.members.begin(), orb.members.end());
    ++cell;
    Solution least = lex_smallest(orb.members, inst, ord);
    std::string prefix = base + std::to_string(cell);
    result.examples.push_back(
        from_solution(inst, ord, least, prefix + "_pos", true));
    uint64_t taken = 0;
    for (const auto& member : orb.members) {
      if (taken >= max_cell_size) break;
      if (member == least) continue;  // the minimum is the positive
      ++taken;
      result.examples.push_back(from_solution(
          inst, ord, member, prefix + "_neg" + std::to_string(taken), false));
    }
    return cell < cells;
  });
  finalize(result, inst);
  return result;
}

CdpiExample gen_positive(const PupInstance& inst) {
  CdpiExample e;
  e.id = sanitize(inst.name) + "_gen";
  e.positive = true;
  e.context = inst;
  e.weight = kInfiniteWeight;
  return e;
}

namespace {

void write_atom_set(std::ostringstream& os, const std::set<GroundAtom>& atoms) {
  os << '{';
  bool first = true;
  for (const auto& atom : atoms) {
    if (!first) os << ", ";
    os << to_string(atom);
    first = false;
  }
  os << '}';
}

GroundAtom parse_atom(const std::string& text) {
  size_t open = text.find('(');
  size_t comma = text.find(',', open);
  size_t close = text.find(')', comma);
  if (open == std::string::npos || comma == std::string::npos ||
      close == std::string::npos) {
    throw std::invalid_argument("malformed atom '" + text + "'");
  }
  auto pred = pred_from_name(text.substr(0, open));
  if (!pred) {
    throw std::invalid_argument("unknown predicate in atom '" + text + "'");
  }
  return {*pred, std::stoi(text.substr(open + 1, comma - open - 1)),
          std::stoi(text.substr(comma + 1, close - comma - 1))};
}

std::set<GroundAtom> parse_atom_set(const std::string& text) {
  std::set<GroundAtom> out;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[pos])) ||
            text[pos] == ',')) {
      ++pos;
    }
    if (pos >= text.size()) break;
    size_t end = text.find(')', pos);
    if (end == std::string::npos) {
      throw std::invalid_argument("malformed atom set '" + text + "'");
    }
    out.insert(parse_atom(text.substr(pos, end - pos + 1)));
    pos = end + 1;
  }
  return out;
}

}  // namespace

std::string write_examples(const std::vector<CdpiExample>& examples) {
  std::ostringstream os;
  for (const auto& e : examples) {
    os << (e.positive ? "#pos(" : "#neg(") << e.id;
    if (e.weight != kInfiniteWeight) os << '@' << e.weight;
    os << ", ";
    write_atom_set(os, e.inclusions);
    os << ", ";
    write_atom_set(os, e.exclusions);
    os << ", {\n" << write_instance(e.context) << "}).\n";
  }
  return os.str();
}

std::vector<CdpiExample> parse_examples(const std::string& text) {
  std::vector<CdpiExample> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    CdpiExample e;
    if (line.rfind("#pos(", 0) == 0) {
      e.positive = true;
    } else if (line.rfind("#neg(", 0) == 0) {
      e.positive = false;
    } else {
      throw std::invalid_argument("expected #pos/#neg, got: " + line);
    }
    size_t pos = 5;
    size_t id_end = line.find(',', pos);
    if (id_end == std::string::npos) {
      throw std::invalid_argument("missing id in: " + line);
    }
    std::string id = line.substr(pos, id_end - pos);
    size_t at = id.find('@');
    if (at != std::string::npos) {
      e.weight = std::stoull(id.substr(at + 1));
      id = id.substr(0, at);
    } else {
      e.weight = kInfiniteWeight;
    }
    e.id = id;
    // Inclusions and exclusions are the first two brace groups.
    size_t inc_open = line.find('{', id_end);
    size_t inc_close = line.find('}', inc_open);
    size_t exc_open = line.find('{', inc_close);
    size_t exc_close = line.find('}', exc_open);
    size_t ctx_open = line.find('{', exc_close);
    if (ctx_open == std::string::npos || line.substr(ctx_open) != "{") {
      throw std::invalid_argument("malformed example header: " + line);
    }
    e.inclusions =
        parse_atom_set(line.substr(inc_open + 1, inc_close - inc_open - 1));
    e.exclusions =
        parse_atom_set(line.substr(exc_open + 1, exc_close - exc_open - 1));
    std::ostringstream ctx;
    bool closed = false;
    while (std::getline(is, line)) {
      if (line == "}).") {
        closed = true;
        break;
      }
      ctx << line << '\n';
    }
    if (!closed) {
      throw std::invalid_argument("unterminated context block for " + e.id);
    }
    e.context = parse_instance(ctx.str());
    std::set<GroundAtom> overlap;
    std::set_intersection(e.inclusions.begin(), e.inclusions.end(),
                          e.exclusions.begin(), e.exclusions.end(),
                          std::inserter(overlap, overlap.begin()));
    if (!overlap.empty()) {
      throw std::invalid_argument("inclusions meet exclusions in " + e.id);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace puplift
