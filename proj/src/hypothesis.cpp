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

#include "puplift/hypothesis.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace puplift {

namespace {

// closesensors/closezones are symmetric relations; their literals are kept
// with ascending argument order.
bool is_symmetric_pred(Pred p) {
  return p == Pred::CloseSensors || p == Pred::CloseZones;
}

void orient(BodyLit& lit) {
  if (is_symmetric_pred(lit.pred) && lit.v1 > lit.v2) std::swap(lit.v1, lit.v2);
}

// Canonical literal order: (predicate, sign, args), positive first.
bool lit_less(const BodyLit& a, const BodyLit& b) {
  if (a.pred != b.pred) return a.pred < b.pred;
  if (a.positive != b.positive) return a.positive > b.positive;
  if (a.v1 != b.v1) return a.v1 < b.v1;
  return a.v2 < b.v2;
}

std::vector<int> used_vars(const std::vector<BodyLit>& body) {
  std::vector<int> vars;
  for (const auto& lit : body) {
    for (int v : {lit.v1, lit.v2}) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
        vars.push_back(v);
      }
    }
  }
  std::sort(vars.begin(), vars.end());
  return vars;
}

std::vector<BodyLit> rename(const std::vector<BodyLit>& body,
                            const std::map<int, int>& theta) {
  std::vector<BodyLit> out;
  for (BodyLit lit : body) {
    lit.v1 = theta.at(lit.v1);
    lit.v2 = theta.at(lit.v2);
    orient(lit);
    out.push_back(lit);
  }
  std::sort(out.begin(), out.end(), lit_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool body_less(const std::vector<BodyLit>& a, const std::vector<BodyLit>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const BodyLit& x, const BodyLit& y) { return lit_less(x, y); });
}

}  // namespace

void canonicalize(Constraint& r) {
  std::vector<int> vars = used_vars(r.body);
  size_t k = vars.size();
  // Compact to 1..k first.
  std::map<int, int> compact;
  for (size_t i = 0; i < k; ++i) compact[vars[i]] = static_cast<int>(i) + 1;
  std::vector<BodyLit> base = rename(r.body, compact);

  std::vector<int> perm(k);
  for (size_t i = 0; i < k; ++i) perm[i] = static_cast<int>(i) + 1;
  std::vector<BodyLit> best = base;
  bool first = true;
  do {
    std::map<int, int> theta;
    for (size_t i = 0; i < k; ++i) theta[static_cast<int>(i) + 1] = perm[i];
    std::vector<BodyLit> cand = rename(base, theta);
    if (first || body_less(cand, best)) {
      best = cand;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Renumber by first occurrence so V1 appears first.
  std::map<int, int> renum;
  for (const auto& lit : best) {
    for (int v : {lit.v1, lit.v2}) {
      if (!renum.count(v)) renum[v] = static_cast<int>(renum.size()) + 1;
    }
  }
  r.body = rename(best, renum);
}

std::vector<ModeDecl> pup_bias() {
  return {
      {1, Pred::Zone2Sensor, false, false},
      {1, Pred::CloseSensors, true, true},
      {1, Pred::CloseZones, true, true},
      {2, Pred::Unit2ZoneGeq, false, false},
      {2, Pred::Unit2SensorGeq, false, false},
      {1, Pred::PartnerUnits, false, false},
  };
}

std::vector<Constraint> build_space(const std::vector<ModeDecl>& bias) {
  std::vector<BodyLit> pool;
  std::map<Pred, int> recall;
  for (const auto& decl : bias) {
    recall[decl.pred] = decl.recall;
    for (bool positive : {true, false}) {
      for (int v1 = 1; v1 <= kMaxVars; ++v1) {
        for (int v2 = 1; v2 <= kMaxVars; ++v2) {
          if (decl.anti_reflexive && v1 == v2) continue;
          if (decl.symmetric && v1 > v2) continue;
          pool.push_back({positive, decl.pred, v1, v2});
        }
      }
    }
  }

  auto safe = [](const std::vector<BodyLit>& body) {
    std::set<int> pos_vars;
    bool has_pos = false;
    for (const auto& lit : body) {
      if (lit.positive) {
        has_pos = true;
        pos_vars.insert(lit.v1);
        pos_vars.insert(lit.v2);
      }
    }
    if (!has_pos) return false;
    for (const auto& lit : body) {
      if (!pos_vars.count(lit.v1) || !pos_vars.count(lit.v2)) return false;
    }
    return true;
  };

  std::set<std::vector<BodyLit>> seen;
  std::vector<Constraint> space;
  size_t n = pool.size();
  std::vector<size_t> pick;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (!pick.empty()) {
      std::vector<BodyLit> body;
      std::map<Pred, int> counts;
      bool ok = true;
      for (size_t i : pick) {
        body.push_back(pool[i]);
        if (++counts[pool[i].pred] > recall[pool[i].pred]) ok = false;
      }
      if (ok && safe(body)) {
        Constraint c;
        c.body = body;
        canonicalize(c);
        if (seen.insert(c.body).second) space.push_back(c);
      }
    }
    if (pick.size() == kMaxBodyLits) return;
    for (size_t i = start; i < n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);

  std::sort(space.begin(), space.end(),
            [](const Constraint& a, const Constraint& b) {
              if (a.body.size() != b.body.size()) {
                return a.body.size() < b.body.size();
              }
              return body_less(a.body, b.body);
            });
  for (size_t i = 0; i < space.size(); ++i) {
    space[i].id = static_cast<int>(i);
  }
  return space;
}

bool subsumes(const Constraint& r1, const Constraint& r2) {
  // Single positive order-predicate literals match a literal of either
  // sign: on PUP solutions such rules fire unconditionally (the GEQ
  // relations are total at level 1), so they prune at least as much as any
  // rule mentioning the predicate.
  bool blind = r1.body.size() == 1 && r1.body.front().positive &&
               is_order_pred(r1.body.front().pred);

  std::vector<int> v1 = used_vars(r1.body);
  std::vector<int> v2 = used_vars(r2.body);
  if (v1.empty()) {
    // Ground rule: literal-set inclusion.
    for (const auto& lit : r1.body) {
      bool found = false;
      for (const auto& other : r2.body) {
        if (other.pred == lit.pred && other.v1 == lit.v1 &&
            other.v2 == lit.v2 && (blind || other.positive == lit.positive)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }
  if (v2.empty()) return false;

  size_t k = v1.size(), m = v2.size();
  std::vector<size_t> choice(k, 0);
  while (true) {
    std::map<int, int> theta;
    for (size_t i = 0; i < k; ++i) theta[v1[i]] = v2[choice[i]];
    bool all = true;
    for (const auto& lit : r1.body) {
      BodyLit img = lit;
      img.v1 = theta[lit.v1];
      img.v2 = theta[lit.v2];
      orient(img);
      bool found = false;
      for (const auto& other : r2.body) {
        if (other.pred == img.pred && other.v1 == img.v1 &&
            other.v2 == img.v2 && (blind || other.positive == img.positive)) {
          found = true;
          break;
        }
      }
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) return true;
    size_t i = 0;
    while (i < k && ++choice[i] == m) choice[i++] = 0;
    if (i == k) break;
  }
  return false;
}

std::vector<Constraint> subsumers(const Constraint& r,
                                  const std::vector<Constraint>& space) {
  std::vector<Constraint> out;
  for (const auto& cand : space) {
    if (subsumes(cand, r)) out.push_back(cand);
  }
  return out;
}

int score(const Constraint& r, ScoreScheme scheme) {
  if (scheme == ScoreScheme::Default) return static_cast<int>(r.body.size());
  int total = 0;
  for (const auto& lit : r.body) {
    if (is_domain_pred(lit.pred)) {
      total += 1;
    } else if (lit.v1 == lit.v2) {
      total += 2;
    } else {
      total += 3;
    }
  }
  return total;
}

std::string to_string(const Constraint& r) {
  std::ostringstream os;
  os << ":- ";
  for (size_t i = 0; i < r.body.size(); ++i) {
    if (i) os << ", ";
    const auto& lit = r.body[i];
    if (!lit.positive) os << "not ";
    os << pred_name(lit.pred) << "(V" << lit.v1 << ",V" << lit.v2 << ')';
  }
  os << '.';
  return os.str();
}

std::string write_space(const std::vector<Constraint>& space) {
  std::ostringstream os;
  for (const auto& c : space) os << c.id << ": " << to_string(c) << '\n';
  return os.str();
}

namespace {

int parse_var(const std::string& tok) {
  if (tok.size() < 2 || tok[0] != 'V') {
    throw std::invalid_argument("expected variable, got '" + tok + "'");
  }
  return std::stoi(tok.substr(1));
}

}  // namespace

Constraint parse_constraint(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.rfind(":-", 0) != 0 || s.empty() || s.back() != '.') {
    throw std::invalid_argument("constraint must look like ':- body.'");
  }
  s = s.substr(2, s.size() - 3);
  Constraint c;
  size_t pos = 0;
  while (pos < s.size()) {
    BodyLit lit;
    if (s.compare(pos, 3, "not") == 0) {
      lit.positive = false;
      pos += 3;
    }
    size_t open = s.find('(', pos);
    size_t comma = s.find(',', open);
    size_t close = s.find(')', comma);
    if (open == std::string::npos || comma == std::string::npos ||
        close == std::string::npos) {
      throw std::invalid_argument("malformed literal in constraint");
    }
    std::string name = s.substr(pos, open - pos);
    auto pred = pred_from_name(name);
    if (!pred) throw std::invalid_argument("unknown predicate '" + name + "'");
    lit.pred = *pred;
    lit.v1 = parse_var(s.substr(open + 1, comma - open - 1));
    lit.v2 = parse_var(s.substr(comma + 1, close - comma - 1));
    c.body.push_back(lit);
    pos = close + 1;
    if (pos < s.size() && s[pos] == ',') ++pos;
  }
  if (c.body.empty()) throw std::invalid_argument("empty constraint body");
  canonicalize(c);
  return c;
}

std::vector<Constraint> parse_constraints(const std::string& text) {
  std::vector<Constraint> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto cut = line.find('%');
    if (cut != std::string::npos) line = line.substr(0, cut);
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    }
    if (blank) continue;
    out.push_back(parse_constraint(line));
  }
  return out;
}

std::string write_constraints(const std::vector<Constraint>& rules) {
  std::ostringstream os;
  for (const auto& r : rules) os << to_string(r) << '\n';
  return os.str();
}

}  // namespace puplift
