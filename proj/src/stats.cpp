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

#include "puplift/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace puplift {

namespace {

// Doubled mid-ranks are integers, which keeps the sign-flip distribution a
// DP over an integer rank-sum.
std::vector<int64_t> doubled_midranks(const std::vector<double>& mags) {
  const size_t n = mags.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return mags[a] < mags[b]; });
  std::vector<int64_t> out(n, 0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && mags[idx[j + 1]] == mags[idx[i]]) ++j;
    // ranks i+1..j+1 tie; doubled mid-rank = (i+1) + (j+1)
    const int64_t doubled = static_cast<int64_t>(i + j + 2);
    for (size_t k = i; k <= j; ++k) out[idx[k]] = doubled;
    i = j + 1;
  }
  return out;
}

double exact_two_sided(const std::vector<int64_t>& dranks, int64_t dstat) {
  const int64_t total =
      std::accumulate(dranks.begin(), dranks.end(), int64_t{0});
  // counts[s] = number of sign assignments with doubled positive-rank-sum s.
  std::vector<uint64_t> counts(static_cast<size_t>(total) + 1, 0);
  counts[0] = 1;
  int64_t reach = 0;
  for (int64_t r : dranks) {
    for (int64_t s = reach; s >= 0; --s) {
      if (counts[static_cast<size_t>(s)] != 0) {
        counts[static_cast<size_t>(s + r)] += counts[static_cast<size_t>(s)];
      }
    }
    reach += r;
  }
  uint64_t tail = 0;
  for (int64_t s = 0; s <= total; ++s) {
    if (s <= dstat || s >= total - dstat) tail += counts[static_cast<size_t>(s)];
  }
  const double denom = std::ldexp(1.0, static_cast<int>(dranks.size()));
  double p = static_cast<double>(tail) / denom;
  return p > 1.0 ? 1.0 : p;
}

double approx_two_sided(const std::vector<int64_t>& dranks, double stat) {
  const double n = static_cast<double>(dranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  // Tie correction: subtract sum(t^3 - t)/48 over groups of tied magnitudes.
  std::vector<int64_t> sorted = dranks;
  std::sort(sorted.begin(), sorted.end());
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    var -= (t * t * t - t) / 48.0;
    i = j + 1;
  }
  if (var <= 0.0) return 1.0;
  const double z = (stat - mean + 0.5) / std::sqrt(var);
  double p = std::erfc(-z / std::sqrt(2.0));  // 2 * Phi(z), z <= 0 here
  return p > 1.0 ? 1.0 : p;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("wilcoxon: paired samples differ in length");
  }
  std::vector<double> mags;
  std::vector<bool> positive;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d == 0.0) continue;
    mags.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  WilcoxonResult res;
  res.n = mags.size();
  if (res.n == 0) return res;

  const std::vector<int64_t> dranks = doubled_midranks(mags);
  int64_t dplus = 0;
  int64_t total = 0;
  for (size_t i = 0; i < dranks.size(); ++i) {
    total += dranks[i];
    if (positive[i]) dplus += dranks[i];
  }
  const int64_t dstat = std::min(dplus, total - dplus);
  res.statistic = static_cast<double>(dstat) / 2.0;
  if (res.n <= 25) {
    res.exact = true;
    res.p_value = exact_two_sided(dranks, dstat);
  } else {
    res.exact = false;
    res.p_value = approx_two_sided(dranks, res.statistic);
  }
  return res;
}

}  // namespace puplift
