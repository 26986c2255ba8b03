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

#ifndef PUPLIFT_STATS_HPP
#define PUPLIFT_STATS_HPP

#include <cstddef>
#include <vector>

namespace puplift {

struct WilcoxonResult {
  std::size_t n = 0;       // pairs with a non-zero difference
  double statistic = 0.0;  // min(W+, W-) over signed ranks
  double p_value = 1.0;    // two-sided
  bool exact = true;       // exact tail enumeration vs normal approximation
};

// Paired two-sided Wilcoxon signed-rank test. Zero differences are dropped,
// tied magnitudes receive mid-ranks. Exact p-values up to 25 non-zero pairs,
// tie-corrected normal approximation with continuity correction beyond.
// Throws std::invalid_argument on length mismatch.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y);

}  // namespace puplift

#endif  // PUPLIFT_STATS_HPP
