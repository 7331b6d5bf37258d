// Global test statistics over a vector of per-category P-values.
//
// The HC statistic sorts the P-values ascending and maximizes the component
// score
//
//   HC_i = sqrt(N) * (i/N - pi_(i)) / sqrt(pi_(i) * (1 - pi_(i)))
//
// over ranks 1 <= i <= floor(gamma0 * N) restricted to pi_(i) < 1 (the score
// is undefined at 1). If no rank qualifies the result is flagged degenerate
// with value 0.

#pragma once

#include <cstddef>

#include "hicrit/pvalues.hpp"

namespace hicrit {

struct HCConfig {
  double gamma0 = 0.10;  // fraction of ranks searched, in (0, 1)
};

struct HCResult {
  double value = 0.0;
  std::size_t argmax_index = 0;   // 1-based rank attaining the max; 0 when degenerate
  double threshold_pvalue = 1.0;  // sorted P-value at the argmax rank
  bool degenerate = false;        // no rank in range had a P-value < 1
};

// Throws std::invalid_argument for an empty vector, gamma0 outside (0, 1),
// or any P-value outside (0, 1]. The rank cap floor(gamma0 * N) is computed
// with a +1e-9 nudge so decimal gamma0 values that are not exactly
// representable in binary (0.1 * 10^4) do not round down spuriously.
HCResult hc_statistic(const PValueVector& pvalues, HCConfig config = {});

// Minimum P-value (the min-P / Bonferroni statistic).
// Throws std::invalid_argument for an empty vector.
PValue min_p_statistic(const PValueVector& pvalues);

}  // namespace hicrit
