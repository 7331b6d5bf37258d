#include "hicrit/hc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hicrit {

HCResult hc_statistic(const PValueVector& pvalues, HCConfig config) {
  const std::size_t n = pvalues.size();
  if (n == 0) throw std::invalid_argument("hc_statistic: empty P-value vector");
  if (!(config.gamma0 > 0.0 && config.gamma0 < 1.0)) {
    throw std::invalid_argument("hc_statistic: gamma0 must be in (0, 1)");
  }

  std::vector<double> sorted(pvalues.values);
  for (double v : sorted) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw std::invalid_argument("hc_statistic: P-values must lie in (0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  std::size_t cap = static_cast<std::size_t>(
      std::floor(config.gamma0 * static_cast<double>(n) + 1e-9));
  cap = std::min(cap, n);

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  HCResult result;
  result.degenerate = true;
  for (std::size_t i = 1; i <= cap; ++i) {
    const double p = sorted[i - 1];
    if (p >= 1.0) break;  // sorted: every later rank is 1 as well
    const double frac = static_cast<double>(i) / static_cast<double>(n);
    const double score = sqrt_n * (frac - p) / std::sqrt(p * (1.0 - p));
    if (result.degenerate || score > result.value) {
      result.value = score;
      result.argmax_index = i;
      result.threshold_pvalue = p;
      result.degenerate = false;
    }
  }
  return result;
}

PValue min_p_statistic(const PValueVector& pvalues) {
  if (pvalues.size() == 0) throw std::invalid_argument("min_p_statistic: empty P-value vector");
  const double m = *std::min_element(pvalues.values.begin(), pvalues.values.end());
  return PValue{m, pvalues.kind};
}

}  // namespace hicrit
