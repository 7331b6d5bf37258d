// Per-category P-values for the two-sample count comparison.
//
// The exact P-value for a category with counts (x, y) conditions on
// n = x + y and tests the allocation probability p': with m = n*p' and
// d = |x - m|,
//
//   pi(x, y) = Pr(|Bin(n, p') - m| >= d)
//            = Pr(Bin <= floor(m - d)) + Pr(Bin >= ceil(m + d)),
//
// so the observed point is always inside its own tail and the value is
// strictly positive. n = 0 gives P-value 1 (a category unseen in both
// samples carries no evidence).

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hicrit/rng.hpp"
#include "hicrit/tables.hpp"

namespace hicrit {

struct CountPair {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
};

enum class PValueKind { exact, randomized, normal };

struct PValue {
  double value = 1.0;  // in (0, 1]
  PValueKind kind = PValueKind::exact;
};

// One P-value per category, all of the same provenance.
struct PValueVector {
  std::vector<double> values;
  PValueKind kind = PValueKind::exact;

  std::size_t size() const { return values.size(); }
};

// Exact two-sided binomial allocation P-value and the probability mass
// sitting exactly at the observed deviation. The atom includes the mirror
// point 2*m - x when that is an integer support point distinct from x
// (detected with a 1e-8 tolerance on integrality).
struct ExactPValueParts {
  double pvalue = 1.0;  // Pr(|Bin - m| >= d)
  double atom = 1.0;    // Pr(|Bin - m| = d)
};
ExactPValueParts exact_binom_pvalue_parts(CountPair pair, double pprime);

// Exact P-value alone. pprime must be in (0, 1); 1/2 corresponds to equal
// sample sizes. Symmetric in (x, y) when pprime = 1/2. Values below the
// smallest normal double clamp to it so the (0, 1] invariant holds.
PValue exact_binom_pvalue(CountPair pair, double pprime = 0.5);

// Randomized P-value: Pr(|Bin - m| > d) + u * Pr(|Bin - m| = d), u in [0,1).
// Always <= the exact P-value; conditional on n = x + y it is exactly
// Uniform(0,1) when x ~ Bin(n, p'). Clamped away from 0 like the exact form.
PValue randomized_pvalue(CountPair pair, double pprime, double u);

// Two-sample normal P-value 2 * Pr(N(0,1) >= |y - x| / sqrt(2)).
PValue normal_two_sample_pvalue(double x, double y);

// Plug-in allocation probability sum(x) / (sum(x) + sum(y)).
// Throws std::invalid_argument when both samples are entirely empty.
double estimate_allocation_prob(const CountTablePair& tables);

// P-values for every category. pprime = nullopt estimates the allocation
// probability from the tables; if that estimate is degenerate (0 or 1, one
// sample entirely empty) every P-value is 1. Randomized mode uses one
// uniform per category, indexed by category (rng.derive(i)), so the output
// does not depend on evaluation order. rng is unused by the other modes.
PValueVector pvalue_vector(const CountTablePair& tables, PValueKind mode,
                           std::optional<double> pprime = std::nullopt,
                           const RandomStream& rng = RandomStream{0});

// Normal P-values for real-valued tables (the normal-means model).
PValueVector pvalue_vector(const RealTablePair& tables);

}  // namespace hicrit
