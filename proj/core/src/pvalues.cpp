#include "hicrit/pvalues.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hicrit/specfun.hpp"

namespace hicrit {
namespace {

constexpr double kMinPValue = std::numeric_limits<double>::min();

double clamp_unit(double v) {
  if (v < kMinPValue) return kMinPValue;
  if (v > 1.0) return 1.0;
  return v;
}

double binom_pmf(std::uint64_t n, double p, std::uint64_t k) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
                  kd * std::log(p) + (nd - kd) * std::log1p(-p));
}

}  // namespace

ExactPValueParts exact_binom_pvalue_parts(CountPair pair, double pprime) {
  if (!(pprime > 0.0 && pprime < 1.0)) {
    throw std::invalid_argument("exact_binom_pvalue: pprime must be in (0, 1)");
  }
  const std::uint64_t n = pair.x + pair.y;
  if (n == 0) return ExactPValueParts{1.0, 1.0};

  const double nd = static_cast<double>(n);
  const double xd = static_cast<double>(pair.x);
  const double m = nd * pprime;
  const double d = std::fabs(xd - m);

  // Tail boundaries at achievable support points; the 1e-9 nudges absorb
  // the rounding of m = n*pprime so the observed point is never dropped
  // from its own tail.
  const double lo = std::floor(m - d + 1e-9);
  const double hi = std::ceil(m + d - 1e-9);

  double pvalue = 0.0;
  if (lo >= hi) {
    // Tails overlap: zero observed deviation at an integral mean.
    pvalue = 1.0;
  } else {
    if (lo >= 0.0) {
      pvalue += binom_tail(n, pprime, static_cast<std::uint64_t>(lo), Tail::lower).prob();
    }
    if (hi <= nd) {
      pvalue += binom_tail(n, pprime, static_cast<std::uint64_t>(hi), Tail::upper).prob();
    }
  }

  // Mass exactly at the observed deviation: the observed point plus its
  // mirror 2m - x when that is an integer support point distinct from x.
  double atom = binom_pmf(n, pprime, pair.x);
  const double mirror = 2.0 * m - xd;
  const double mirror_round = std::nearbyint(mirror);
  if (std::fabs(mirror - mirror_round) <= 1e-8 && mirror_round >= 0.0 && mirror_round <= nd &&
      static_cast<std::uint64_t>(mirror_round) != pair.x) {
    atom += binom_pmf(n, pprime, static_cast<std::uint64_t>(mirror_round));
  }

  pvalue = clamp_unit(pvalue);
  if (atom > pvalue) atom = pvalue;
  return ExactPValueParts{pvalue, atom};
}

PValue exact_binom_pvalue(CountPair pair, double pprime) {
  return PValue{exact_binom_pvalue_parts(pair, pprime).pvalue, PValueKind::exact};
}

PValue randomized_pvalue(CountPair pair, double pprime, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("randomized_pvalue: u must be in [0, 1)");
  }
  const ExactPValueParts parts = exact_binom_pvalue_parts(pair, pprime);
  const double v = parts.pvalue - (1.0 - u) * parts.atom;
  return PValue{clamp_unit(v), PValueKind::randomized};
}

PValue normal_two_sample_pvalue(double x, double y) {
  const double z = std::fabs(y - x) / 1.41421356237309504880168872421;
  return PValue{clamp_unit(2.0 * normal_sf(z)), PValueKind::normal};
}

double estimate_allocation_prob(const CountTablePair& tables) {
  if (tables.x_counts.size() != tables.y_counts.size()) {
    throw std::invalid_argument("estimate_allocation_prob: table lengths differ");
  }
  std::uint64_t sx = 0;
  std::uint64_t sy = 0;
  for (std::uint64_t v : tables.x_counts) sx += v;
  for (std::uint64_t v : tables.y_counts) sy += v;
  if (sx == 0 && sy == 0) {
    throw std::invalid_argument("estimate_allocation_prob: both samples are empty");
  }
  return static_cast<double>(sx) / (static_cast<double>(sx) + static_cast<double>(sy));
}

PValueVector pvalue_vector(const CountTablePair& tables, PValueKind mode,
                           std::optional<double> pprime, const RandomStream& rng) {
  const std::size_t n = tables.x_counts.size();
  if (n == 0 || tables.y_counts.size() != n) {
    throw std::invalid_argument("pvalue_vector: tables must be nonempty and aligned");
  }

  PValueVector out;
  out.kind = mode;
  out.values.resize(n);

  if (mode == PValueKind::normal) {
    for (std::size_t i = 0; i < n; ++i) {
      out.values[i] = normal_two_sample_pvalue(static_cast<double>(tables.x_counts[i]),
                                               static_cast<double>(tables.y_counts[i]))
                          .value;
    }
    return out;
  }

  double p = 0.5;
  if (pprime.has_value()) {
    p = *pprime;
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("pvalue_vector: pprime must be in (0, 1)");
    }
  } else {
    p = estimate_allocation_prob(tables);
    if (p <= 0.0 || p >= 1.0) {
      // One sample entirely empty: the allocation test carries no evidence.
      for (std::size_t i = 0; i < n; ++i) out.values[i] = 1.0;
      return out;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const CountPair pair{tables.x_counts[i], tables.y_counts[i]};
    if (mode == PValueKind::exact) {
      out.values[i] = exact_binom_pvalue_parts(pair, p).pvalue;
    } else {
      RandomStream sub = rng.derive(i);
      out.values[i] = randomized_pvalue(pair, p, sub.next_double()).value;
    }
  }
  return out;
}

PValueVector pvalue_vector(const RealTablePair& tables) {
  const std::size_t n = tables.x_values.size();
  if (n == 0 || tables.y_values.size() != n) {
    throw std::invalid_argument("pvalue_vector: tables must be nonempty and aligned");
  }
  PValueVector out;
  out.kind = PValueKind::normal;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = normal_two_sample_pvalue(tables.x_values[i], tables.y_values[i]).value;
  }
  return out;
}

}  // namespace hicrit
