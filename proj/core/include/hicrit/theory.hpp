// Closed-form phase-transition boundaries and the exponent diagnostics that
// derive them.
//
// A boundary rho(beta) splits the (beta, r) plane: tests are asymptotically
// powerful above the curve and powerless below it. Five curves are exposed:
// HC and min-P in each of the two count regimes, plus the one-sample
// reference curve. All accept beta in the closed interval [1/2, 1].

#pragma once

#include <vector>

namespace hicrit {

// Count regime: "high" when per-category rates dominate log(N), "low" when
// they vanish against it.
enum class Regime { high, low };

enum class CurveId { high, low, bonf_high, bonf_low, one_sample };

// HC boundary, high-counts regime: 2(beta - 1/2) below beta = 3/4,
// 2(1 - sqrt(1 - beta))^2 at and above it.
double rho_high(double beta);

// HC boundary, low-counts regime: 2(1 + sqrt(2))(beta - 1/2) up to
// beta0 = 1/2 + (sqrt(2) - 1)/(sqrt(2) ln 2), then equal to rho_bonf_low.
double rho_low(double beta);

// min-P boundary, high-counts regime: 2(1 - sqrt(1 - beta))^2.
double rho_bonf_high(double beta);

// min-P boundary, low-counts regime: the solution r of
// alpha_star(low, 1, r) = 1 - beta, in Lambert form
// r = -2 W0(-2^(beta-1)/e) / ln 2. See rho_low_crossover for the beta where
// the HC low curve merges into this one.
double rho_bonf_low(double beta);

// One-sample reference boundary; satisfies rho_high(beta) = 2 * this.
double rho_one_sample(double beta);

double rho_curve(CurveId id, double beta);

// beta0 = 1/2 + (sqrt(2) - 1)/(sqrt(2) ln 2): where rho_low switches from
// its linear branch to rho_bonf_low.
double rho_low_crossover();

// Exponent of the per-category P-value tail under the alternative:
// a category at evidence level q = N^{-q} contributes at rate N^{-alpha}.
// high: (sqrt(q) - sqrt(r/2))^2, clamped to 0 for q <= r/2.
// low:  q (ln(2q / (r ln 2)) - 1) / ln 2 + r / 2 (nonnegative everywhere).
// Throws std::domain_error for nonpositive q or r.
double alpha_star(Regime regime, double q, double r);

// Net detectability exponent at evidence level q:
// (q + 1)/2 - beta - alpha_star(regime, q, r).
double xi(Regime regime, double q, double beta, double r);

// Maximum of xi over q in [0, 1], from the closed forms:
//   high: q* = min(2r, 1)
//   low:  q* = min(r ln2 / sqrt(2), 1)
// value > 0 exactly when r is above the regime's HC boundary.
struct XiStar {
  double value = 0.0;
  double q_star = 0.0;
};
XiStar xi_star(Regime regime, double beta, double r);

struct CurvePoint {
  double beta = 0.0;
  double r = 0.0;
};

// Tabulates one curve over a beta grid. Throws std::domain_error for any
// grid point outside [1/2, 1].
std::vector<CurvePoint> curve_table(CurveId id, const std::vector<double>& beta_grid);

}  // namespace hicrit
