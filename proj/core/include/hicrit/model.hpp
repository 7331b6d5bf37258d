// The rare/weak two-sample model: baseline rate generators, Hellinger
// perturbations, Poisson samplers, regime diagnostics, and the companion
// normal-means sampler.
//
// Calibration: a fraction epsilon = N^(-beta) of categories is perturbed,
// each by Hellinger distance mu = r * ln(N) / (2n) where n = min(n_x, n_y).
// Under the alternative the y sample of a perturbed category is drawn with
// rate n_y * Q+ or n_y * Q-, where sqrt(Q+-) = max(sqrt(P) +- sqrt(mu), 0).

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hicrit/rng.hpp"
#include "hicrit/tables.hpp"

namespace hicrit {

struct Baseline {
  enum class Kind { uniform, zipf_mandelbrot, custom };

  Kind kind = Kind::uniform;
  double zipf_shift = 0.0;     // k > -1
  double zipf_exponent = 2.0;  // xi > 1
  std::vector<double> custom_rates;

  static Baseline Uniform() { return Baseline{}; }
  static Baseline ZipfMandelbrot(double shift, double exponent) {
    Baseline b;
    b.kind = Kind::zipf_mandelbrot;
    b.zipf_shift = shift;
    b.zipf_exponent = exponent;
    return b;
  }
  static Baseline Custom(std::vector<double> rates) {
    Baseline b;
    b.kind = Kind::custom;
    b.custom_rates = std::move(rates);
    return b;
  }
};

// One point of the phase space plus the sampling frame around it.
struct RareWeakParams {
  std::size_t N = 0;   // category count
  double n_x = 0.0;    // sample sizes (Poisson intensities scale with them);
  double n_y = 0.0;    // real-valued so n = N^gamma needs no rounding
  double beta = 0.5;   // rarity exponent in (0, 1)
  double r = 0.0;      // perturbation intensity >= 0
  Baseline baseline;

  double epsilon() const;        // N^(-beta)
  double mu() const;             // r * ln(N) / (2 * min(n_x, n_y))
  double calibration_n() const;  // min(n_x, n_y)

  // Throws std::invalid_argument on any violated field invariant.
  void validate() const;
};

// Normalized probability vector for the baseline over N categories.
// uniform: 1/N each; zipf_mandelbrot: proportional to (i + k)^(-xi), i from 1;
// custom: rates / sum(rates), length must equal N.
// Throws std::invalid_argument for invalid shape or parameters.
std::vector<double> baseline_rates(const Baseline& baseline, std::size_t N);

struct PerturbedRates {
  double q_plus = 0.0;
  double q_minus = 0.0;
};

// Hellinger-calibrated rate pair: Q+- = (max(sqrt(p) +- sqrt(mu), 0))^2.
PerturbedRates perturbed_rates(double p, double mu);

enum class Hypothesis { null, alt };

// Null tables: X_i ~ Pois(n_x P_i), Y_i ~ Pois(n_y P_i), labels all 0.
// Per-category substream rng.derive(i) draws X_i then Y_i, so generation is
// bit-identical under any evaluation order. The overload taking rates skips
// recomputing the baseline (rates.size() must equal params.N).
CountTablePair sample_null(const RareWeakParams& params, const RandomStream& rng);
CountTablePair sample_null(const RareWeakParams& params, const std::vector<double>& rates,
                           const RandomStream& rng);

// Alternative tables: X_i as under the null; category i is labeled +1 with
// probability epsilon/2, -1 with probability epsilon/2, else 0, and Y_i is
// drawn with rate n_y * {Q+, Q-, P_i} accordingly. Substream order per
// category: X_i, the label uniform, then Y_i.
CountTablePair sample_alt(const RareWeakParams& params, const RandomStream& rng);
CountTablePair sample_alt(const RareWeakParams& params, const std::vector<double>& rates,
                          const RandomStream& rng);

// min and max over categories of n * P_i / ln(N) with n = min(n_x, n_y):
// large values put every category in the high-counts regime, vanishing
// values in the low-counts regime.
struct RegimeDiagnostic {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};
RegimeDiagnostic regime_diagnostic(const RareWeakParams& params);

// Normal-means companion model on the variance-stabilized scale:
// X_i ~ N(nu_i, 1) with nu_i = 2 sqrt(n P_i); under the alternative Y_i is
// the mixture with means nu_i +- sqrt(2 r ln N) on the labeled categories.
// Requires n_x == n_y (the model shares one n between the samples).
// Substream order per category: X_i, the label uniform (alt only), then Y_i.
RealTablePair sample_normal_pair(const RareWeakParams& params, Hypothesis hypothesis,
                                 const RandomStream& rng);
RealTablePair sample_normal_pair(const RareWeakParams& params, const std::vector<double>& rates,
                                 Hypothesis hypothesis, const RandomStream& rng);

}  // namespace hicrit
