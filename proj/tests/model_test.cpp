#include "hicrit/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "hicrit/pvalues.hpp"
#include "hicrit/rng.hpp"

namespace hicrit {
namespace {

RareWeakParams base_params(std::size_t N, double n, double beta, double r) {
  RareWeakParams params;
  params.N = N;
  params.n_x = n;
  params.n_y = n;
  params.beta = beta;
  params.r = r;
  return params;
}

TEST(RareWeakParams, DerivedQuantities) {
  RareWeakParams params = base_params(10000, 500.0, 0.5, 2.0);
  params.n_x = 1000.0;
  EXPECT_DOUBLE_EQ(params.epsilon(), 0.01);
  EXPECT_DOUBLE_EQ(params.calibration_n(), 500.0);
  EXPECT_DOUBLE_EQ(params.mu(), 2.0 * std::log(10000.0) / (2.0 * 500.0));
  EXPECT_NO_THROW(params.validate());
}

TEST(RareWeakParams, ValidatesFields) {
  EXPECT_THROW(base_params(0, 100.0, 0.5, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(base_params(10, 0.5, 0.5, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(base_params(10, 100.0, 0.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(base_params(10, 100.0, 1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(base_params(10, 100.0, 0.5, -0.1).validate(), std::invalid_argument);
  RareWeakParams lopsided = base_params(10, 100.0, 0.5, 1.0);
  lopsided.n_y = 0.0;
  EXPECT_THROW(lopsided.validate(), std::invalid_argument);
}

TEST(BaselineRates, UniformAndCustom) {
  const std::vector<double> uniform = baseline_rates(Baseline::Uniform(), 8);
  ASSERT_EQ(uniform.size(), 8u);
  for (const double p : uniform) EXPECT_DOUBLE_EQ(p, 0.125);

  const std::vector<double> custom = baseline_rates(Baseline::Custom({2.0, 2.0, 4.0}), 3);
  EXPECT_DOUBLE_EQ(custom[0], 0.25);
  EXPECT_DOUBLE_EQ(custom[1], 0.25);
  EXPECT_DOUBLE_EQ(custom[2], 0.5);

  EXPECT_THROW(baseline_rates(Baseline::Custom({1.0, 1.0}), 3), std::invalid_argument);
  EXPECT_THROW(baseline_rates(Baseline::Custom({1.0, -1.0, 1.0}), 3), std::invalid_argument);
  EXPECT_THROW(baseline_rates(Baseline::Custom({0.0, 0.0}), 2), std::invalid_argument);
  EXPECT_THROW(baseline_rates(Baseline::Uniform(), 0), std::invalid_argument);
}

TEST(BaselineRates, ZipfMandelbrot) {
  const std::vector<double> rates = baseline_rates(Baseline::ZipfMandelbrot(0.0, 2.0), 3);
  ASSERT_EQ(rates.size(), 3u);
  EXPECT_NEAR(rates[0], 36.0 / 49.0, 1e-15);
  EXPECT_NEAR(rates[1], 9.0 / 49.0, 1e-15);
  EXPECT_NEAR(rates[2], 4.0 / 49.0, 1e-15);

  const std::vector<double> shifted = baseline_rates(Baseline::ZipfMandelbrot(2.5, 1.5), 50);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < shifted.size(); ++i) {
    EXPECT_GT(shifted[i], shifted[i + 1]);
    sum += shifted[i];
  }
  EXPECT_NEAR(sum + shifted.back(), 1.0, 1e-12);

  EXPECT_THROW(baseline_rates(Baseline::ZipfMandelbrot(0.0, 1.0), 3), std::invalid_argument);
  EXPECT_THROW(baseline_rates(Baseline::ZipfMandelbrot(-1.0, 2.0), 3), std::invalid_argument);
}

TEST(PerturbedRates, HellingerCalibration) {
  const PerturbedRates spot = perturbed_rates(0.25, 0.01);
  EXPECT_DOUBLE_EQ(spot.q_plus, 0.36);
  EXPECT_DOUBLE_EQ(spot.q_minus, 0.16);

  for (const double p : {1e-6, 1e-4, 0.01, 0.3, 0.9}) {
    for (const double mu : {0.0, 1e-8, 1e-4, 0.04, 0.5}) {
      const PerturbedRates q = perturbed_rates(p, mu);
      const double up = std::sqrt(q.q_plus) - std::sqrt(p);
      EXPECT_NEAR(up * up, mu, 1e-12 + 1e-12 * mu);
      if (p >= mu) {
        const double down = std::sqrt(p) - std::sqrt(q.q_minus);
        EXPECT_NEAR(down * down, mu, 1e-12 + 1e-12 * mu);
      } else {
        EXPECT_DOUBLE_EQ(q.q_minus, 0.0);
      }
    }
  }
  EXPECT_DOUBLE_EQ(perturbed_rates(1e-6, 0.25).q_minus, 0.0);
}

TEST(SampleNull, DeterministicAndConsistent) {
  const RareWeakParams params = base_params(500, 2000.0, 0.5, 0.0);
  const CountTablePair a = sample_null(params, RandomStream{42});
  const CountTablePair b = sample_null(params, RandomStream{42});
  ASSERT_EQ(a.size(), 500u);
  EXPECT_EQ(a.x_counts, b.x_counts);
  EXPECT_EQ(a.y_counts, b.y_counts);
  for (const auto label : a.truth_labels) EXPECT_EQ(label, 0);

  const std::vector<double> rates = baseline_rates(params.baseline, params.N);
  const CountTablePair c = sample_null(params, rates, RandomStream{42});
  EXPECT_EQ(a.x_counts, c.x_counts);
  EXPECT_EQ(a.y_counts, c.y_counts);

  const CountTablePair other = sample_null(params, RandomStream{43});
  EXPECT_NE(a.x_counts, other.x_counts);
}

TEST(SampleNull, PoissonMomentsMatchRates) {
  RareWeakParams params = base_params(4000, 200000.0, 0.5, 0.0);
  params.n_y = 100000.0;
  const CountTablePair tables = sample_null(params, RandomStream{7});
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    mean_x += static_cast<double>(tables.x_counts[i]);
    mean_y += static_cast<double>(tables.y_counts[i]);
  }
  mean_x /= 4000.0;
  mean_y /= 4000.0;
  double var_x = 0.0;
  for (const auto x : tables.x_counts) {
    var_x += (static_cast<double>(x) - mean_x) * (static_cast<double>(x) - mean_x);
  }
  var_x /= 3999.0;
  EXPECT_NEAR(mean_x, 50.0, 8.0 * std::sqrt(50.0 / 4000.0));
  EXPECT_NEAR(mean_y, 25.0, 8.0 * std::sqrt(25.0 / 4000.0));
  EXPECT_NEAR(var_x, 50.0, 8.0 * std::sqrt((2.0 * 50.0 * 50.0 + 50.0) / 4000.0));
}

TEST(SampleAlt, LabelFrequenciesMatchEpsilon) {
  const RareWeakParams params = base_params(10000, 398107.0, 0.5, 2.0);
  const CountTablePair tables = sample_alt(params, RandomStream{11});
  std::size_t plus = 0;
  std::size_t minus = 0;
  for (const auto label : tables.truth_labels) {
    if (label == 1) ++plus;
    if (label == -1) ++minus;
  }
  // epsilon = 0.01: about 100 perturbed categories, split evenly in sign.
  EXPECT_NEAR(static_cast<double>(plus + minus), 100.0, 30.0);
  EXPECT_NEAR(static_cast<double>(plus), 50.0, 25.0);
  EXPECT_NEAR(static_cast<double>(minus), 50.0, 25.0);
}

TEST(SampleAlt, SharesXDrawsWithNullAndShiftsLabeledY) {
  const RareWeakParams params = base_params(10000, 398107.0, 0.5, 2.0);
  const CountTablePair alt = sample_alt(params, RandomStream{101});
  const CountTablePair null_tables = sample_null(params, RandomStream{101});
  // X is drawn first from the same per-category substream in both branches.
  EXPECT_EQ(alt.x_counts, null_tables.x_counts);

  const double base_rate = 398107.0 * 1e-4;
  const PerturbedRates q = perturbed_rates(1e-4, params.mu());
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  double mean_zero = 0.0;
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t n_zero = 0;
  for (std::size_t i = 0; i < alt.size(); ++i) {
    const double y = static_cast<double>(alt.y_counts[i]);
    if (alt.truth_labels[i] == 1) {
      mean_plus += y;
      ++n_plus;
    } else if (alt.truth_labels[i] == -1) {
      mean_minus += y;
      ++n_minus;
    } else {
      mean_zero += y;
      ++n_zero;
    }
  }
  ASSERT_GT(n_plus, 20u);
  ASSERT_GT(n_minus, 20u);
  mean_plus /= static_cast<double>(n_plus);
  mean_minus /= static_cast<double>(n_minus);
  mean_zero /= static_cast<double>(n_zero);

  const double rate_plus = 398107.0 * q.q_plus;
  const double rate_minus = 398107.0 * q.q_minus;
  ASSERT_GT(rate_plus, base_rate * 1.5);
  ASSERT_LT(rate_minus, base_rate * 0.5);
  EXPECT_NEAR(mean_plus, rate_plus, 8.0 * std::sqrt(rate_plus / 20.0));
  EXPECT_NEAR(mean_minus, rate_minus, 8.0 * std::sqrt((rate_minus + 1.0) / 20.0));
  EXPECT_NEAR(mean_zero, base_rate, 8.0 * std::sqrt(base_rate / 9000.0));
}

TEST(SampleAlt, RatesOverloadMatches) {
  const RareWeakParams params = base_params(300, 5000.0, 0.6, 1.5);
  const std::vector<double> rates = baseline_rates(params.baseline, params.N);
  const CountTablePair a = sample_alt(params, RandomStream{9});
  const CountTablePair b = sample_alt(params, rates, RandomStream{9});
  EXPECT_EQ(a.x_counts, b.x_counts);
  EXPECT_EQ(a.y_counts, b.y_counts);
  EXPECT_EQ(a.truth_labels, b.truth_labels);
}

TEST(RegimeDiagnostic, RatiosAgainstLogN) {
  const RareWeakParams high = base_params(10000, std::pow(10000.0, 1.4), 0.5, 1.0);
  const RegimeDiagnostic high_diag = regime_diagnostic(high);
  const double expected = std::pow(10000.0, 1.4) / (10000.0 * std::log(10000.0));
  EXPECT_NEAR(high_diag.min_ratio, expected, 1e-12 * expected);
  EXPECT_NEAR(high_diag.max_ratio, expected, 1e-12 * expected);
  EXPECT_GT(high_diag.min_ratio, 1.0);

  const RareWeakParams low = base_params(10000, std::pow(10000.0, 0.8), 0.5, 1.0);
  EXPECT_LT(regime_diagnostic(low).max_ratio, 0.2);

  RareWeakParams skewed = base_params(3, 100.0, 0.5, 1.0);
  skewed.n_y = 90.0;
  skewed.baseline = Baseline::ZipfMandelbrot(0.0, 2.0);
  const RegimeDiagnostic diag = regime_diagnostic(skewed);
  EXPECT_NEAR(diag.min_ratio, 90.0 * (4.0 / 49.0) / std::log(3.0), 1e-12);
  EXPECT_NEAR(diag.max_ratio, 90.0 * (36.0 / 49.0) / std::log(3.0), 1e-12);
}

TEST(RegimeLink, HighCountPValuesMatchStabilizedNormal) {
  // With per-category counts far above log(N), the exact allocation P-value
  // and the variance-stabilized normal P-value agree closely.
  const std::uint64_t n = 10000;
  for (const std::uint64_t delta : {50ull, 100ull, 150ull}) {
    const std::uint64_t x = n / 2 + delta;
    const std::uint64_t y = n / 2 - delta;
    const double exact = exact_binom_pvalue({x, n - x}, 0.5).value;
    const double stabilized =
        normal_two_sample_pvalue(2.0 * std::sqrt(static_cast<double>(x)),
                                 2.0 * std::sqrt(static_cast<double>(y)))
            .value;
    EXPECT_NEAR(exact, stabilized, 0.05 * exact) << "delta=" << delta;
  }
}

TEST(SampleNormalPair, NullMomentsAndDeterminism) {
  const RareWeakParams params = base_params(10000, 398107.0, 0.5, 2.0);
  const RealTablePair a = sample_normal_pair(params, Hypothesis::null, RandomStream{21});
  const RealTablePair b = sample_normal_pair(params, Hypothesis::null, RandomStream{21});
  ASSERT_EQ(a.size(), 10000u);
  EXPECT_EQ(a.x_values, b.x_values);
  EXPECT_EQ(a.y_values, b.y_values);

  const double nu = 2.0 * std::sqrt(398107.0 * 1e-4);
  double mean_centered = 0.0;
  double var_diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_centered += a.x_values[i] - nu;
    var_diff += (a.y_values[i] - a.x_values[i]) * (a.y_values[i] - a.x_values[i]);
  }
  mean_centered /= 10000.0;
  var_diff /= 10000.0;
  EXPECT_NEAR(mean_centered, 0.0, 8.0 / std::sqrt(10000.0));
  EXPECT_NEAR(var_diff, 2.0, 8.0 * std::sqrt(2.0) * 2.0 / std::sqrt(10000.0));
  for (const auto label : a.truth_labels) EXPECT_EQ(label, 0);
}

TEST(SampleNormalPair, AltShiftsLabeledMeans) {
  const RareWeakParams params = base_params(10000, 398107.0, 0.5, 2.0);
  const RealTablePair alt = sample_normal_pair(params, Hypothesis::alt, RandomStream{33});
  const double shift = std::sqrt(2.0 * 2.0 * std::log(10000.0));
  double mean_plus = 0.0;
  std::size_t n_plus = 0;
  double mean_minus = 0.0;
  std::size_t n_minus = 0;
  for (std::size_t i = 0; i < alt.size(); ++i) {
    if (alt.truth_labels[i] == 1) {
      mean_plus += alt.y_values[i] - alt.x_values[i];
      ++n_plus;
    } else if (alt.truth_labels[i] == -1) {
      mean_minus += alt.y_values[i] - alt.x_values[i];
      ++n_minus;
    }
  }
  ASSERT_GT(n_plus, 20u);
  ASSERT_GT(n_minus, 20u);
  mean_plus /= static_cast<double>(n_plus);
  mean_minus /= static_cast<double>(n_minus);
  EXPECT_NEAR(mean_plus, shift, 8.0 * std::sqrt(2.0 / 20.0));
  EXPECT_NEAR(mean_minus, -shift, 8.0 * std::sqrt(2.0 / 20.0));
}

TEST(SampleNormalPair, RequiresSharedSampleSize) {
  RareWeakParams params = base_params(100, 1000.0, 0.5, 1.0);
  params.n_y = 999.0;
  EXPECT_THROW(sample_normal_pair(params, Hypothesis::null, RandomStream{1}),
               std::invalid_argument);
}

}  // namespace
}  // namespace hicrit
