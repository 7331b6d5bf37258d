#include "hicrit/model.hpp"

#include <cmath>
#include <stdexcept>

#include "hicrit/specfun.hpp"

namespace hicrit {

double RareWeakParams::epsilon() const { return std::pow(static_cast<double>(N), -beta); }

double RareWeakParams::calibration_n() const { return n_x < n_y ? n_x : n_y; }

double RareWeakParams::mu() const {
  return r * std::log(static_cast<double>(N)) / (2.0 * calibration_n());
}

void RareWeakParams::validate() const {
  if (N < 1) throw std::invalid_argument("RareWeakParams: N must be >= 1");
  if (!(n_x >= 1.0) || !(n_y >= 1.0)) {
    throw std::invalid_argument("RareWeakParams: sample sizes must be >= 1");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("RareWeakParams: beta must be in (0, 1)");
  }
  if (!(r >= 0.0)) throw std::invalid_argument("RareWeakParams: r must be >= 0");
}

std::vector<double> baseline_rates(const Baseline& baseline, std::size_t N) {
  if (N == 0) throw std::invalid_argument("baseline_rates: N must be >= 1");
  std::vector<double> rates(N);
  switch (baseline.kind) {
    case Baseline::Kind::uniform: {
      const double p = 1.0 / static_cast<double>(N);
      for (double& v : rates) v = p;
      return rates;
    }
    case Baseline::Kind::zipf_mandelbrot: {
      if (!(baseline.zipf_exponent > 1.0)) {
        throw std::invalid_argument("baseline_rates: zipf exponent must be > 1");
      }
      if (!(baseline.zipf_shift > -1.0)) {
        throw std::invalid_argument("baseline_rates: zipf shift must be > -1");
      }
      double total = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        rates[i] = std::pow(static_cast<double>(i + 1) + baseline.zipf_shift,
                            -baseline.zipf_exponent);
        total += rates[i];
      }
      for (double& v : rates) v /= total;
      return rates;
    }
    case Baseline::Kind::custom: {
      if (baseline.custom_rates.size() != N) {
        throw std::invalid_argument("baseline_rates: custom rate vector length must equal N");
      }
      double total = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        if (!(baseline.custom_rates[i] >= 0.0)) {
          throw std::invalid_argument("baseline_rates: custom rates must be nonnegative");
        }
        total += baseline.custom_rates[i];
      }
      if (!(total > 0.0)) {
        throw std::invalid_argument("baseline_rates: custom rates must not all be zero");
      }
      for (std::size_t i = 0; i < N; ++i) rates[i] = baseline.custom_rates[i] / total;
      return rates;
    }
  }
  throw std::invalid_argument("baseline_rates: unknown baseline kind");
}

PerturbedRates perturbed_rates(double p, double mu) {
  if (!(p >= 0.0) || !(mu >= 0.0)) {
    throw std::invalid_argument("perturbed_rates: p and mu must be >= 0");
  }
  const double sp = std::sqrt(p);
  const double sm = std::sqrt(mu);
  const double up = sp + sm;
  const double dn = sp - sm > 0.0 ? sp - sm : 0.0;
  return PerturbedRates{up * up, dn * dn};
}

CountTablePair sample_null(const RareWeakParams& params, const std::vector<double>& rates,
                           const RandomStream& rng) {
  params.validate();
  if (rates.size() != params.N) {
    throw std::invalid_argument("sample_null: rates length must equal N");
  }
  CountTablePair out;
  out.x_counts.resize(params.N);
  out.y_counts.resize(params.N);
  out.truth_labels.assign(params.N, 0);
  for (std::size_t i = 0; i < params.N; ++i) {
    RandomStream sub = rng.derive(i);
    out.x_counts[i] = poisson_sample(params.n_x * rates[i], sub);
    out.y_counts[i] = poisson_sample(params.n_y * rates[i], sub);
  }
  return out;
}

CountTablePair sample_null(const RareWeakParams& params, const RandomStream& rng) {
  return sample_null(params, baseline_rates(params.baseline, params.N), rng);
}

CountTablePair sample_alt(const RareWeakParams& params, const std::vector<double>& rates,
                          const RandomStream& rng) {
  params.validate();
  if (rates.size() != params.N) {
    throw std::invalid_argument("sample_alt: rates length must equal N");
  }
  const double eps = params.epsilon();
  const double mu = params.mu();
  CountTablePair out;
  out.x_counts.resize(params.N);
  out.y_counts.resize(params.N);
  out.truth_labels.assign(params.N, 0);
  for (std::size_t i = 0; i < params.N; ++i) {
    RandomStream sub = rng.derive(i);
    out.x_counts[i] = poisson_sample(params.n_x * rates[i], sub);
    const double u = sub.next_double();
    double y_rate = rates[i];
    if (u < eps / 2.0) {
      y_rate = perturbed_rates(rates[i], mu).q_plus;
      out.truth_labels[i] = 1;
    } else if (u < eps) {
      y_rate = perturbed_rates(rates[i], mu).q_minus;
      out.truth_labels[i] = -1;
    }
    out.y_counts[i] = poisson_sample(params.n_y * y_rate, sub);
  }
  return out;
}

CountTablePair sample_alt(const RareWeakParams& params, const RandomStream& rng) {
  return sample_alt(params, baseline_rates(params.baseline, params.N), rng);
}

RegimeDiagnostic regime_diagnostic(const RareWeakParams& params) {
  params.validate();
  const std::vector<double> rates = baseline_rates(params.baseline, params.N);
  const double scale = params.calibration_n() / std::log(static_cast<double>(params.N));
  RegimeDiagnostic diag;
  diag.min_ratio = rates[0] * scale;
  diag.max_ratio = rates[0] * scale;
  for (double p : rates) {
    const double ratio = p * scale;
    if (ratio < diag.min_ratio) diag.min_ratio = ratio;
    if (ratio > diag.max_ratio) diag.max_ratio = ratio;
  }
  return diag;
}

RealTablePair sample_normal_pair(const RareWeakParams& params, const std::vector<double>& rates,
                                 Hypothesis hypothesis, const RandomStream& rng) {
  params.validate();
  if (params.n_x != params.n_y) {
    throw std::invalid_argument(
        "sample_normal_pair: the normal-means model shares one n; n_x must equal n_y");
  }
  if (rates.size() != params.N) {
    throw std::invalid_argument("sample_normal_pair: rates length must equal N");
  }
  const double eps = params.epsilon();
  const double shift = std::sqrt(2.0 * params.r * std::log(static_cast<double>(params.N)));
  RealTablePair out;
  out.x_values.resize(params.N);
  out.y_values.resize(params.N);
  out.truth_labels.assign(params.N, 0);
  for (std::size_t i = 0; i < params.N; ++i) {
    RandomStream sub = rng.derive(i);
    const double nu = 2.0 * std::sqrt(params.n_x * rates[i]);
    out.x_values[i] = nu + sub.next_normal();
    double mean = nu;
    if (hypothesis == Hypothesis::alt) {
      const double u = sub.next_double();
      if (u < eps / 2.0) {
        mean = nu + shift;
        out.truth_labels[i] = 1;
      } else if (u < eps) {
        mean = nu - shift;
        out.truth_labels[i] = -1;
      }
    }
    out.y_values[i] = mean + sub.next_normal();
  }
  return out;
}

RealTablePair sample_normal_pair(const RareWeakParams& params, Hypothesis hypothesis,
                                 const RandomStream& rng) {
  return sample_normal_pair(params, baseline_rates(params.baseline, params.N), hypothesis, rng);
}

}  // namespace hicrit
