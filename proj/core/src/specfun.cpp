#include "hicrit/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hicrit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvE = 0.36787944117144232159552377016146;  // 1/e

// n above which binom_tail switches from direct summation to the
// incomplete-beta continued fraction.
constexpr std::uint64_t kBinomSumLimit = 10000;

// Extended precision throughout: the log factorials reach ~n log n, so a
// double lgamma alone would leave ~1e-12 relative error in the tail at
// n = 2000. Long double keeps the whole pmf good to ~1e-15 relative.
double log_binom_pmf(double n, double k, double p) {
  const long double nl = n;
  const long double kl = k;
  const long double pl = p;
  return static_cast<double>(lgammal(nl + 1.0L) - lgammal(kl + 1.0L) - lgammal(nl - kl + 1.0L) +
                             kl * logl(pl) + (nl - kl) * log1pl(-pl));
}

// log Pr(Bin(n,p) <= k), valid for any k but efficient and accurate when the
// lower tail is the smaller one (k <= n*p). Terms are accumulated in linear
// space relative to the boundary term; for k below the mode every ratio is
// < 1, so the running product is monotone decreasing and cannot overflow.
double log_lower_sum(std::uint64_t n, double p, std::uint64_t k) {
  const double logb = log_binom_pmf(static_cast<double>(n), static_cast<double>(k), p);
  long double acc = 1.0L;
  long double prod = 1.0L;
  for (std::uint64_t j = k; j >= 1; --j) {
    // Pr(B = j-1) / Pr(B = j)
    prod *= (static_cast<long double>(j) * (1.0L - static_cast<long double>(p))) /
            (static_cast<long double>(n - j + 1) * static_cast<long double>(p));
    acc += prod;
    if (prod <= acc * 1e-21L) break;
  }
  return logb + static_cast<double>(logl(acc));
}

// log Pr(Bin(n,p) >= k); mirror of log_lower_sum, efficient for k >= n*p.
double log_upper_sum(std::uint64_t n, double p, std::uint64_t k) {
  const double logb = log_binom_pmf(static_cast<double>(n), static_cast<double>(k), p);
  long double acc = 1.0L;
  long double prod = 1.0L;
  for (std::uint64_t j = k; j < n; ++j) {
    // Pr(B = j+1) / Pr(B = j)
    prod *= (static_cast<long double>(n - j) * static_cast<long double>(p)) /
            (static_cast<long double>(j + 1) * (1.0L - static_cast<long double>(p)));
    acc += prod;
    if (prod <= acc * 1e-21L) break;
  }
  return logb + static_cast<double>(logl(acc));
}

// Continued fraction for the regularized incomplete beta I_x(a, b)
// (modified Lentz), convergent for x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("beta_cf: continued fraction did not converge");
}

// log I_x(a, b); recurses once through the symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
// when the direct fraction would converge slowly.
double log_reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return kNegInf;
  if (x >= 1.0) return 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double front = a * std::log(x) + b * std::log1p(-x) -
                         (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return front + std::log(beta_cf(a, b, x)) - std::log(a);
  }
  const double other = std::exp(log_reg_inc_beta(b, a, 1.0 - x));
  if (other >= 1.0) return kNegInf;
  return std::log1p(-other);
}

double log_lower_beta(std::uint64_t n, double p, std::uint64_t k) {
  // Pr(Bin(n,p) <= k) = I_{1-p}(n-k, k+1)
  return log_reg_inc_beta(static_cast<double>(n - k), static_cast<double>(k) + 1.0, 1.0 - p);
}

double log_upper_beta(std::uint64_t n, double p, std::uint64_t k) {
  // Pr(Bin(n,p) >= k) = I_p(k, n-k+1), k >= 1
  return log_reg_inc_beta(static_cast<double>(k), static_cast<double>(n - k) + 1.0, p);
}

double log1m_exp(double loga) {
  // log(1 - exp(loga)) for loga <= 0
  if (loga >= 0.0) return kNegInf;
  const double a = std::exp(loga);
  if (a >= 1.0) return kNegInf;
  return std::log1p(-a);
}

// Halley refinement of w*exp(w) = x on a single branch. The iteration is
// safeguarded only by the step-size test; both branches are monotone in w,
// so any seed on the correct side converges.
double halley_lambert(double w, double x) {
  for (int iter = 0; iter < 60; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double d1 = ew * (w + 1.0);
    const double denom = d1 - f * (w + 2.0) / (2.0 * (w + 1.0));
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::fabs(step) <= 1e-16 * std::fabs(w)) break;
  }
  return w;
}

}  // namespace

LogProb binom_tail(std::uint64_t n, double p, std::uint64_t k, Tail side) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("binom_tail: p must be in (0, 1)");
  }
  if (k > n) {
    throw std::invalid_argument("binom_tail: k must satisfy 0 <= k <= n");
  }
  if (n == 0) return LogProb{0.0};                       // both tails contain the single point 0
  if (side == Tail::lower && k == n) return LogProb{0.0};
  if (side == Tail::upper && k == 0) return LogProb{0.0};

  const bool use_sum = n <= kBinomSumLimit;
  const double mean = static_cast<double>(n) * p;
  if (side == Tail::lower) {
    if (static_cast<double>(k) <= mean) {
      return LogProb{use_sum ? log_lower_sum(n, p, k) : log_lower_beta(n, p, k)};
    }
    // complement of the (smaller) upper tail starting at k+1
    const double lu = use_sum ? log_upper_sum(n, p, k + 1) : log_upper_beta(n, p, k + 1);
    return LogProb{log1m_exp(lu)};
  }
  if (static_cast<double>(k) >= mean) {
    return LogProb{use_sum ? log_upper_sum(n, p, k) : log_upper_beta(n, p, k)};
  }
  const double ll = use_sum ? log_lower_sum(n, p, k - 1) : log_lower_beta(n, p, k - 1);
  return LogProb{log1m_exp(ll)};
}

double lambert_w_m1(double x) {
  if (!(x < 0.0) || x < -kInvE) {
    // Tolerate the branch point itself landing a rounding step below -1/e.
    if (x >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()) && x < 0.0) {
      return -1.0;
    }
    throw std::domain_error("lambert_w_m1: x must lie in [-1/e, 0)");
  }
  const double p2 = 2.0 * (1.0 + x / kInvE);  // 2*(1 + e*x) >= 0 on the domain
  if (p2 <= 0.0) return -1.0;

  double w;
  if (x > -0.27) {
    // log-asymptotic seed, accurate as x -> 0-
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else {
    // branch-point series in p = -sqrt(2*(1 + e*x))
    const double q = -std::sqrt(p2);
    w = -1.0 + q - q * q / 3.0 + (11.0 / 72.0) * q * q * q;
  }
  if (w > -1.0) w = -1.0 - 1e-9;
  return halley_lambert(w, x);
}

double lambert_w0(double x) {
  if (x > 0.0 || x < -kInvE) {
    if (x >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()) && x < 0.0) {
      return -1.0;
    }
    throw std::domain_error("lambert_w0: x must lie in [-1/e, 0]");
  }
  if (x == 0.0) return 0.0;
  const double p2 = 2.0 * (1.0 + x / kInvE);
  if (p2 <= 0.0) return -1.0;

  double w;
  if (x < -0.2) {
    // branch-point series in p = +sqrt(2*(1 + e*x))
    const double q = std::sqrt(p2);
    w = -1.0 + q - q * q / 3.0 + (11.0 / 72.0) * q * q * q;
  } else {
    w = x * (1.0 - x);  // two-term series around 0
  }
  if (w < -1.0) w = -1.0 + 1e-9;
  return halley_lambert(w, x);
}

std::uint64_t poisson_sample(double rate, RandomStream& rng) {
  if (rate < 0.0 || !std::isfinite(rate)) {
    throw std::invalid_argument("poisson_sample: rate must be finite and >= 0");
  }
  if (rate == 0.0) return 0;

  if (rate < 10.0) {
    // Sequential inversion; one uniform per draw.
    const double u = rng.next_double();
    double p = std::exp(-rate);
    double cum = p;
    std::uint64_t k = 0;
    while (u > cum && k < 1100) {  // Pr(K > 1100 | rate < 10) is below 1e-300
      ++k;
      p *= rate / static_cast<double>(k);
      cum += p;
    }
    return k;
  }

  // PTRS transformed rejection (Hoermann), valid for rate >= 10.
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * loglam - rate - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

LogProb poisson_chernoff_log_bound(double lambda, double x, Tail side) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("poisson_chernoff_log_bound: lambda must be positive");
  }
  if (side == Tail::upper && !(x > lambda)) {
    throw std::invalid_argument("poisson_chernoff_log_bound: upper tail requires x > lambda");
  }
  if (side == Tail::lower && !(x >= 0.0 && x < lambda)) {
    throw std::invalid_argument(
        "poisson_chernoff_log_bound: lower tail requires 0 <= x < lambda");
  }
  const double t = x / lambda;
  const double h = (t == 0.0) ? 1.0 : t * std::log(t) - t + 1.0;
  return LogProb{-lambda * h};
}

double normal_sf(double z) { return 0.5 * std::erfc(z / 1.41421356237309504880168872421); }

}  // namespace hicrit
