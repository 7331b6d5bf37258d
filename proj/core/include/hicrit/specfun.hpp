// Numerically stable special functions and distribution tails.
//
// Tail probabilities are carried in natural-log space (LogProb) and converted
// to linear scale only at API edges: the P-values built on top of these tails
// reach scales far below double underflow in intermediate products.

#pragma once

#include <cmath>
#include <cstdint>

#include "hicrit/rng.hpp"

namespace hicrit {

// Natural log of a probability. value <= 0; -infinity encodes probability 0.
struct LogProb {
  double value = 0.0;
  double prob() const { return std::exp(value); }
};

enum class Tail { lower, upper };

// log Pr(Bin(n, p) <= k) for Tail::lower, log Pr(Bin(n, p) >= k) for
// Tail::upper. The numerically smaller tail is summed directly (log-sum
// relative to the boundary term) for n <= 10^4; larger n switch to a
// regularized incomplete-beta continued fraction. Relative error of the
// probability is <= 1e-12 for n <= 10^6.
// Throws std::invalid_argument if p is outside (0, 1) or k > n.
LogProb binom_tail(std::uint64_t n, double p, std::uint64_t k, Tail side);

// Real negative branch W_-1: the solution y <= -1 of y*exp(y) = x for
// x in [-1/e, 0). Seeded by the branch-point series near -1/e and the
// log-asymptotic expansion near 0, refined by Halley iteration until
// |W*exp(W) - x| <= 1e-12 * |x|.
// Throws std::domain_error outside [-1/e, 0).
double lambert_w_m1(double x);

// Principal branch W_0 restricted to x in [-1/e, 0]: the solution y >= -1 of
// y*exp(y) = x. Same seeding and refinement scheme as lambert_w_m1.
// Throws std::domain_error outside [-1/e, 0].
double lambert_w0(double x);

// Poisson draw with the given rate. Sequential inversion below rate 10,
// transformed rejection (PTRS) above; valid for rates up to at least 1e7.
// rate 0 returns 0. Throws std::invalid_argument for negative rate.
std::uint64_t poisson_sample(double rate, RandomStream& rng);

// Chernoff exponent for a Poisson(lambda) tail: -lambda * h(x / lambda) with
// h(t) = t*log(t) - t + 1. Tail::upper requires x > lambda, Tail::lower
// requires 0 <= x < lambda; exp of the result bounds the exact tail from
// above. Throws std::invalid_argument on a side/argument mismatch.
LogProb poisson_chernoff_log_bound(double lambda, double x, Tail side);

// Pr(N(0,1) >= z). Computed through erfc; absolute error <= 1e-14.
double normal_sf(double z);

}  // namespace hicrit
