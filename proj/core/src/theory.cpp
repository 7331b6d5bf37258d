#include "hicrit/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "hicrit/specfun.hpp"

namespace hicrit {
namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr double kSqrt2 = 1.41421356237309504880168872421;
constexpr double kInvE = 0.36787944117144232159552377016146;

void check_beta(double beta) {
  if (!(beta >= 0.5 && beta <= 1.0)) {
    throw std::domain_error("phase curves require beta in [1/2, 1]");
  }
}

}  // namespace

double rho_high(double beta) {
  check_beta(beta);
  if (beta < 0.75) return 2.0 * (beta - 0.5);
  const double s = 1.0 - std::sqrt(1.0 - beta);
  return 2.0 * (s * s);
}

double rho_bonf_high(double beta) {
  check_beta(beta);
  const double s = 1.0 - std::sqrt(1.0 - beta);
  return 2.0 * (s * s);
}

double rho_one_sample(double beta) {
  check_beta(beta);
  if (beta < 0.75) return beta - 0.5;
  const double s = 1.0 - std::sqrt(1.0 - beta);
  return s * s;
}

double rho_low_crossover() { return 0.5 + (kSqrt2 - 1.0) / (kSqrt2 * kLn2); }

double rho_bonf_low(double beta) {
  check_beta(beta);
  // Substituting u = r ln2 / 2 into alpha_star(low, 1, r) = 1 - beta gives
  // u - ln(u) = 1 + (1 - beta) ln2, whose u <= 1 root is -W0(-2^(beta-1)/e).
  // That root is the one pinned by the curve's endpoints r(beta0) =
  // sqrt(2)/ln2 and r(1) = 2/ln2 and is increasing in beta.
  const double arg = -std::exp2(beta - 1.0) * kInvE;
  const double u = -lambert_w0(arg);
  return 2.0 * u / kLn2;
}

double rho_low(double beta) {
  check_beta(beta);
  if (beta <= rho_low_crossover()) return 2.0 * (1.0 + kSqrt2) * (beta - 0.5);
  return rho_bonf_low(beta);
}

double rho_curve(CurveId id, double beta) {
  switch (id) {
    case CurveId::high: return rho_high(beta);
    case CurveId::low: return rho_low(beta);
    case CurveId::bonf_high: return rho_bonf_high(beta);
    case CurveId::bonf_low: return rho_bonf_low(beta);
    case CurveId::one_sample: return rho_one_sample(beta);
  }
  throw std::domain_error("rho_curve: unknown curve id");
}

double alpha_star(Regime regime, double q, double r) {
  if (!(q > 0.0) || !(r > 0.0)) {
    throw std::domain_error("alpha_star: q and r must be positive");
  }
  if (regime == Regime::high) {
    if (q <= r / 2.0) return 0.0;
    const double s = std::sqrt(q) - std::sqrt(r / 2.0);
    return s * s;
  }
  return q * (std::log(2.0 * q / (r * kLn2)) - 1.0) / kLn2 + r / 2.0;
}

double xi(Regime regime, double q, double beta, double r) {
  return (q + 1.0) / 2.0 - beta - alpha_star(regime, q, r);
}

XiStar xi_star(Regime regime, double beta, double r) {
  if (!(r > 0.0)) throw std::domain_error("xi_star: r must be positive");
  XiStar out;
  if (regime == Regime::high) {
    if (r < 0.5) {
      out.q_star = 2.0 * r;
      out.value = (1.0 + r) / 2.0 - beta;
    } else if (r < 2.0) {
      out.q_star = 1.0;
      const double s = 1.0 - std::sqrt(r / 2.0);
      out.value = 1.0 - beta - s * s;
    } else {
      // q = 1 <= r/2: the alpha term is clamped to zero.
      out.q_star = 1.0;
      out.value = 1.0 - beta;
    }
    return out;
  }
  const double q_unclamped = r * kLn2 / kSqrt2;
  if (q_unclamped < 1.0) {
    out.q_star = q_unclamped;
    out.value = (kSqrt2 - 1.0) / 2.0 * r - beta + 0.5;
  } else {
    out.q_star = 1.0;
    out.value = -beta - r / 2.0 + (std::log(r) + 1.0 + std::log(kLn2)) / kLn2;
  }
  return out;
}

std::vector<CurvePoint> curve_table(CurveId id, const std::vector<double>& beta_grid) {
  std::vector<CurvePoint> rows;
  rows.reserve(beta_grid.size());
  for (double beta : beta_grid) rows.push_back(CurvePoint{beta, rho_curve(id, beta)});
  return rows;
}

}  // namespace hicrit
