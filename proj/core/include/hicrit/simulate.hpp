// Monte Carlo power maps over the (beta, r) phase plane.
//
// One run draws M null replicates to fix the critical value of the chosen
// statistic at level alpha, then M alternative replicates per grid cell to
// estimate power. A cell's rejection count is "substantial" when it is too
// large to be a level-alpha binomial fluke (upper tail probability <= delta).
// Per beta strip a logistic fit of the substantial flags against r places the
// empirical phase transition at r* = -theta0 / theta1.
//
// Reproducibility: every replicate owns the stream
//   master.derive(phase).derive(beta_idx).derive(r_idx).derive(rep)
// with phase 0 for the null run (beta_idx = r_idx = 0) and 1 for the
// alternative; rep_stream.derive(0) feeds the table sampler and
// rep_stream.derive(1) the randomized P-values. Results are therefore
// byte-identical under any worker count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hicrit/hc.hpp"
#include "hicrit/model.hpp"
#include "hicrit/pvalues.hpp"
#include "hicrit/rng.hpp"

namespace hicrit {

enum class StatisticKind { hc, min_p };
enum class ModelKind { poisson, normal };

struct SimConfig {
  RareWeakParams params;  // grid template; beta and r are overwritten per cell
  std::vector<double> beta_grid;
  std::vector<double> r_grid;
  std::size_t replicates = 1000;  // M, per cell and for the null run
  double alpha = 0.05;            // test level
  double delta = 0.05;            // substantial-power evidence threshold
  StatisticKind statistic = StatisticKind::hc;
  HCConfig hc;
  PValueKind pvalue_mode = PValueKind::exact;  // exact or randomized (poisson model)
  ModelKind model = ModelKind::poisson;
  std::uint64_t master_seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency, 1 = inline

  // Throws std::invalid_argument on any violated field invariant.
  void validate() const;
};

struct PowerCell {
  double beta = 0.0;
  double r = 0.0;
  double power = 0.0;
  std::size_t rejections = 0;
  bool substantial = false;
};

// Cells in row-major order: beta outer, r inner.
struct PowerGrid {
  std::vector<PowerCell> cells;
  double critical_value = 0.0;
};

struct LabeledPoint {
  double r = 0.0;
  bool flag = false;
};

struct LogisticFit {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double r_star = 0.0;      // -theta0 / theta1, or the gap midpoint when separated
  bool separated = false;   // perfect separation: thetas are NaN, r_star is exact
  bool degenerate = false;  // single-class input: no transition to locate
};

struct PhaseFitRow {
  double beta = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double r_star = 0.0;
  bool separated = false;
  bool degenerate = false;
};

struct GridResult {
  PowerGrid grid;
  std::vector<PhaseFitRow> transition;
  double wall_seconds = 0.0;
};

// Critical value of config.statistic from M null replicates.
double null_critical_value(const SimConfig& config);

// Power at one grid cell against the given critical value.
PowerCell power_at(const SimConfig& config, std::size_t beta_idx, std::size_t r_idx,
                   double critical_value);

// True when k rejections out of M cannot plausibly come from a level-alpha
// test: Pr(Bin(M, alpha) >= k) <= delta. k = 0 is never substantial.
bool is_substantial(std::size_t rejections, std::size_t replicates, double alpha, double delta);

// Maximum-likelihood logistic fit Pr(flag) = sigmoid(theta0 + theta1 * r) by
// damped Newton iteration. Perfectly separated inputs have no finite MLE;
// the fit then reports the midpoint of the gap between the classes instead.
// Throws std::invalid_argument on empty input.
LogisticFit fit_logistic(const std::vector<LabeledPoint>& points);

// One logistic fit per beta strip of the grid (cells grouped by equal beta
// in order), labeling each cell by its substantial flag.
std::vector<PhaseFitRow> empirical_transition(const PowerGrid& grid);

// Full pipeline: null critical value, every grid cell, per-strip fits.
GridResult run_grid(const SimConfig& config);

namespace detail {

// Critical value from a sample of null statistic values. reject_above true
// takes the ascending rank ceil((1 - alpha) * M) and rejects T > crit;
// false mirrors the rank for a statistic whose small values reject (T < crit).
double oriented_critical_value(std::vector<double> stats, double alpha, bool reject_above);

}  // namespace detail
}  // namespace hicrit
