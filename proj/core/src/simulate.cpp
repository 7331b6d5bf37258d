#include "hicrit/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>

#include "hicrit/specfun.hpp"

namespace hicrit {
namespace {

constexpr double kMinPValue = std::numeric_limits<double>::min();

double clamp_unit(double v) {
  if (v < kMinPValue) return kMinPValue;
  if (v > 1.0) return 1.0;
  return v;
}

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Memoized exact P-value parts for one fixed allocation probability. Pairs
// with n = x + y up to the flat limit live in a triangular array indexed
// n(n+1)/2 + x (a NaN marks an unfilled slot); larger n falls back to a
// hash map. Each worker owns one instance, so no locking is needed.
class PValueCache {
 public:
  explicit PValueCache(double pprime)
      : pprime_(pprime),
        flat_((kFlatLimit + 1) * (kFlatLimit + 2) / 2,
              ExactPValueParts{std::numeric_limits<double>::quiet_NaN(), 0.0}) {}

  ExactPValueParts parts(CountPair pair) {
    const std::uint64_t n = pair.x + pair.y;
    if (n <= kFlatLimit) {
      ExactPValueParts& slot = flat_[n * (n + 1) / 2 + pair.x];
      if (std::isnan(slot.pvalue)) slot = exact_binom_pvalue_parts(pair, pprime_);
      return slot;
    }
    if ((n >> 32) == 0) {
      const std::uint64_t key = (n << 32) | pair.x;
      const auto it = map_.find(key);
      if (it != map_.end()) return it->second;
      const ExactPValueParts fresh = exact_binom_pvalue_parts(pair, pprime_);
      map_.emplace(key, fresh);
      return fresh;
    }
    return exact_binom_pvalue_parts(pair, pprime_);
  }

 private:
  static constexpr std::uint64_t kFlatLimit = 1200;

  double pprime_;
  std::vector<ExactPValueParts> flat_;
  std::unordered_map<std::uint64_t, ExactPValueParts> map_;
};

// Work items are claimed through an atomic counter, results land in by-index
// slots, and all randomness is derived by item index, so every worker count
// and schedule produces identical output.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i, std::size_t{0});
    return;
  }
  std::atomic<std::size_t> next{0};
  const auto drain = [&](std::size_t worker_id) {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      fn(i, worker_id);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain, static_cast<std::size_t>(w));
  drain(0);
  for (std::thread& t : pool) t.join();
}

double evaluate_statistic(const SimConfig& config, const PValueVector& pvalues) {
  if (config.statistic == StatisticKind::hc) return hc_statistic(pvalues, config.hc).value;
  return min_p_statistic(pvalues).value;
}

double one_replicate(const SimConfig& config, const RareWeakParams& params,
                     const std::vector<double>& rates, Hypothesis hypothesis,
                     const RandomStream& rep_stream, PValueCache* cache) {
  const RandomStream table_rng = rep_stream.derive(0);
  if (config.model == ModelKind::normal) {
    return evaluate_statistic(
        config, pvalue_vector(sample_normal_pair(params, rates, hypothesis, table_rng)));
  }
  const CountTablePair tables = hypothesis == Hypothesis::null
                                    ? sample_null(params, rates, table_rng)
                                    : sample_alt(params, rates, table_rng);
  const RandomStream pvalue_rng = rep_stream.derive(1);
  PValueVector pvalues;
  pvalues.kind = config.pvalue_mode;
  pvalues.values.resize(tables.size());
  for (std::size_t i = 0; i < pvalues.values.size(); ++i) {
    const ExactPValueParts parts =
        cache->parts(CountPair{tables.x_counts[i], tables.y_counts[i]});
    if (config.pvalue_mode == PValueKind::exact) {
      pvalues.values[i] = parts.pvalue;
    } else {
      // Same arithmetic as randomized_pvalue(), fed by the same per-category
      // substream, so the cached path is bit-identical to the uncached one.
      const double u = pvalue_rng.derive(i).next_double();
      pvalues.values[i] = clamp_unit(parts.pvalue - (1.0 - u) * parts.atom);
    }
  }
  return evaluate_statistic(config, pvalues);
}

std::vector<double> run_batch(const SimConfig& config, const RareWeakParams& params,
                              const std::vector<double>& rates, Hypothesis hypothesis,
                              const RandomStream& cell_stream, std::vector<PValueCache>& caches) {
  std::vector<double> stats(config.replicates);
  parallel_for(config.replicates, config.workers, [&](std::size_t rep, std::size_t worker) {
    PValueCache* cache = caches.empty() ? nullptr : &caches[worker];
    stats[rep] = one_replicate(config, params, rates, hypothesis, cell_stream.derive(rep), cache);
  });
  return stats;
}

std::vector<PValueCache> make_caches(const SimConfig& config) {
  std::vector<PValueCache> caches;
  if (config.model == ModelKind::poisson) {
    const double pprime = config.params.n_x / (config.params.n_x + config.params.n_y);
    const unsigned workers = resolve_workers(config.workers);
    caches.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) caches.emplace_back(pprime);
  }
  return caches;
}

RareWeakParams null_params(const SimConfig& config) {
  RareWeakParams params = config.params;
  params.beta = 0.5;  // unread by the null sampler; keeps validate() satisfied
  params.r = 0.0;
  return params;
}

bool reject_above(const SimConfig& config) { return config.statistic == StatisticKind::hc; }

PowerCell cell_power(const SimConfig& config, const std::vector<double>& rates,
                     std::vector<PValueCache>& caches, const RandomStream& master,
                     std::size_t beta_idx, std::size_t r_idx, double critical_value) {
  RareWeakParams params = config.params;
  params.beta = config.beta_grid[beta_idx];
  params.r = config.r_grid[r_idx];
  const RandomStream cell_stream = master.derive(1).derive(beta_idx).derive(r_idx);
  const std::vector<double> stats =
      run_batch(config, params, rates, Hypothesis::alt, cell_stream, caches);
  std::size_t rejections = 0;
  if (reject_above(config)) {
    for (double t : stats) rejections += t > critical_value ? 1 : 0;
  } else {
    for (double t : stats) rejections += t < critical_value ? 1 : 0;
  }
  PowerCell out;
  out.beta = params.beta;
  out.r = params.r;
  out.rejections = rejections;
  out.power = static_cast<double>(rejections) / static_cast<double>(config.replicates);
  out.substantial = is_substantial(rejections, config.replicates, config.alpha, config.delta);
  return out;
}

}  // namespace

void SimConfig::validate() const {
  RareWeakParams probe = params;
  probe.beta = 0.5;
  probe.r = 0.0;
  probe.validate();
  if (beta_grid.empty() || r_grid.empty()) {
    throw std::invalid_argument("SimConfig: beta_grid and r_grid must be nonempty");
  }
  for (double b : beta_grid) {
    if (!(b > 0.0 && b < 1.0)) {
      throw std::invalid_argument("SimConfig: beta grid values must be in (0, 1)");
    }
  }
  for (double r : r_grid) {
    if (!(r >= 0.0)) throw std::invalid_argument("SimConfig: r grid values must be >= 0");
  }
  if (replicates < 1) throw std::invalid_argument("SimConfig: replicates must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("SimConfig: alpha must be in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("SimConfig: delta must be in (0, 1)");
  }
  if (!(hc.gamma0 > 0.0 && hc.gamma0 < 1.0)) {
    throw std::invalid_argument("SimConfig: gamma0 must be in (0, 1)");
  }
  if (model == ModelKind::poisson) {
    if (pvalue_mode == PValueKind::normal) {
      throw std::invalid_argument("SimConfig: the poisson model takes exact or randomized P-values");
    }
  } else if (params.n_x != params.n_y) {
    throw std::invalid_argument("SimConfig: the normal model requires n_x == n_y");
  }
}

double null_critical_value(const SimConfig& config) {
  config.validate();
  const std::vector<double> rates = baseline_rates(config.params.baseline, config.params.N);
  std::vector<PValueCache> caches = make_caches(config);
  const RandomStream cell_stream = RandomStream{config.master_seed}.derive(0).derive(0).derive(0);
  std::vector<double> stats =
      run_batch(config, null_params(config), rates, Hypothesis::null, cell_stream, caches);
  return detail::oriented_critical_value(std::move(stats), config.alpha, reject_above(config));
}

PowerCell power_at(const SimConfig& config, std::size_t beta_idx, std::size_t r_idx,
                   double critical_value) {
  config.validate();
  if (beta_idx >= config.beta_grid.size() || r_idx >= config.r_grid.size()) {
    throw std::invalid_argument("power_at: grid index out of range");
  }
  const std::vector<double> rates = baseline_rates(config.params.baseline, config.params.N);
  std::vector<PValueCache> caches = make_caches(config);
  return cell_power(config, rates, caches, RandomStream{config.master_seed}, beta_idx, r_idx,
                    critical_value);
}

bool is_substantial(std::size_t rejections, std::size_t replicates, double alpha, double delta) {
  if (replicates < 1) throw std::invalid_argument("is_substantial: replicates must be >= 1");
  if (rejections > replicates) {
    throw std::invalid_argument("is_substantial: rejections exceed replicates");
  }
  if (!(alpha > 0.0 && alpha < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("is_substantial: alpha and delta must be in (0, 1)");
  }
  if (rejections == 0) return false;
  return binom_tail(replicates, alpha, rejections, Tail::upper).prob() <= delta;
}

LogisticFit fit_logistic(const std::vector<LabeledPoint>& points) {
  if (points.empty()) throw std::invalid_argument("fit_logistic: empty input");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();

  LogisticFit fit;
  bool has0 = false;
  bool has1 = false;
  double min0 = inf, max0 = -inf, min1 = inf, max1 = -inf;
  for (const LabeledPoint& p : points) {
    if (p.flag) {
      has1 = true;
      min1 = std::min(min1, p.r);
      max1 = std::max(max1, p.r);
    } else {
      has0 = true;
      min0 = std::min(min0, p.r);
      max0 = std::max(max0, p.r);
    }
  }
  if (!has0 || !has1) {
    fit.degenerate = true;
    fit.theta0 = fit.theta1 = fit.r_star = nan;
    return fit;
  }
  // Perfect separation in either direction: the MLE diverges, but the
  // transition location is pinned to the gap between the classes.
  if (max0 < min1) {
    fit.separated = true;
    fit.theta0 = fit.theta1 = nan;
    fit.r_star = 0.5 * (max0 + min1);
    return fit;
  }
  if (max1 < min0) {
    fit.separated = true;
    fit.theta0 = fit.theta1 = nan;
    fit.r_star = 0.5 * (max1 + min0);
    return fit;
  }

  const auto log_lik = [&points](double a, double b) {
    double ll = 0.0;
    for (const LabeledPoint& p : points) {
      const double z = a + b * p.r;
      // softplus(z) = log(1 + e^z) computed on the stable side.
      const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      ll += p.flag ? z - softplus : -softplus;
    }
    return ll;
  };

  double t0 = 0.0;
  double t1 = 0.0;
  double ll = log_lik(t0, t1);
  for (int iter = 0; iter < 100; ++iter) {
    double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (const LabeledPoint& p : points) {
      const double z = t0 + t1 * p.r;
      const double mu = 1.0 / (1.0 + std::exp(-z));
      const double w = mu * (1.0 - mu);
      const double resid = (p.flag ? 1.0 : 0.0) - mu;
      g0 += resid;
      g1 += resid * p.r;
      h00 += w;
      h01 += w * p.r;
      h11 += w * p.r * p.r;
    }
    if (std::fabs(g0) <= 1e-8 && std::fabs(g1) <= 1e-8) break;
    const double det = h00 * h11 - h01 * h01;
    if (!(det > 0.0) || !std::isfinite(det)) break;
    const double d0 = (h11 * g0 - h01 * g1) / det;
    const double d1 = (h00 * g1 - h01 * g0) / det;
    // Damped Newton: halve the step until the likelihood stops dropping.
    double step = 1.0;
    double n0 = t0 + d0;
    double n1 = t1 + d1;
    double nll = log_lik(n0, n1);
    for (int halvings = 0; !(nll >= ll) && halvings < 60; ++halvings) {
      step *= 0.5;
      n0 = t0 + step * d0;
      n1 = t1 + step * d1;
      nll = log_lik(n0, n1);
    }
    t0 = n0;
    t1 = n1;
    ll = nll;
  }
  fit.theta0 = t0;
  fit.theta1 = t1;
  fit.r_star = -t0 / t1;
  return fit;
}

std::vector<PhaseFitRow> empirical_transition(const PowerGrid& grid) {
  std::vector<PhaseFitRow> rows;
  std::size_t i = 0;
  while (i < grid.cells.size()) {
    const double beta = grid.cells[i].beta;
    std::vector<LabeledPoint> points;
    while (i < grid.cells.size() && grid.cells[i].beta == beta) {
      points.push_back(LabeledPoint{grid.cells[i].r, grid.cells[i].substantial});
      ++i;
    }
    const LogisticFit fit = fit_logistic(points);
    rows.push_back(PhaseFitRow{beta, fit.theta0, fit.theta1, fit.r_star, fit.separated,
                               fit.degenerate});
  }
  return rows;
}

GridResult run_grid(const SimConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> rates = baseline_rates(config.params.baseline, config.params.N);
  std::vector<PValueCache> caches = make_caches(config);
  const RandomStream master{config.master_seed};

  GridResult result;
  {
    const RandomStream cell_stream = master.derive(0).derive(0).derive(0);
    std::vector<double> stats =
        run_batch(config, null_params(config), rates, Hypothesis::null, cell_stream, caches);
    result.grid.critical_value =
        detail::oriented_critical_value(std::move(stats), config.alpha, reject_above(config));
  }
  result.grid.cells.reserve(config.beta_grid.size() * config.r_grid.size());
  for (std::size_t bi = 0; bi < config.beta_grid.size(); ++bi) {
    for (std::size_t ri = 0; ri < config.r_grid.size(); ++ri) {
      result.grid.cells.push_back(
          cell_power(config, rates, caches, master, bi, ri, result.grid.critical_value));
    }
  }
  result.transition = empirical_transition(result.grid);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace detail {

double oriented_critical_value(std::vector<double> stats, double alpha, bool reject_above) {
  if (stats.empty()) throw std::invalid_argument("oriented_critical_value: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("oriented_critical_value: alpha must be in (0, 1)");
  }
  std::sort(stats.begin(), stats.end());
  // ceil((1 - alpha) * M) with a -1e-9 nudge: products that are integers in
  // exact arithmetic (0.95 * 1000) must not bump to the next rank through
  // binary rounding.
  const double m = static_cast<double>(stats.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * m - 1e-9));
  if (rank < 1) rank = 1;
  if (rank > stats.size()) rank = stats.size();
  if (!reject_above) rank = stats.size() - rank + 1;
  return stats[rank - 1];
}

}  // namespace detail
}  // namespace hicrit
