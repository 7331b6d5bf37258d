#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hicrit/hc.hpp"
#include "hicrit/io.hpp"
#include "hicrit/pvalues.hpp"
#include "hicrit/simulate.hpp"
#include "hicrit/theory.hpp"
#include "hicrit/version.hpp"
#include "json.hpp"

namespace hicrit::cli {
namespace {

using nlohmann::ordered_json;

bool parse_double_arg(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

void emit(const GlobalOptions& global, const std::string& content) {
  if (global.out.empty()) {
    std::cout << content;
  } else {
    write_text_file(global.out, content);
  }
}

// null when the estimate is undefined (all counts zero).
ordered_json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

}  // namespace

int cmd_compare(const CompareOptions& options, const GlobalOptions& global) {
  PValueKind mode = PValueKind::exact;
  if (options.pvalue_mode == "randomized") {
    mode = PValueKind::randomized;
  } else if (options.pvalue_mode == "normal") {
    mode = PValueKind::normal;
  }

  std::optional<double> pprime;  // nullopt = estimate from the tables
  if (options.pprime != "auto") {
    double v = 0.0;
    if (!parse_double_arg(options.pprime, v) || !(v > 0.0 && v < 1.0)) {
      std::cerr << "error: --pprime expects 'auto' or a probability in (0, 1), got '"
                << options.pprime << "'\n";
      return 2;
    }
    pprime = v;
  }

  const TableData table_x = read_table_file(options.file_x);
  const TableData table_y = read_table_file(options.file_y);
  const AlignedTables aligned = align_union(table_x, table_y);
  if (aligned.names.empty()) {
    throw std::invalid_argument("empty category union: both input tables are empty");
  }

  double pprime_estimate = std::numeric_limits<double>::quiet_NaN();
  try {
    pprime_estimate = estimate_allocation_prob(aligned.tables);
  } catch (const std::invalid_argument&) {
    // All counts zero: the estimate is undefined but the report can proceed
    // when pprime is fixed.
  }

  const RandomStream rng{global.seed.value_or(0)};
  const PValueVector pvalues = pvalue_vector(aligned.tables, mode, pprime, rng);
  const HCResult hc = hc_statistic(pvalues, HCConfig{options.gamma0});
  const PValue min_p = min_p_statistic(pvalues);

  // Categories ranked by evidence; ties keep input order.
  std::vector<std::size_t> order(pvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&pvalues](std::size_t a, std::size_t b) {
    return pvalues.values[a] < pvalues.values[b];
  });
  std::size_t top_k = options.top_k > 0 ? options.top_k : hc.argmax_index;
  top_k = std::min(top_k, order.size());

  const double pprime_used = pprime.has_value() ? *pprime : pprime_estimate;

  if (global.format == "csv") {
    std::string csv = "category,x,y,pvalue\n";
    for (std::size_t i = 0; i < aligned.names.size(); ++i) {
      csv += aligned.names[i];
      csv += ',';
      csv += std::to_string(aligned.tables.x_counts[i]);
      csv += ',';
      csv += std::to_string(aligned.tables.y_counts[i]);
      csv += ',';
      csv += format_double(pvalues.values[i]);
      csv += '\n';
    }
    emit(global, csv);
    return 0;
  }

  if (global.format == "json") {
    ordered_json report;
    report["command"] = "compare";
    report["version"] = kVersion;
    report["categories"] = aligned.names.size();
    report["statistic"] = options.statistic;
    report["pvalue_mode"] = options.pvalue_mode;
    report["pprime"] = json_or_null(pprime_used);
    report["pprime_source"] = pprime.has_value() ? "fixed" : "auto";
    report["pprime_estimate"] = json_or_null(pprime_estimate);
    report["hc"] = ordered_json{{"value", hc.value},
                                {"argmax_rank", hc.argmax_index},
                                {"threshold_pvalue", hc.threshold_pvalue},
                                {"degenerate", hc.degenerate}};
    report["min_p"] = min_p.value;
    ordered_json top = ordered_json::array();
    for (std::size_t j = 0; j < top_k; ++j) {
      const std::size_t i = order[j];
      top.push_back(ordered_json{{"category", aligned.names[i]},
                                 {"x", aligned.tables.x_counts[i]},
                                 {"y", aligned.tables.y_counts[i]},
                                 {"pvalue", pvalues.values[i]}});
    }
    report["top"] = top;
    emit(global, report.dump(2) + "\n");
    return 0;
  }

  std::string text;
  text += "categories: " + std::to_string(aligned.names.size()) + "\n";
  text += "statistic: " + options.statistic + "\n";
  text += "p-value mode: " + options.pvalue_mode + "\n";
  text += "p': " + format_double(pprime_used) +
          (pprime.has_value() ? " (fixed)" : " (estimated)") + "\n";
  text += "p' estimate from totals: " + format_double(pprime_estimate) + "\n";
  text += "HC value: " + format_double(hc.value) + "\n";
  text += "HC argmax rank: " + std::to_string(hc.argmax_index) + " of " +
          std::to_string(aligned.names.size()) + "\n";
  text += "HC threshold p-value: " + format_double(hc.threshold_pvalue) + "\n";
  text += "HC degenerate: " + yes_no(hc.degenerate) + "\n";
  text += "min-P: " + format_double(min_p.value) + "\n";
  text += "top categories (" + std::to_string(top_k) + "):\n";
  for (std::size_t j = 0; j < top_k; ++j) {
    const std::size_t i = order[j];
    text += "  " + std::to_string(j + 1) + ". " + aligned.names[i] +
            "  x=" + std::to_string(aligned.tables.x_counts[i]) +
            "  y=" + std::to_string(aligned.tables.y_counts[i]) +
            "  p=" + format_double(pvalues.values[i]) + "\n";
  }
  emit(global, text);
  return 0;
}

int cmd_curve(const CurveOptions& options, const GlobalOptions& global) {
  if (options.to < options.from) {
    std::cerr << "error: --to is below --from\n";
    return 2;
  }
  if (!(options.step > 0.0)) {
    std::cerr << "error: --step must be > 0\n";
    return 2;
  }
  CurveId id = CurveId::high;
  if (options.curve_id == "low") {
    id = CurveId::low;
  } else if (options.curve_id == "bonf-high") {
    id = CurveId::bonf_high;
  } else if (options.curve_id == "bonf-low") {
    id = CurveId::bonf_low;
  } else if (options.curve_id == "one-sample") {
    id = CurveId::one_sample;
  }

  const std::size_t count =
      static_cast<std::size_t>((options.to - options.from) / options.step + 1e-9) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = options.from + static_cast<double>(i) * options.step;
  }
  emit(global, curve_csv(curve_table(id, grid)));
  return 0;
}

int cmd_simulate(const SimulateOptions& options, const GlobalOptions& global) {
  SimConfig config = parse_sim_config(read_text_file(options.config_path));
  if (global.seed.has_value()) config.master_seed = *global.seed;
  config.workers = global.workers;

  const GridResult result = run_grid(config);

  const std::string out_dir = global.out.empty() ? "." : global.out;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
  const std::string grid_path = out_dir + "/power_grid.csv";
  const std::string manifest_path = out_dir + "/manifest.json";
  write_text_file(grid_path, power_grid_csv(result.grid));

  ordered_json cfg;
  cfg["N"] = config.params.N;
  cfg["n_x"] = config.params.n_x;
  cfg["n_y"] = config.params.n_y;
  cfg["beta_grid"] = config.beta_grid;
  cfg["r_grid"] = config.r_grid;
  cfg["M"] = config.replicates;
  cfg["alpha"] = config.alpha;
  cfg["delta"] = config.delta;
  cfg["statistic"] = config.statistic == StatisticKind::hc ? "hc" : "minp";
  cfg["gamma0"] = config.hc.gamma0;
  cfg["pvalue_mode"] = config.model == ModelKind::normal
                           ? "normal"
                           : (config.pvalue_mode == PValueKind::exact ? "exact" : "randomized");
  cfg["model"] = config.model == ModelKind::poisson ? "poisson" : "normal";
  if (config.params.baseline.kind == Baseline::Kind::zipf_mandelbrot) {
    cfg["baseline"] = ordered_json{{"kind", "zipf"},
                                   {"shift", config.params.baseline.zipf_shift},
                                   {"exponent", config.params.baseline.zipf_exponent}};
  } else {
    cfg["baseline"] = "uniform";
  }
  cfg["seed"] = config.master_seed;

  ordered_json manifest;
  manifest["command"] = "simulate";
  manifest["version"] = kVersion;
  manifest["master_seed"] = config.master_seed;
  manifest["config"] = cfg;
  manifest["workers"] = config.workers;
  manifest["critical_value"] = result.grid.critical_value;
  manifest["wall_clock_seconds"] = result.wall_seconds;
  manifest["outputs"] = ordered_json::array({"power_grid.csv"});
  write_text_file(manifest_path, manifest.dump(2) + "\n");

  std::cout << "wrote " << grid_path << " (" << result.grid.cells.size() << " cells) and "
            << manifest_path << "\n";
  return 0;
}

int cmd_phase_fit(const PhaseFitOptions& options, const GlobalOptions& global) {
  const PowerGrid grid = parse_power_grid_csv(read_text_file(options.grid_path));
  emit(global, phase_fit_csv(empirical_transition(grid)));
  return 0;
}

}  // namespace hicrit::cli
