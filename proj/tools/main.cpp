#include <cstdint>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hicrit/io.hpp"
#include "hicrit/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Higher Criticism comparison of frequency tables"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hicrit::kVersion);

  hicrit::cli::GlobalOptions global;
  std::uint64_t seed_raw = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_raw, "master seed (overrides the config file)");
  app.add_option("--out", global.out, "output file, or directory for simulate (default stdout)");
  app.add_option("--format", global.format, "compare report format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--workers", global.workers, "simulation worker threads (0 = all cores)");

  hicrit::cli::CompareOptions compare_options;
  CLI::App* compare = app.add_subcommand("compare", "Test two frequency table files");
  compare->fallthrough();
  compare->add_option("file_x", compare_options.file_x, "first table file")->required();
  compare->add_option("file_y", compare_options.file_y, "second table file")->required();
  compare->add_option("--statistic", compare_options.statistic, "headline statistic")
      ->check(CLI::IsMember({"hc", "minp"}));
  compare->add_option("--gamma0", compare_options.gamma0, "HC search fraction (default 0.1)");
  compare->add_option("--pvalue-mode", compare_options.pvalue_mode, "per-category P-value kind")
      ->check(CLI::IsMember({"exact", "randomized", "normal"}));
  compare->add_option("--pprime", compare_options.pprime,
                      "allocation probability, or 'auto' to estimate from the totals");
  compare->add_option("--top-k", compare_options.top_k,
                      "categories to list (default: the HC-selected set)");

  hicrit::cli::CurveOptions curve_options;
  CLI::App* curve = app.add_subcommand("curve", "Tabulate a phase-transition curve as CSV");
  curve->fallthrough();
  curve->add_option("curve_id", curve_options.curve_id, "which curve")
      ->required()
      ->check(CLI::IsMember({"high", "low", "bonf-high", "bonf-low", "one-sample"}));
  curve->add_option("--from", curve_options.from, "first beta (default 0.5)");
  curve->add_option("--to", curve_options.to, "last beta (default 1)");
  curve->add_option("--step", curve_options.step, "beta step (default 0.01)");

  hicrit::cli::SimulateOptions simulate_options;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a Monte Carlo power grid");
  simulate->fallthrough();
  simulate->add_option("config", simulate_options.config_path, "key-value config file")
      ->required();

  hicrit::cli::PhaseFitOptions phase_fit_options;
  CLI::App* phase_fit =
      app.add_subcommand("phase-fit", "Fit per-beta transition points to a power grid CSV");
  phase_fit->fallthrough();
  phase_fit->add_option("grid", phase_fit_options.grid_path, "power grid CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }
  if (seed_opt->count() > 0) global.seed = seed_raw;

  try {
    if (compare->parsed()) return hicrit::cli::cmd_compare(compare_options, global);
    if (curve->parsed()) return hicrit::cli::cmd_curve(curve_options, global);
    if (simulate->parsed()) return hicrit::cli::cmd_simulate(simulate_options, global);
    if (phase_fit->parsed()) return hicrit::cli::cmd_phase_fit(phase_fit_options, global);
  } catch (const hicrit::IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const hicrit::ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 4;
  } catch (const std::domain_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 5;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 5;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
