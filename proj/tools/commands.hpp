// Implementations behind the hicrit CLI subcommands. Each returns a process
// exit code: 0 success, 2 usage, 3 I/O, 4 config, 5 numeric domain (the
// latter three usually via exceptions mapped in main).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace hicrit::cli {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;  // overrides the config-file seed when set
  std::string out;                    // output file (or directory for simulate); empty = stdout
  std::string format = "text";       // compare report format: text | json | csv
  unsigned workers = 0;               // simulation worker threads; 0 = all cores
};

struct CompareOptions {
  std::string file_x;
  std::string file_y;
  std::string statistic = "hc";       // hc | minp (headline statistic in the report)
  double gamma0 = 0.1;
  std::string pvalue_mode = "exact";  // exact | randomized | normal
  std::string pprime = "0.5";         // probability, or "auto" to estimate from totals
  std::size_t top_k = 0;              // 0 = list the HC-selected set (up to the argmax rank)
};

struct CurveOptions {
  std::string curve_id;  // high | low | bonf-high | bonf-low | one-sample
  double from = 0.5;
  double to = 1.0;
  double step = 0.01;
};

struct SimulateOptions {
  std::string config_path;
};

struct PhaseFitOptions {
  std::string grid_path;
};

int cmd_compare(const CompareOptions& options, const GlobalOptions& global);
int cmd_curve(const CurveOptions& options, const GlobalOptions& global);
int cmd_simulate(const SimulateOptions& options, const GlobalOptions& global);
int cmd_phase_fit(const PhaseFitOptions& options, const GlobalOptions& global);

}  // namespace hicrit::cli
