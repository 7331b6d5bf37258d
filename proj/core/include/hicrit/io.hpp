// File formats: two-column frequency tables, flat key-value simulation
// configs, and the CSV schemas shared by the tools.
//
// All CSV output uses '.' as the decimal separator, LF line endings, UTF-8,
// and a header row. Doubles are written in shortest round-trip form, so a
// parse of the output reproduces every value bit for bit.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hicrit/simulate.hpp"
#include "hicrit/tables.hpp"
#include "hicrit/theory.hpp"

namespace hicrit {

// A file could not be read, written, or parsed. Parse messages carry
// "origin:line:" context.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A simulation config is malformed. Messages name the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One frequency table: parallel category names and counts.
struct TableData {
  std::vector<std::string> names;
  std::vector<std::uint64_t> counts;
};

// Parses "category<delim>count" lines. The delimiter is auto-detected from
// the first data line (tab when present, else comma) and the split happens
// at its last occurrence, so comma-delimited categories may themselves
// contain commas. Blank lines are skipped; there is no comment syntax (a
// leading '#' is part of the category). Category keys must be unique.
// origin prefixes error messages, which carry 1-based line numbers.
TableData parse_table(const std::string& text, const std::string& origin);

// parse_table over the file's contents; unreadable file throws IoError.
TableData read_table_file(const std::string& path);

// Two tables aligned on the union of their categories, zero-filling counts
// for categories missing from one side. Union order: first-seen (all of x,
// then new names from y).
struct AlignedTables {
  std::vector<std::string> names;
  CountTablePair tables;
};
AlignedTables align_union(const TableData& x, const TableData& y);

// Shortest decimal string that parses back to exactly v ("nan", "inf" for
// the specials).
std::string format_double(double v);

// CSV with header "beta,r".
std::string curve_csv(const std::vector<CurvePoint>& points);

// CSV with header "beta,r,power,k,substantial"; booleans as 0/1.
std::string power_grid_csv(const PowerGrid& grid);

// Inverse of power_grid_csv (critical_value is not part of the CSV and
// comes back NaN). Schema mismatches throw IoError naming the column.
PowerGrid parse_power_grid_csv(const std::string& text);

// CSV with header "beta,theta0,theta1,r_star,separated"; unfittable strips
// carry NaN fit fields.
std::string phase_fit_csv(const std::vector<PhaseFitRow>& rows);

// Grid specification: either "start:stop:step" (inclusive of stop, step > 0)
// or a comma-separated value list. key names the config key in errors.
std::vector<double> parse_grid_spec(const std::string& spec, const std::string& key);

// Flat key-value config ("key = value" lines, '#' comments). Keys:
//   N                category count (required)
//   gamma            sample sizes n_x = n_y = N^gamma (default 1.4;
//                    mutually exclusive with n_x/n_y)
//   n_x, n_y         explicit sample sizes (must be given together)
//   beta_grid        grid spec (default 0.5:0.95:0.05)
//   r_grid           grid spec (default 0:3:0.1)
//   M                replicates per cell (default 1000)
//   alpha, delta     test level and substantiality threshold (default 0.05)
//   statistic        hc | minp (default hc)
//   gamma0           HC search fraction (default 0.1)
//   pvalue_mode      exact | randomized (default exact)
//   model            poisson | normal (default poisson)
//   baseline         uniform | zipf (default uniform)
//   zipf_shift, zipf_exponent   Zipf-Mandelbrot parameters (require zipf)
//   seed             master seed (default 0)
// Unknown or duplicate keys, missing '=', bad values, and out-of-range
// fields all throw ConfigError naming the key. workers is not a config key;
// it comes from the command line.
SimConfig parse_sim_config(const std::string& text);

// Whole-file read/write in binary mode (no newline translation).
// Both throw IoError on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hicrit
