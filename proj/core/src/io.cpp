#include "hicrit/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace hicrit {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_double_str(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool parse_u64_str(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtoull(s.c_str(), &end, 10);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t cut = s.find(delim, start);
    if (cut == std::string::npos) {
      fields.push_back(s.substr(start));
      return fields;
    }
    fields.push_back(s.substr(start, cut - start));
    start = cut + 1;
  }
}

std::string line_context(const std::string& origin, std::size_t line_no) {
  return origin + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

TableData parse_table(const std::string& text, const std::string& origin) {
  TableData out;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  char delim = '\0';
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    if (delim == '\0') delim = line.find('\t') != std::string::npos ? '\t' : ',';
    const std::size_t cut = line.rfind(delim);
    if (cut == std::string::npos) {
      throw IoError(line_context(origin, line_no) + "expected 'category" +
                    (delim == '\t' ? "<TAB>" : ",") + "count'");
    }
    const std::string name = trim(line.substr(0, cut));
    const std::string count_str = trim(line.substr(cut + 1));
    if (name.empty()) {
      throw IoError(line_context(origin, line_no) + "empty category name");
    }
    std::uint64_t count = 0;
    if (!parse_u64_str(count_str, count)) {
      throw IoError(line_context(origin, line_no) + "count must be a nonnegative integer, got '" +
                    count_str + "'");
    }
    if (!seen.insert(name).second) {
      throw IoError(line_context(origin, line_no) + "duplicate category '" + name + "'");
    }
    out.names.push_back(name);
    out.counts.push_back(count);
  }
  return out;
}

TableData read_table_file(const std::string& path) {
  return parse_table(read_text_file(path), path);
}

AlignedTables align_union(const TableData& x, const TableData& y) {
  if (x.names.size() != x.counts.size() || y.names.size() != y.counts.size()) {
    throw std::invalid_argument("align_union: names and counts lengths differ");
  }
  AlignedTables out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < x.names.size(); ++i) {
    if (!index.emplace(x.names[i], out.names.size()).second) {
      throw std::invalid_argument("align_union: duplicate category '" + x.names[i] + "'");
    }
    out.names.push_back(x.names[i]);
  }
  for (std::size_t i = 0; i < y.names.size(); ++i) {
    const auto inserted = index.emplace(y.names[i], out.names.size());
    if (inserted.second) out.names.push_back(y.names[i]);
  }
  out.tables.x_counts.assign(out.names.size(), 0);
  out.tables.y_counts.assign(out.names.size(), 0);
  for (std::size_t i = 0; i < x.names.size(); ++i) out.tables.x_counts[i] = x.counts[i];
  for (std::size_t i = 0; i < y.names.size(); ++i) {
    out.tables.y_counts[index.at(y.names[i])] = y.counts[i];
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::string out = "beta,r\n";
  for (const CurvePoint& p : points) {
    out += format_double(p.beta);
    out += ',';
    out += format_double(p.r);
    out += '\n';
  }
  return out;
}

std::string power_grid_csv(const PowerGrid& grid) {
  std::string out = "beta,r,power,k,substantial\n";
  for (const PowerCell& cell : grid.cells) {
    out += format_double(cell.beta);
    out += ',';
    out += format_double(cell.r);
    out += ',';
    out += format_double(cell.power);
    out += ',';
    out += std::to_string(cell.rejections);
    out += ',';
    out += cell.substantial ? '1' : '0';
    out += '\n';
  }
  return out;
}

PowerGrid parse_power_grid_csv(const std::string& text) {
  static const std::vector<std::string> kHeader = {"beta", "r", "power", "k", "substantial"};
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("power grid CSV: empty input");
  strip_cr(line);
  const std::vector<std::string> header = split(line, ',');
  for (std::size_t i = 0; i < kHeader.size(); ++i) {
    if (i >= header.size() || trim(header[i]) != kHeader[i]) {
      throw IoError("power grid CSV: expected column '" + kHeader[i] + "', got '" +
                    (i < header.size() ? trim(header[i]) : std::string{}) + "'");
    }
  }
  if (header.size() != kHeader.size()) {
    throw IoError("power grid CSV: unexpected extra column '" + trim(header[kHeader.size()]) +
                  "'");
  }

  PowerGrid grid;
  grid.critical_value = std::numeric_limits<double>::quiet_NaN();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != kHeader.size()) {
      throw IoError(line_context("power grid CSV", line_no) + "expected 5 fields, got " +
                    std::to_string(fields.size()));
    }
    PowerCell cell;
    if (!parse_double_str(trim(fields[0]), cell.beta) ||
        !parse_double_str(trim(fields[1]), cell.r) ||
        !parse_double_str(trim(fields[2]), cell.power)) {
      throw IoError(line_context("power grid CSV", line_no) + "malformed numeric field");
    }
    std::uint64_t k = 0;
    if (!parse_u64_str(trim(fields[3]), k)) {
      throw IoError(line_context("power grid CSV", line_no) + "column 'k' must be an integer");
    }
    cell.rejections = static_cast<std::size_t>(k);
    const std::string flag = trim(fields[4]);
    if (flag == "0" || flag == "false") {
      cell.substantial = false;
    } else if (flag == "1" || flag == "true") {
      cell.substantial = true;
    } else {
      throw IoError(line_context("power grid CSV", line_no) +
                    "column 'substantial' must be 0 or 1, got '" + flag + "'");
    }
    grid.cells.push_back(cell);
  }
  return grid;
}

std::string phase_fit_csv(const std::vector<PhaseFitRow>& rows) {
  std::string out = "beta,theta0,theta1,r_star,separated\n";
  for (const PhaseFitRow& row : rows) {
    out += format_double(row.beta);
    out += ',';
    out += format_double(row.theta0);
    out += ',';
    out += format_double(row.theta1);
    out += ',';
    out += format_double(row.r_star);
    out += ',';
    out += row.separated ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<double> parse_grid_spec(const std::string& spec, const std::string& key) {
  const std::string trimmed = trim(spec);
  if (trimmed.empty()) throw ConfigError("config key '" + key + "': empty grid");
  if (trimmed.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(trimmed, ':');
    if (parts.size() != 3) {
      throw ConfigError("config key '" + key + "': expected 'start:stop:step'");
    }
    double start = 0.0, stop = 0.0, step = 0.0;
    if (!parse_double_str(trim(parts[0]), start) || !parse_double_str(trim(parts[1]), stop) ||
        !parse_double_str(trim(parts[2]), step)) {
      throw ConfigError("config key '" + key + "': malformed 'start:stop:step'");
    }
    if (!(step > 0.0)) throw ConfigError("config key '" + key + "': step must be > 0");
    if (stop < start) throw ConfigError("config key '" + key + "': stop is below start");
    // Index-based generation avoids accumulated rounding; the 1e-9 nudge
    // keeps an exactly-landing stop inside the grid.
    const std::size_t count = static_cast<std::size_t>((stop - start) / step + 1e-9) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
  }
  std::vector<double> grid;
  for (const std::string& field : split(trimmed, ',')) {
    double v = 0.0;
    if (!parse_double_str(trim(field), v)) {
      throw ConfigError("config key '" + key + "': malformed number '" + trim(field) + "'");
    }
    grid.push_back(v);
  }
  return grid;
}

SimConfig parse_sim_config(const std::string& text) {
  std::unordered_map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("duplicate config key '" + key + "'");
    }
  }

  static const std::unordered_set<std::string> kKnown = {
      "N",     "gamma",     "n_x",   "n_y",         "beta_grid",  "r_grid",
      "M",     "alpha",     "delta", "statistic",   "gamma0",     "pvalue_mode",
      "model", "baseline",  "zipf_shift", "zipf_exponent", "seed"};
  for (const auto& [key, value] : kv) {
    if (kKnown.find(key) == kKnown.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  const auto get = [&kv](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const auto get_double = [&get](const std::string& key, double fallback) {
    const std::string* raw = get(key);
    if (raw == nullptr) return fallback;
    double v = 0.0;
    if (!parse_double_str(*raw, v)) {
      throw ConfigError("config key '" + key + "': expected a number, got '" + *raw + "'");
    }
    return v;
  };
  const auto get_u64 = [&get](const std::string& key, std::uint64_t fallback) {
    const std::string* raw = get(key);
    if (raw == nullptr) return fallback;
    std::uint64_t v = 0;
    if (!parse_u64_str(*raw, v)) {
      throw ConfigError("config key '" + key + "': expected a nonnegative integer, got '" + *raw +
                        "'");
    }
    return v;
  };

  SimConfig config;
  if (get("N") == nullptr) throw ConfigError("missing required config key 'N'");
  config.params.N = static_cast<std::size_t>(get_u64("N", 0));

  const bool has_gamma = get("gamma") != nullptr;
  const bool has_nx = get("n_x") != nullptr;
  const bool has_ny = get("n_y") != nullptr;
  if (has_gamma && (has_nx || has_ny)) {
    throw ConfigError("config key 'gamma' conflicts with 'n_x'/'n_y'");
  }
  if (has_nx != has_ny) {
    throw ConfigError("config keys 'n_x' and 'n_y' must be given together");
  }
  if (has_nx) {
    config.params.n_x = get_double("n_x", 0.0);
    config.params.n_y = get_double("n_y", 0.0);
  } else {
    const double gamma = get_double("gamma", 1.4);
    config.params.n_x = std::pow(static_cast<double>(config.params.N), gamma);
    config.params.n_y = config.params.n_x;
  }

  config.beta_grid = parse_grid_spec(get("beta_grid") ? *get("beta_grid") : "0.5:0.95:0.05",
                                     "beta_grid");
  config.r_grid = parse_grid_spec(get("r_grid") ? *get("r_grid") : "0:3:0.1", "r_grid");
  config.replicates = static_cast<std::size_t>(get_u64("M", 1000));
  config.alpha = get_double("alpha", 0.05);
  config.delta = get_double("delta", 0.05);
  config.hc.gamma0 = get_double("gamma0", 0.1);
  config.master_seed = get_u64("seed", 0);

  if (const std::string* raw = get("statistic")) {
    if (*raw == "hc") {
      config.statistic = StatisticKind::hc;
    } else if (*raw == "minp" || *raw == "min_p") {
      config.statistic = StatisticKind::min_p;
    } else {
      throw ConfigError("config key 'statistic': expected hc or minp, got '" + *raw + "'");
    }
  }
  if (const std::string* raw = get("pvalue_mode")) {
    if (*raw == "exact") {
      config.pvalue_mode = PValueKind::exact;
    } else if (*raw == "randomized") {
      config.pvalue_mode = PValueKind::randomized;
    } else {
      throw ConfigError("config key 'pvalue_mode': expected exact or randomized, got '" + *raw +
                        "'");
    }
  }
  if (const std::string* raw = get("model")) {
    if (*raw == "poisson") {
      config.model = ModelKind::poisson;
    } else if (*raw == "normal") {
      config.model = ModelKind::normal;
    } else {
      throw ConfigError("config key 'model': expected poisson or normal, got '" + *raw + "'");
    }
  }

  std::string baseline = "uniform";
  if (const std::string* raw = get("baseline")) baseline = *raw;
  if (baseline == "uniform") {
    if (get("zipf_shift") != nullptr || get("zipf_exponent") != nullptr) {
      throw ConfigError("config keys 'zipf_shift'/'zipf_exponent' require baseline = zipf");
    }
    config.params.baseline = Baseline::Uniform();
  } else if (baseline == "zipf") {
    const double shift = get_double("zipf_shift", 0.0);
    const double exponent = get_double("zipf_exponent", 2.0);
    if (!(shift > -1.0)) throw ConfigError("config key 'zipf_shift': must be > -1");
    if (!(exponent > 1.0)) throw ConfigError("config key 'zipf_exponent': must be > 1");
    config.params.baseline = Baseline::ZipfMandelbrot(shift, exponent);
  } else {
    throw ConfigError("config key 'baseline': expected uniform or zipf, got '" + baseline + "'");
  }

  try {
    config.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  return config;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return std::move(buf).str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace hicrit
