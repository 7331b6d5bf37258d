// Aligned two-sample tables: integer counts for the Poisson model and
// real values for the normal-means companion model.

#pragma once

#include <cstdint>
#include <vector>

namespace hicrit {

// Per-category latent label attached by the alternative-hypothesis samplers:
// 0 unperturbed, +1 perturbed up, -1 perturbed down. Simulation metadata
// only; never an input to any statistic.
using TruthLabel = std::int8_t;

struct CountTablePair {
  std::vector<std::uint64_t> x_counts;
  std::vector<std::uint64_t> y_counts;
  std::vector<TruthLabel> truth_labels;  // empty for observed (non-simulated) data

  std::size_t size() const { return x_counts.size(); }
};

struct RealTablePair {
  std::vector<double> x_values;
  std::vector<double> y_values;
  std::vector<TruthLabel> truth_labels;

  std::size_t size() const { return x_values.size(); }
};

}  // namespace hicrit
