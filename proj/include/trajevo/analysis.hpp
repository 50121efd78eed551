#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "trajevo/genome.hpp"

namespace trajevo {

/// Bits injected per generation: log2(n_directions) * n_decisions / n_generations.
double info_rate(std::size_t n_decisions, std::size_t n_directions, std::size_t n_generations);

/// Upper bound for truncation selection keeping `fraction` of the population.
double selection_limit_bits(double fraction);

/// Structural summary over active connections only.
struct NetworkStats {
  std::size_t n_inputs = 0;
  std::size_t n_scaffold_inputs = 0;
  std::size_t n_neurons = 0;
  std::size_t n_outputs = 0;
  std::size_t n_input_connections = 0;
  std::size_t n_neuron_connections = 0;
  std::size_t n_output_connections = 0;
  /// Weakly connected components of the neuron-to-neuron graph; isolated
  /// neurons count as singletons.
  std::size_t n_components = 0;
  double mean_component_size = 0.0;
};

NetworkStats network_stats(const Genome& g);

void write_stats(std::ostream& os, const NetworkStats& s);

struct AgeHistograms {
  /// span_counts[d] = number of neuron-to-neuron connections whose endpoints
  /// are d apart in creation order.
  std::vector<std::size_t> span_counts;
  /// Mean number of connections to outputs per neuron, neurons taken in
  /// creation order in buckets of `bucket` (the last bucket may be smaller).
  std::vector<double> output_degree_means;
};

AgeHistograms age_histograms(const Genome& g, std::size_t bucket = 10);

struct ScaffoldEstimate {
  /// ceil(n_segments * segment_len / period)
  std::size_t needed = 0;
  /// `needed` rounded up to a whole batch: what the engine would release.
  std::size_t available = 0;
};

ScaffoldEstimate expected_scaffold_count(std::size_t n_segments, std::size_t segment_len = 30,
                                         std::size_t period = 20, std::size_t batch = 5);

}  // namespace trajevo
