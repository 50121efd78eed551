#include "trajevo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace trajevo {

double info_rate(std::size_t n_decisions, std::size_t n_directions, std::size_t n_generations) {
  if (n_directions < 1 || n_generations < 1) throw ConfigError("info_rate needs positive direction and generation counts");
  return std::log2(static_cast<double>(n_directions)) * static_cast<double>(n_decisions) /
         static_cast<double>(n_generations);
}

double selection_limit_bits(double fraction) { return std::log2(1.0 / fraction); }

namespace {

std::size_t neuron_rank(const Genome& g, GeneId id) {
  auto it = std::lower_bound(g.neurons.begin(), g.neurons.end(), id,
                             [](const NeuronGene& n, GeneId v) { return n.id < v; });
  return static_cast<std::size_t>(it - g.neurons.begin());
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

NetworkStats network_stats(const Genome& g) {
  NetworkStats s;
  s.n_neurons = g.neurons.size();
  std::set<GeneId> inputs, outputs;
  std::vector<std::size_t> parent(g.neurons.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& c : g.connections) {
    if (!c.active) continue;
    if (c.source.is_input()) {
      inputs.insert(c.source.id);
      ++s.n_input_connections;
    } else if (c.target.is_output()) {
      outputs.insert(c.target.id);
      ++s.n_output_connections;
    } else {
      ++s.n_neuron_connections;
      const std::size_t a = find_root(parent, neuron_rank(g, c.source.id));
      const std::size_t b = find_root(parent, neuron_rank(g, c.target.id));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  s.n_inputs = inputs.size();
  s.n_scaffold_inputs =
      static_cast<std::size_t>(std::count_if(inputs.begin(), inputs.end(), [](GeneId id) { return is_scaffold_input(id); }));
  s.n_outputs = outputs.size();
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (find_root(parent, i) == i) ++s.n_components;
  s.mean_component_size =
      s.n_components == 0 ? 0.0 : static_cast<double>(s.n_neurons) / static_cast<double>(s.n_components);
  return s;
}

void write_stats(std::ostream& os, const NetworkStats& s) {
  os << "inputs = " << s.n_inputs << '\n'
     << "scaffold_inputs = " << s.n_scaffold_inputs << '\n'
     << "neurons = " << s.n_neurons << '\n'
     << "outputs = " << s.n_outputs << '\n'
     << "input_connections = " << s.n_input_connections << '\n'
     << "neuron_connections = " << s.n_neuron_connections << '\n'
     << "output_connections = " << s.n_output_connections << '\n'
     << "components = " << s.n_components << '\n'
     << "mean_component_size = " << s.mean_component_size << '\n';
}

AgeHistograms age_histograms(const Genome& g, std::size_t bucket) {
  if (bucket == 0) throw ConfigError("histogram bucket size must be at least 1");
  AgeHistograms h;
  std::vector<std::size_t> out_degree(g.neurons.size(), 0);
  for (const auto& c : g.connections) {
    if (!c.active || !c.source.is_neuron()) continue;
    const std::size_t src = neuron_rank(g, c.source.id);
    if (c.target.is_output()) {
      ++out_degree[src];
    } else {
      const std::size_t dst = neuron_rank(g, c.target.id);
      const std::size_t span = src > dst ? src - dst : dst - src;
      if (h.span_counts.size() <= span) h.span_counts.resize(span + 1, 0);
      ++h.span_counts[span];
    }
  }
  for (std::size_t start = 0; start < out_degree.size(); start += bucket) {
    const std::size_t end = std::min(start + bucket, out_degree.size());
    const auto sum = std::accumulate(out_degree.begin() + static_cast<std::ptrdiff_t>(start),
                                     out_degree.begin() + static_cast<std::ptrdiff_t>(end), std::size_t{0});
    h.output_degree_means.push_back(static_cast<double>(sum) / static_cast<double>(end - start));
  }
  return h;
}

ScaffoldEstimate expected_scaffold_count(std::size_t n_segments, std::size_t segment_len, std::size_t period,
                                         std::size_t batch) {
  if (n_segments < 1 || segment_len < 1 || period < 1 || batch < 1)
    throw ConfigError("expected_scaffold_count needs positive arguments");
  ScaffoldEstimate e;
  e.needed = (n_segments * segment_len + period - 1) / period;
  e.available = (e.needed + batch - 1) / batch * batch;
  return e;
}

}  // namespace trajevo
