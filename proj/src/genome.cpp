#include "trajevo/genome.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace trajevo {

std::string to_string(Endpoint e) {
  switch (e.kind) {
    case EndpointKind::input:
      return "i" + std::to_string(e.id);
    case EndpointKind::neuron:
      return "n" + std::to_string(e.id);
    case EndpointKind::output:
      return "o" + std::to_string(e.id);
  }
  return "?";
}

const NeuronGene* Genome::find_neuron(GeneId neuron_id) const {
  auto it = std::lower_bound(neurons.begin(), neurons.end(), neuron_id,
                             [](const NeuronGene& n, GeneId v) { return n.id < v; });
  if (it == neurons.end() || it->id != neuron_id) return nullptr;
  return &*it;
}

bool Genome::has_connection(Endpoint source, Endpoint target) const {
  return std::any_of(connections.begin(), connections.end(), [&](const ConnectionGene& c) {
    return c.source == source && c.target == target;
  });
}

std::optional<GeneId> Genome::highest_scaffold_input() const {
  std::optional<GeneId> best;
  for (const auto& c : connections) {
    if (c.source.is_input() && is_scaffold_input(c.source.id)) {
      if (!best || c.source.id > *best) best = c.source.id;
    }
  }
  return best;
}

std::size_t Genome::active_connection_count() const {
  return static_cast<std::size_t>(
      std::count_if(connections.begin(), connections.end(), [](const auto& c) { return c.active; }));
}

void Genome::validate(std::size_t n_outputs) const {
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const auto& n = neurons[i];
    if (i > 0 && n.id <= neurons[i - 1].id)
      throw GenomeError("neuron ids not strictly increasing at n" + std::to_string(n.id));
    if (!(n.tau > 0.0 && n.tau <= 1.0))
      throw GenomeError("tau out of (0, 1] on n" + std::to_string(n.id));
  }
  std::set<std::pair<Endpoint, Endpoint>> pairs;
  for (std::size_t i = 0; i < connections.size(); ++i) {
    const auto& c = connections[i];
    const std::string name = "connection " + std::to_string(c.innovation);
    if (i > 0 && c.innovation <= connections[i - 1].innovation)
      throw GenomeError("innovation numbers not strictly increasing at " + name);
    if (c.source.is_output()) throw GenomeError(name + " has an output as source");
    if (c.target.is_input()) throw GenomeError(name + " has an input as target");
    if (c.source.is_input() && c.source.id < 0) throw GenomeError(name + " has a negative input id");
    if (c.source.is_neuron() && !find_neuron(c.source.id))
      throw GenomeError(name + " references missing source " + to_string(c.source));
    if (c.target.is_neuron() && !find_neuron(c.target.id))
      throw GenomeError(name + " references missing target " + to_string(c.target));
    if (c.target.is_output()) {
      if (c.target.id < 0 || static_cast<std::size_t>(c.target.id) >= n_outputs)
        throw GenomeError(name + " targets undeclared " + to_string(c.target));
      if (c.weight != 1.0) throw GenomeError(name + " to output must have weight 1");
    }
    if (!(c.weight >= -kWeightLimit && c.weight <= kWeightLimit))
      throw GenomeError(name + " weight out of [-3, 3]");
    if (!pairs.emplace(c.source, c.target).second)
      throw GenomeError(name + " duplicates an existing (source, target) pair");
  }
}

void InnovationCounter::advance_past(const Genome& g) {
  for (const auto& n : g.neurons) next_ = std::max(next_, n.id + 1);
  for (const auto& c : g.connections) next_ = std::max(next_, c.innovation + 1);
}

Genome make_common_ancestor(std::size_t n_outputs, std::span<const GeneId> inputs,
                            InnovationCounter& counter, Rng& rng) {
  if (n_outputs == 0) throw ConfigError("common ancestor needs at least one output");
  Genome g;
  for (std::size_t out = 0; out < n_outputs; ++out) {
    const GeneId nid = counter.next();
    g.neurons.push_back({nid, 1.0, Transfer::tanh});
    g.connections.push_back({counter.next(), Endpoint::neuron(nid),
                             Endpoint::output(static_cast<GeneId>(out)), 1.0, true});
    for (GeneId in : inputs) {
      if (bernoulli(rng, 0.5)) {
        const double w = uniform(rng, -kWeightLimit, kWeightLimit);
        g.connections.push_back({counter.next(), Endpoint::input(in), Endpoint::neuron(nid), w, true});
      }
    }
  }
  return g;
}

namespace {

bool contains_sorted(const std::vector<GeneId>& v, GeneId id) {
  return std::binary_search(v.begin(), v.end(), id);
}

}  // namespace

bool MutableWindow::neuron_mutable(GeneId id) const { return contains_sorted(neurons, id); }
bool MutableWindow::connection_mutable(GeneId innovation) const {
  return contains_sorted(connections, innovation);
}
bool MutableWindow::bridge(GeneId id) const { return contains_sorted(bridge_sources, id); }

MutableWindow mutable_window(const Genome& g, std::size_t c_m) {
  MutableWindow w;
  const std::size_t nn = g.neurons.size();
  const std::size_t nc = g.connections.size();
  const std::size_t neuron_cut = nn > c_m ? nn - c_m : 0;
  const std::size_t bridge_cut = nn > 2 * c_m ? nn - 2 * c_m : 0;
  const std::size_t conn_cut = nc > c_m ? nc - c_m : 0;
  for (std::size_t i = bridge_cut; i < neuron_cut; ++i) w.bridge_sources.push_back(g.neurons[i].id);
  for (std::size_t i = neuron_cut; i < nn; ++i) w.neurons.push_back(g.neurons[i].id);
  for (std::size_t i = conn_cut; i < nc; ++i) w.connections.push_back(g.connections[i].innovation);
  return w;
}

MutableWindow full_window(const Genome& g) {
  MutableWindow w;
  for (const auto& n : g.neurons) w.neurons.push_back(n.id);
  for (const auto& c : g.connections) w.connections.push_back(c.innovation);
  return w;
}

}  // namespace trajevo
