#include "trajevo/variation.hpp"

#include <algorithm>
#include <numeric>

namespace trajevo {

std::string to_string(Operator op) {
  switch (op) {
    case Operator::weight_change: return "weight-change";
    case Operator::connect_neurons: return "connect-neurons";
    case Operator::connect_io: return "connect-io";
    case Operator::insert_neuron: return "insert-neuron";
    case Operator::toggle_flag: return "toggle-flag";
    case Operator::set_flag: return "set-flag";
    case Operator::new_pathway: return "new-pathway";
    case Operator::tau_perturb: return "tau-perturb";
  }
  return "?";
}

std::array<double, kOperatorCount> OperatorTable::probabilities() const {
  std::array<double, kOperatorCount> p{};
  p[static_cast<std::size_t>(Operator::connect_neurons)] = connect_neurons;
  p[static_cast<std::size_t>(Operator::connect_io)] = connect_io;
  p[static_cast<std::size_t>(Operator::insert_neuron)] = insert_neuron;
  p[static_cast<std::size_t>(Operator::toggle_flag)] = toggle_flag;
  p[static_cast<std::size_t>(Operator::set_flag)] = set_flag;
  p[static_cast<std::size_t>(Operator::new_pathway)] = new_pathway_enabled ? new_pathway : 0.0;
  p[static_cast<std::size_t>(Operator::tau_perturb)] = ctrnn ? tau_perturb : 0.0;
  const double structural = std::accumulate(p.begin(), p.end(), 0.0);
  if (structural > 1.0) throw ConfigError("structural operator probabilities exceed 1");
  p[static_cast<std::size_t>(Operator::weight_change)] = 1.0 - structural;
  return p;
}

Operator OperatorTable::draw(Rng& rng) const {
  const auto p = probabilities();
  std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
  return static_cast<Operator>(dist(rng));
}

std::vector<GeneId> ScaffoldGate::eligible(const Genome& g) const {
  std::vector<GeneId> ids;
  if (!enabled) return ids;
  const GeneId sup = g.highest_scaffold_input().value_or(kFirstScaffoldInput + kInitialScaffoldInputs - 1);
  for (GeneId id = std::max(kFirstScaffoldInput, sup - lookback); id <= available_max_id; ++id) ids.push_back(id);
  return ids;
}

MutableWindow window_for(const Genome& g, const VariationContext& ctx) {
  return ctx.freezing ? mutable_window(g, ctx.c_m) : full_window(g);
}

namespace {

double clamp_weight(double w) { return std::clamp(w, -kWeightLimit, kWeightLimit); }

Transfer new_transfer(bool sine_hidden, Rng& rng) {
  if (!sine_hidden) return Transfer::tanh;
  return bernoulli(rng, 0.5) ? Transfer::sine : Transfer::tanh;
}

NeuronGene* find_neuron_mut(Genome& g, GeneId id) { return const_cast<NeuronGene*>(g.find_neuron(id)); }

template <typename Pred>
std::vector<std::size_t> mutable_connections(const Genome& g, const MutableWindow& w, Pred pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.connections.size(); ++i)
    if (w.connection_mutable(g.connections[i].innovation) && pred(g.connections[i])) out.push_back(i);
  return out;
}

}  // namespace

bool op_weight_change(Genome& g, const MutableWindow& w, const OperatorTable& t, Rng& rng) {
  const auto candidates = mutable_connections(g, w, [](const ConnectionGene& c) { return !c.to_output(); });
  if (candidates.empty()) return false;
  std::vector<std::size_t> chosen;
  for (std::size_t i : candidates)
    if (bernoulli(rng, t.weight_select)) chosen.push_back(i);
  if (chosen.empty()) chosen.push_back(candidates[pick(rng, candidates.size())]);
  for (std::size_t i : chosen) {
    double& weight = g.connections[i].weight;
    if (bernoulli(rng, t.weight_replace))
      weight = uniform(rng, -kWeightLimit, kWeightLimit);
    else
      weight = clamp_weight(weight + gaussian(rng, t.weight_sigma));
  }
  return true;
}

bool op_connect_neurons(Genome& g, const MutableWindow& w, const OperatorTable& t, InnovationCounter& counter,
                        Rng& rng) {
  if (w.neurons.empty()) return false;
  std::vector<GeneId> sources = w.bridge_sources;
  sources.insert(sources.end(), w.neurons.begin(), w.neurons.end());
  for (int attempt = 0; attempt < t.max_retries; ++attempt) {
    const Endpoint src = Endpoint::neuron(sources[pick(rng, sources.size())]);
    const Endpoint dst = Endpoint::neuron(w.neurons[pick(rng, w.neurons.size())]);
    if (g.has_connection(src, dst)) continue;
    g.connections.push_back({counter.next(), src, dst, uniform(rng, -kWeightLimit, kWeightLimit), true});
    return true;
  }
  return false;
}

bool op_connect_io(Genome& g, const MutableWindow& w, const VariationContext& ctx, InnovationCounter& counter,
                   Rng& rng) {
  if (w.neurons.empty()) return false;
  const int retries = ctx.table.max_retries;
  if (bernoulli(rng, 0.5)) {
    std::vector<GeneId> inputs = ctx.normal_inputs;
    const auto scaffold = ctx.gate.eligible(g);
    inputs.insert(inputs.end(), scaffold.begin(), scaffold.end());
    if (inputs.empty()) return false;
    for (int attempt = 0; attempt < retries; ++attempt) {
      const Endpoint src = Endpoint::input(inputs[pick(rng, inputs.size())]);
      const Endpoint dst = Endpoint::neuron(w.neurons[pick(rng, w.neurons.size())]);
      if (g.has_connection(src, dst)) continue;
      g.connections.push_back({counter.next(), src, dst, uniform(rng, -kWeightLimit, kWeightLimit), true});
      return true;
    }
    return false;
  }
  if (ctx.n_outputs == 0) return false;
  for (int attempt = 0; attempt < retries; ++attempt) {
    const Endpoint src = Endpoint::neuron(w.neurons[pick(rng, w.neurons.size())]);
    const Endpoint dst = Endpoint::output(static_cast<GeneId>(pick(rng, ctx.n_outputs)));
    if (g.has_connection(src, dst)) continue;
    g.connections.push_back({counter.next(), src, dst, 1.0, true});
    return true;
  }
  return false;
}

bool op_insert_neuron(Genome& g, const MutableWindow& w, bool sine_hidden, InnovationCounter& counter, Rng& rng) {
  const auto candidates =
      mutable_connections(g, w, [](const ConnectionGene& c) { return c.active && c.target.is_neuron(); });
  if (candidates.empty()) return false;
  ConnectionGene& split = g.connections[candidates[pick(rng, candidates.size())]];
  split.active = false;
  const ConnectionGene old = split;
  const GeneId nid = counter.next();
  g.neurons.push_back({nid, 1.0, new_transfer(sine_hidden, rng)});
  g.connections.push_back({counter.next(), old.source, Endpoint::neuron(nid), 1.0, true});
  g.connections.push_back({counter.next(), Endpoint::neuron(nid), old.target, old.weight, true});
  return true;
}

bool op_toggle_flag(Genome& g, const MutableWindow& w, Rng& rng) {
  const auto candidates = mutable_connections(g, w, [](const ConnectionGene&) { return true; });
  if (candidates.empty()) return false;
  auto& c = g.connections[candidates[pick(rng, candidates.size())]];
  c.active = !c.active;
  return true;
}

bool op_set_flag(Genome& g, const MutableWindow& w, Rng& rng) {
  const auto candidates = mutable_connections(g, w, [](const ConnectionGene& c) { return !c.active; });
  if (candidates.empty()) return false;
  g.connections[candidates[pick(rng, candidates.size())]].active = true;
  return true;
}

bool op_new_pathway(Genome& g, std::size_t n_outputs, bool sine_hidden, InnovationCounter& counter, Rng& rng) {
  if (n_outputs == 0) return false;
  const GeneId nid = counter.next();
  g.neurons.push_back({nid, 1.0, new_transfer(sine_hidden, rng)});
  const auto out = static_cast<GeneId>(pick(rng, n_outputs));
  g.connections.push_back({counter.next(), Endpoint::neuron(nid), Endpoint::output(out), 1.0, true});
  return true;
}

bool op_tau_perturb(Genome& g, const MutableWindow& w, const OperatorTable& t, Rng& rng) {
  if (w.neurons.empty()) return false;
  NeuronGene* n = find_neuron_mut(g, w.neurons[pick(rng, w.neurons.size())]);
  if (!n) return false;
  n->tau = std::clamp(n->tau + gaussian(rng, t.tau_sigma), t.tau_min, 1.0);
  return true;
}

bool apply_operator(Operator op, Genome& g, const VariationContext& ctx, InnovationCounter& counter, Rng& rng) {
  if (op == Operator::new_pathway) return op_new_pathway(g, ctx.n_outputs, ctx.sine_hidden, counter, rng);
  const MutableWindow w = window_for(g, ctx);
  switch (op) {
    case Operator::weight_change: return op_weight_change(g, w, ctx.table, rng);
    case Operator::connect_neurons: return op_connect_neurons(g, w, ctx.table, counter, rng);
    case Operator::connect_io: return op_connect_io(g, w, ctx, counter, rng);
    case Operator::insert_neuron: return op_insert_neuron(g, w, ctx.sine_hidden, counter, rng);
    case Operator::toggle_flag: return op_toggle_flag(g, w, rng);
    case Operator::set_flag: return op_set_flag(g, w, rng);
    case Operator::tau_perturb: return op_tau_perturb(g, w, ctx.table, rng);
    case Operator::new_pathway: break;
  }
  return false;
}

MutationResult mutate(const Genome& parent, const VariationContext& ctx, InnovationCounter& counter, Rng& rng) {
  MutationResult r{parent, ctx.table.draw(rng), false};
  r.changed = apply_operator(r.op, r.genome, ctx, counter, rng);
  if (!r.changed) r.genome = parent;
  return r;
}

}  // namespace trajevo
