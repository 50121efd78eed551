#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajevo/genome.hpp"
#include "trajevo/rng.hpp"

namespace trajevo {

enum class Operator : std::uint8_t {
  weight_change,
  connect_neurons,
  connect_io,
  insert_neuron,
  toggle_flag,
  set_flag,
  new_pathway,
  tau_perturb,
};
inline constexpr std::size_t kOperatorCount = 8;

std::string to_string(Operator op);

/// Per-offspring application probabilities. Weight change takes whatever
/// probability mass the structural operators leave.
struct OperatorTable {
  double connect_neurons = 0.02;
  double connect_io = 0.02;
  double insert_neuron = 0.001;
  double toggle_flag = 0.01;
  double set_flag = 0.01;
  double new_pathway = 0.01;
  double tau_perturb = 0.05;

  bool new_pathway_enabled = true;
  bool ctrnn = false;

  /// Per-connection chance of being picked by weight change. The exact
  /// fraction is a free parameter; at least one connection is always picked.
  double weight_select = 0.1;
  double weight_sigma = 0.18;
  double weight_replace = 0.15;
  double tau_sigma = 0.08;
  double tau_min = 0.01;
  int max_retries = 8;

  /// Probability of each operator in Operator order; sums to 1.
  std::array<double, kOperatorCount> probabilities() const;
  Operator draw(Rng& rng) const;
};

/// Scaffolding inputs released so far: ids 1000 .. available_max_id.
struct ScaffoldGate {
  bool enabled = true;
  GeneId available_max_id = kFirstScaffoldInput + kInitialScaffoldInputs - 1;
  GeneId lookback = 5;

  /// Scaffolding ids a genome may newly connect from (ascending).
  std::vector<GeneId> eligible(const Genome& g) const;
};

struct VariationContext {
  OperatorTable table;
  ScaffoldGate gate;
  bool freezing = true;
  std::size_t c_m = 25;
  bool sine_hidden = false;
  std::size_t n_outputs = 4;
  std::vector<GeneId> normal_inputs{kBiasInput};
};

struct MutationResult {
  Genome genome;
  Operator op;
  bool changed = false;
};

MutableWindow window_for(const Genome& g, const VariationContext& ctx);

/// Draws one operator from the table and applies it. The returned genome
/// keeps the parent's id; callers assign fresh ids.
MutationResult mutate(const Genome& parent, const VariationContext& ctx, InnovationCounter& counter, Rng& rng);

/// Applies the given operator. Returns false (genome untouched) when the
/// operator found no legal site.
bool apply_operator(Operator op, Genome& g, const VariationContext& ctx, InnovationCounter& counter, Rng& rng);

bool op_weight_change(Genome& g, const MutableWindow& w, const OperatorTable& t, Rng& rng);
bool op_connect_neurons(Genome& g, const MutableWindow& w, const OperatorTable& t, InnovationCounter& counter,
                        Rng& rng);
bool op_connect_io(Genome& g, const MutableWindow& w, const VariationContext& ctx, InnovationCounter& counter,
                   Rng& rng);
bool op_insert_neuron(Genome& g, const MutableWindow& w, bool sine_hidden, InnovationCounter& counter, Rng& rng);
bool op_toggle_flag(Genome& g, const MutableWindow& w, Rng& rng);
bool op_set_flag(Genome& g, const MutableWindow& w, Rng& rng);
bool op_new_pathway(Genome& g, std::size_t n_outputs, bool sine_hidden, InnovationCounter& counter, Rng& rng);
bool op_tau_perturb(Genome& g, const MutableWindow& w, const OperatorTable& t, Rng& rng);

}  // namespace trajevo
