#include "trajevo/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trajevo {

std::string to_string(OutputFunction f) {
  switch (f) {
    case OutputFunction::sine: return "sine";
    case OutputFunction::tanh: return "tanh";
    case OutputFunction::mean: return "mean";
  }
  return "?";
}

OutputFunction parse_output_function(const std::string& s) {
  if (s == "sine") return OutputFunction::sine;
  if (s == "tanh") return OutputFunction::tanh;
  if (s == "mean") return OutputFunction::mean;
  throw ConfigError("unknown output function '" + s + "' (expected sine, tanh or mean)");
}

double aggregate_output(OutputFunction f, double sum, std::size_t contributions) {
  switch (f) {
    case OutputFunction::sine: return std::sin(std::numbers::pi * sum);
    case OutputFunction::tanh: return std::tanh(sum);
    case OutputFunction::mean: return contributions == 0 ? 0.0 : sum / static_cast<double>(contributions);
  }
  return 0.0;
}

Phenotype Phenotype::compile(const Genome& g, std::size_t n_outputs, NetworkVariant variant,
                             const kernels::KernelSet& kernels) {
  Phenotype p;
  p.variant_ = variant;
  p.kernels_ = &kernels;

  for (const auto& c : g.connections)
    if (c.active && c.source.is_input()) p.input_ids_.push_back(c.source.id);
  std::sort(p.input_ids_.begin(), p.input_ids_.end());
  p.input_ids_.erase(std::unique(p.input_ids_.begin(), p.input_ids_.end()), p.input_ids_.end());

  const std::size_t n_in = p.input_ids_.size();
  const std::size_t n_neurons = g.neurons.size();
  for (const auto& n : g.neurons) {
    p.neuron_ids_.push_back(n.id);
    p.tau_.push_back(n.tau);
    p.transfer_.push_back(n.transfer);
  }

  auto neuron_index = [&](GeneId id, const ConnectionGene& c) -> std::size_t {
    auto it = std::lower_bound(p.neuron_ids_.begin(), p.neuron_ids_.end(), id);
    if (it == p.neuron_ids_.end() || *it != id)
      throw CompileError("connection " + std::to_string(c.innovation) + " references missing neuron n" +
                         std::to_string(id));
    return static_cast<std::size_t>(it - p.neuron_ids_.begin());
  };
  auto source_slot = [&](const ConnectionGene& c) -> std::int32_t {
    if (c.source.is_input()) {
      auto it = std::lower_bound(p.input_ids_.begin(), p.input_ids_.end(), c.source.id);
      return static_cast<std::int32_t>(it - p.input_ids_.begin());
    }
    if (c.source.is_neuron()) return static_cast<std::int32_t>(n_in + neuron_index(c.source.id, c));
    throw CompileError("connection " + std::to_string(c.innovation) + " has an output as source");
  };

  std::vector<std::vector<kernels::RowEntry>> rows(n_neurons);
  std::vector<std::vector<std::uint32_t>> groups(n_outputs);
  for (const auto& c : g.connections) {
    if (!c.active) continue;
    const std::int32_t src = source_slot(c);
    if (c.target.is_neuron()) {
      rows[neuron_index(c.target.id, c)].push_back({src, c.weight});
    } else if (c.target.is_output()) {
      if (c.target.id < 0 || static_cast<std::size_t>(c.target.id) >= n_outputs)
        throw CompileError("connection " + std::to_string(c.innovation) + " targets undeclared output o" +
                           std::to_string(c.target.id));
      if (!c.source.is_neuron())
        throw CompileError("connection " + std::to_string(c.innovation) + " feeds an output from a non-neuron");
      groups[static_cast<std::size_t>(c.target.id)].push_back(static_cast<std::uint32_t>(src - n_in));
    } else {
      throw CompileError("connection " + std::to_string(c.innovation) + " targets an input");
    }
    ++p.connection_count_;
  }

  p.incoming_ = kernels::build_lane_table(rows);
  p.output_begin_.push_back(0);
  for (const auto& grp : groups) {
    p.output_neuron_.insert(p.output_neuron_.end(), grp.begin(), grp.end());
    p.output_begin_.push_back(static_cast<std::uint32_t>(p.output_neuron_.size()));
  }
  p.signal_.assign(n_in + n_neurons, 0.0);
  p.activation_.assign(n_neurons, 0.0);
  p.drive_.assign(n_neurons, 0.0);
  p.outputs_.assign(n_outputs, 0.0);
  return p;
}

int Phenotype::input_slot(GeneId input_id) const {
  auto it = std::lower_bound(input_ids_.begin(), input_ids_.end(), input_id);
  if (it == input_ids_.end() || *it != input_id) return -1;
  return static_cast<int>(it - input_ids_.begin());
}

std::span<const double> Phenotype::neuron_outputs() const {
  return std::span<const double>(signal_).subspan(input_ids_.size());
}

void Phenotype::reset() {
  std::fill(signal_.begin(), signal_.end(), 0.0);
  std::fill(activation_.begin(), activation_.end(), 0.0);
  std::fill(drive_.begin(), drive_.end(), 0.0);
  std::fill(outputs_.begin(), outputs_.end(), 0.0);
}

std::span<const double> Phenotype::step(const std::map<GeneId, double>& inputs) {
  for (const auto& [id, v] : inputs)
    if (!std::isfinite(v)) throw EvaluationError("non-finite value on input i" + std::to_string(id));
  for (std::size_t s = 0; s < input_ids_.size(); ++s) {
    auto it = inputs.find(input_ids_[s]);
    signal_[s] = it == inputs.end() ? 0.0 : it->second;
  }
  return step_current();
}

std::span<const double> Phenotype::step_with_hot_inputs(std::span<const int> hot_slots) {
  std::fill(signal_.begin(), signal_.begin() + static_cast<std::ptrdiff_t>(input_ids_.size()), 0.0);
  for (int s : hot_slots)
    if (s >= 0) signal_[static_cast<std::size_t>(s)] = 1.0;
  return step_current();
}

std::span<const double> Phenotype::step_current() {
  const std::size_t n_in = input_ids_.size();
  const std::size_t n = neuron_ids_.size();
  if (variant_.ctrnn) {
    kernels_->weighted_sums(incoming_, signal_, drive_);
    kernels_->leaky_blend(tau_, drive_, activation_);
  } else {
    kernels_->weighted_sums(incoming_, signal_, activation_);
  }
  double* out = signal_.data() + n_in;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = transfer_[i] == Transfer::sine ? std::sin(std::numbers::pi * activation_[i])
                                            : std::tanh(activation_[i]);
  }
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    double sum = 0.0;
    for (std::uint32_t k = output_begin_[o]; k < output_begin_[o + 1]; ++k) sum = sum + out[output_neuron_[k]];
    outputs_[o] = aggregate_output(variant_.output, sum, output_begin_[o + 1] - output_begin_[o]);
  }
  return outputs_;
}

}  // namespace trajevo
