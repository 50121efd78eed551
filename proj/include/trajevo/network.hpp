#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajevo/genome.hpp"
#include "trajevo/kernels.hpp"

namespace trajevo {

enum class OutputFunction : std::uint8_t { sine, tanh, mean };

std::string to_string(OutputFunction f);
OutputFunction parse_output_function(const std::string& s);

struct NetworkVariant {
  OutputFunction output = OutputFunction::sine;
  bool ctrnn = false;
};

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Aggregates the summed contributions of one network output.
double aggregate_output(OutputFunction f, double sum, std::size_t contributions);

/// Executable network compiled from a Genome. Holds mutable state, so one
/// instance belongs to one evaluation thread at a time.
///
/// The signal buffer is laid out as [input values | neuron outputs]; one
/// step() reads the current inputs and the previous neuron outputs, then
/// overwrites the neuron outputs (synchronous update).
class Phenotype {
 public:
  static Phenotype compile(const Genome& g, std::size_t n_outputs, NetworkVariant variant,
                           const kernels::KernelSet& kernels = kernels::active_kernels());

  /// Convenience step taking an input map; ids missing from the map read 0.
  /// Throws EvaluationError on a non-finite input value.
  std::span<const double> step(const std::map<GeneId, double>& inputs);

  /// Fast path: zero all inputs, then set the given slots to 1.0 and step.
  /// Slot -1 entries are ignored.
  std::span<const double> step_with_hot_inputs(std::span<const int> hot_slots);

  /// Advances with whatever input values are currently stored.
  std::span<const double> step_current();

  void reset();

  /// Signal slot of an input id, or -1 if no active connection reads it.
  int input_slot(GeneId input_id) const;

  std::size_t neuron_count() const { return neuron_ids_.size(); }
  std::size_t output_count() const { return outputs_.size(); }
  std::size_t connection_count() const { return connection_count_; }
  std::span<const double> outputs() const { return outputs_; }
  std::span<const double> activations() const { return activation_; }
  std::span<const double> neuron_outputs() const;
  std::span<const GeneId> input_ids() const { return input_ids_; }
  const kernels::LaneTable& incoming() const { return incoming_; }

 private:
  NetworkVariant variant_{};
  const kernels::KernelSet* kernels_ = nullptr;
  std::vector<GeneId> input_ids_;  // sorted, one slot each
  std::vector<GeneId> neuron_ids_;
  std::vector<double> signal_;
  std::vector<double> activation_;
  std::vector<double> drive_;
  std::vector<double> tau_;
  std::vector<Transfer> transfer_;
  kernels::LaneTable incoming_;
  std::vector<std::uint32_t> output_begin_;  // CSR over neuron indices
  std::vector<std::uint32_t> output_neuron_;
  std::vector<double> outputs_;
  std::size_t connection_count_ = 0;
};

}  // namespace trajevo
