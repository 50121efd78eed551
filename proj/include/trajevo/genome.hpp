#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajevo/rng.hpp"

namespace trajevo {

using GeneId = std::int64_t;

/// Input id of the constant bias input.
inline constexpr GeneId kBiasInput = 0;
/// Input ids at or above this value are scaffolding inputs.
inline constexpr GeneId kFirstScaffoldInput = 1000;
/// Scaffolding inputs handed to the common ancestor (1000..1004).
inline constexpr GeneId kInitialScaffoldInputs = 5;

inline constexpr double kWeightLimit = 3.0;

inline bool is_scaffold_input(GeneId input_id) { return input_id >= kFirstScaffoldInput; }

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenomeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EndpointKind : std::uint8_t { input, neuron, output };

/// A connection endpoint. Inputs, neurons and outputs live in separate id spaces.
struct Endpoint {
  EndpointKind kind = EndpointKind::neuron;
  GeneId id = 0;

  static constexpr Endpoint input(GeneId id) { return {EndpointKind::input, id}; }
  static constexpr Endpoint neuron(GeneId id) { return {EndpointKind::neuron, id}; }
  static constexpr Endpoint output(GeneId id) { return {EndpointKind::output, id}; }

  bool is_input() const { return kind == EndpointKind::input; }
  bool is_neuron() const { return kind == EndpointKind::neuron; }
  bool is_output() const { return kind == EndpointKind::output; }

  auto operator<=>(const Endpoint&) const = default;
};

std::string to_string(Endpoint e);

enum class Transfer : std::uint8_t { tanh, sine };

struct NeuronGene {
  GeneId id = 0;
  double tau = 1.0;
  Transfer transfer = Transfer::tanh;

  bool operator==(const NeuronGene&) const = default;
};

struct ConnectionGene {
  GeneId innovation = 0;
  Endpoint source;
  Endpoint target;
  double weight = 0.0;
  bool active = true;

  bool to_output() const { return target.is_output(); }
  bool operator==(const ConnectionGene&) const = default;
};

/// Genotype. Both gene lists are kept in creation order, which is also
/// ascending id order, so the position of a gene is its age rank.
struct Genome {
  std::uint64_t id = 0;
  std::vector<NeuronGene> neurons;
  std::vector<ConnectionGene> connections;

  const NeuronGene* find_neuron(GeneId neuron_id) const;
  bool has_connection(Endpoint source, Endpoint target) const;

  /// Highest scaffolding input id referenced by any connection gene
  /// (active or not).
  std::optional<GeneId> highest_scaffold_input() const;

  std::size_t active_connection_count() const;

  /// Throws GenomeError on the first violated structural invariant.
  void validate(std::size_t n_outputs) const;

  bool operator==(const Genome&) const = default;
};

/// Run-wide source of innovation numbers. Neuron and connection genes draw
/// from the same counter.
class InnovationCounter {
 public:
  explicit InnovationCounter(GeneId first = 1) : next_(first) {}
  GeneId next() { return next_++; }
  GeneId peek() const { return next_; }
  /// Moves the counter past every id used in `g`.
  void advance_past(const Genome& g);

 private:
  GeneId next_;
};

/// One neuron per output, wired to it with weight 1; each (neuron, input)
/// pair is connected with probability 0.5 and a uniform weight.
Genome make_common_ancestor(std::size_t n_outputs, std::span<const GeneId> inputs,
                            InnovationCounter& counter, Rng& rng);

/// Genes open to mutation under freezing. Ids are ascending.
struct MutableWindow {
  std::vector<GeneId> neurons;
  std::vector<GeneId> connections;
  /// Neurons at age ranks c_m+1 .. 2c_m; may only act as sources of new
  /// connections into the window.
  std::vector<GeneId> bridge_sources;

  bool neuron_mutable(GeneId id) const;
  bool connection_mutable(GeneId innovation) const;
  bool bridge(GeneId id) const;
};

MutableWindow mutable_window(const Genome& g, std::size_t c_m);
/// Every gene mutable, no bridge set (freezing disabled).
MutableWindow full_window(const Genome& g);

// ---- genome file format ---------------------------------------------------

/// Optional metadata stored alongside a genome snapshot.
struct SnapshotMeta {
  std::string task;
  std::uint64_t seed = 0;
  std::uint64_t generation = 0;
  double fitness = 0.0;
  std::int64_t steps = 0;
  std::size_t trajectory_segments = 0;
  std::string segment_mode;
};

std::string serialize_genome(const Genome& g);
std::string serialize_genome(const Genome& g, const SnapshotMeta& meta);
/// Throws GenomeError ("... at byte N") on malformed text.
Genome deserialize_genome(const std::string& text);
Genome deserialize_genome(const std::string& text, std::optional<SnapshotMeta>& meta);

}  // namespace trajevo
