#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trajevo/genome.hpp"
#include "trajevo/rng.hpp"

namespace trajevo {

struct Individual {
  Genome genome;
  double fitness = 0.0;
  std::size_t steps = 0;
  /// True once evaluated and the agent died before the trajectory ended; such
  /// a result does not change when the trajectory is extended.
  bool settled = false;
};

/// One slot of the next generation: copy of `parent`, mutated unless elite.
struct ReproductionSlot {
  std::size_t parent = 0;
  bool elite = false;
  bool operator==(const ReproductionSlot&) const = default;
};

/// Indices sorted best first: fitness descending, then higher (newer) genome id.
std::vector<std::size_t> rank_by_fitness(std::span<const Individual> pop);

/// Top ceil(fraction * N) become parents; each is copied once unchanged,
/// remaining slots are offspring assigned round-robin over the ranked parents.
std::vector<ReproductionSlot> select_truncation(std::span<const Individual> pop, double fraction);

/// c_r * (connections present in one genome only) + c_w * sum |w1 - w2| over
/// shared innovation numbers.
double genome_distance(const Genome& a, const Genome& b, double c_r = 1.0, double c_w = 1.0);

struct Species {
  std::uint64_t id = 0;
  Genome representative;
  std::vector<std::size_t> members;
  double best_fitness_ever = 0.0;
  std::uint64_t last_improvement_generation = 0;
};

struct SpeciationParams {
  double initial_threshold = 4.0;
  std::size_t target_min = 10;
  std::size_t target_max = 20;
  double threshold_step = 0.3;
  double threshold_floor = 0.1;
  double c_r = 1.0;
  double c_w = 1.0;
  std::uint64_t stagnation_limit = 200;
  double stagnation_penalty = 0.01;
  double cull_fraction = 0.6;
  std::size_t elite_min_offspring = 5;
};

struct SpeciationState {
  SpeciationParams params;
  double threshold = 4.0;
  std::vector<Species> species;
  std::uint64_t next_species_id = 1;

  explicit SpeciationState(SpeciationParams p = {}) : params(p), threshold(p.initial_threshold) {}
};

/// Walks the population in order; each individual joins the first species
/// whose representative is closer than the threshold, or founds a new one.
/// Empty species are dropped; survivors then take their best member as the
/// representative for the next assignment.
void assign_species(std::span<const Individual> pop, SpeciationState& state, std::uint64_t generation);

/// Largest-remainder apportionment of `total` slots proportional to
/// `shares`; uniform if every share is zero. Ties go to the lower index.
std::vector<std::size_t> apportion(std::span<const double> shares, std::size_t total);

struct SpeciesAllocation {
  std::uint64_t species_id;
  double mean_fitness;
  double adjusted_mean;
  std::size_t offspring;
};

/// Builds the next generation's slots from an assigned population. Also
/// reports the per-species allocation when `report` is non-null.
std::vector<ReproductionSlot> allocate_and_reproduce(std::span<const Individual> pop, SpeciationState& state,
                                                     std::uint64_t generation, Rng& rng,
                                                     std::vector<SpeciesAllocation>* report = nullptr);

/// Moves the threshold one step toward the target species-count range.
void adjust_threshold(SpeciationState& state);

}  // namespace trajevo
