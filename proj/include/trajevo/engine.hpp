#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "trajevo/config.hpp"
#include "trajevo/selection.hpp"
#include "trajevo/task.hpp"

namespace trajevo {

struct GenerationRecord {
  std::uint64_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::size_t best_steps = 0;
  std::size_t best_neurons = 0;
  std::size_t best_connections = 0;
  std::size_t species_count = 0;
  std::size_t trajectory_segments = 0;
  std::size_t scaffold_inputs_available = 0;

  bool operator==(const GenerationRecord&) const = default;
};

struct SpeciesRecord {
  std::uint64_t generation;
  std::uint64_t species_id;
  std::size_t size;
  double mean_fitness;
  double best_fitness;
  double threshold;

  bool operator==(const SpeciesRecord&) const = default;
};

struct RunResult {
  std::vector<GenerationRecord> log;
  std::vector<SpeciesRecord> species_log;
  /// Evaluated population of the last generation.
  std::vector<Individual> final_population;
  TrajectorySpec trajectory{2, SegmentMode::fixed};
};

/// Called after each generation is evaluated, with its best individual and
/// the trajectory it was evaluated on.
using GenerationCallback =
    std::function<void(const GenerationRecord&, const Individual& best, const TrajectorySpec& trajectory)>;

/// Scaffolding inputs to make available after the best agent survived
/// `best_steps`: enough periods to cover best_steps + 1, rounded up to a
/// whole batch, never fewer than `current`.
std::size_t scaffold_inputs_needed(std::size_t best_steps, std::size_t period, std::size_t batch,
                                   std::size_t current);

/// Extends `spec` if the best survival reached the trigger fraction.
/// Returns the number of segments appended.
std::size_t maybe_extend(TrajectorySpec& spec, std::size_t best_steps, double trigger, std::size_t margin_segments,
                         Rng& rng);

/// The trajectory of a run, regenerated from its seed and segment count.
TrajectorySpec regenerate_trajectory(const ExperimentConfig& cfg, std::size_t n_segments);

/// Evaluates every individual in `pop` whose result is not settled. Uses
/// cfg.threads worker threads; results do not depend on the thread count.
void evaluate_population(std::span<Individual> pop, const ExperimentConfig& cfg, const TrajectorySpec& spec);

EvalResult evaluate_genome(const Genome& g, const ExperimentConfig& cfg, const TrajectorySpec& spec,
                           std::vector<StepRecord>* trace = nullptr);

/// One full evolutionary run; deterministic in (cfg minus runtime knobs).
RunResult run(const ExperimentConfig& cfg, const GenerationCallback& on_generation = {});

struct AggregateRow {
  std::uint64_t generation;
  std::size_t runs;
  double mean_best_fitness;
  double stderr_best_fitness;
  double mean_best_steps;
  double stderr_best_steps;
};

/// Mean and standard error (sample stddev / sqrt(n); 0 for n = 1).
std::pair<double, double> mean_and_stderr(std::span<const double> values);

std::vector<AggregateRow> aggregate(std::span<const std::vector<GenerationRecord>> logs);

/// Runs `cfg` once per seed and aggregates the logs.
struct BatchResult {
  std::vector<std::uint64_t> seeds;
  std::vector<RunResult> runs;
  std::vector<AggregateRow> aggregate;
};

BatchResult run_batch(const ExperimentConfig& cfg, std::span<const std::uint64_t> seeds,
                      const std::function<void(std::size_t, const RunResult&)>& on_run = {});

}  // namespace trajevo
