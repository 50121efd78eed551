#include "trajevo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace trajevo {

std::size_t scaffold_inputs_needed(std::size_t best_steps, std::size_t period, std::size_t batch,
                                   std::size_t current) {
  const std::size_t periods = (best_steps + period) / period;  // ceil((best_steps + 1) / period)
  const std::size_t rounded = (periods + batch - 1) / batch * batch;
  return std::max(current, rounded);
}

std::size_t maybe_extend(TrajectorySpec& spec, std::size_t best_steps, double trigger, std::size_t margin_segments,
                         Rng& rng) {
  if (static_cast<double>(best_steps) < trigger * static_cast<double>(spec.total_steps())) return 0;
  const std::size_t goal = best_steps + margin_segments * kFixedSegmentSteps;
  std::size_t added = 0;
  while (spec.total_steps() < goal) {
    extend_trajectory(spec, 1, rng);
    ++added;
  }
  return added;
}

TrajectorySpec regenerate_trajectory(const ExperimentConfig& cfg, std::size_t n_segments) {
  Rng rng = make_stream(cfg.seed, StreamTag::trajectory);
  return generate_trajectory(dimensions(cfg.task), n_segments, cfg.segment_mode, rng);
}

namespace {

const kernels::KernelSet& kernels_for(const ExperimentConfig& cfg) {
  return cfg.kernels == "scalar" ? kernels::scalar_kernels() : kernels::active_kernels();
}

NetworkVariant variant_for(const ExperimentConfig& cfg) { return {cfg.features.output, cfg.features.ctrnn}; }

}  // namespace

EvalResult evaluate_genome(const Genome& g, const ExperimentConfig& cfg, const TrajectorySpec& spec,
                           std::vector<StepRecord>* trace) {
  Phenotype net = Phenotype::compile(g, output_count(cfg.task), variant_for(cfg), kernels_for(cfg));
  return evaluate(net, spec, cfg.task, cfg.scaffold_period, spec.total_steps(), trace);
}

void evaluate_population(std::span<Individual> pop, const ExperimentConfig& cfg, const TrajectorySpec& spec) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!pop[i].settled) todo.push_back(i);
  auto work = [&](std::size_t i) {
    const EvalResult r = evaluate_genome(pop[i].genome, cfg, spec);
    pop[i].fitness = r.fitness;
    pop[i].steps = r.steps_survived;
    pop[i].settled = r.steps_survived < spec.total_steps();
  };
  const std::size_t n_threads = std::min(cfg.threads, todo.size());
  if (n_threads <= 1) {
    for (std::size_t i : todo) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < n_threads; ++t)
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < todo.size(); k = next++) work(todo[k]);
    });
}

RunResult run(const ExperimentConfig& cfg, const GenerationCallback& on_generation) {
  cfg.validate();
  const std::size_t n_outputs = output_count(cfg.task);
  const bool speciation = cfg.selection == SelectionScheme::speciation;

  RunResult result;
  Rng trajectory_rng = make_stream(cfg.seed, StreamTag::trajectory);
  result.trajectory = generate_trajectory(dimensions(cfg.task), cfg.initial_segments, cfg.segment_mode, trajectory_rng);
  TrajectorySpec& trajectory = result.trajectory;

  InnovationCounter counter;
  std::vector<GeneId> ancestor_inputs{kBiasInput};
  if (cfg.features.scaffolding)
    for (GeneId k = 0; k < kInitialScaffoldInputs; ++k) ancestor_inputs.push_back(kFirstScaffoldInput + k);
  Rng ancestor_rng = make_stream(cfg.seed, StreamTag::ancestor);
  Genome ancestor = make_common_ancestor(n_outputs, ancestor_inputs, counter, ancestor_rng);
  ancestor.id = 1;
  std::uint64_t next_genome_id = 2;

  std::size_t scaffold_available = cfg.features.scaffolding ? static_cast<std::size_t>(kInitialScaffoldInputs) : 0;
  auto context = [&] {
    return variation_context(cfg, kFirstScaffoldInput + static_cast<GeneId>(scaffold_available) - 1);
  };

  std::vector<Individual> pop;
  pop.reserve(cfg.population);
  pop.push_back({ancestor, 0.0, 0, false});
  {
    const VariationContext ctx = context();
    for (std::size_t i = 1; i < cfg.population; ++i) {
      Rng rng = make_stream(cfg.seed, StreamTag::mutation, 0, i);
      Individual ind{mutate(ancestor, ctx, counter, rng).genome, 0.0, 0, false};
      ind.genome.id = next_genome_id++;
      pop.push_back(std::move(ind));
    }
  }

  SpeciationState species(cfg.speciation);
  for (std::uint64_t gen = 0;; ++gen) {
    evaluate_population(pop, cfg, trajectory);
    const auto ranking = rank_by_fitness(pop);
    const Individual& best = pop[ranking.front()];

    if (speciation) {
      assign_species(pop, species, gen);
      for (const auto& s : species.species) {
        double sum = 0.0, top = 0.0;
        for (std::size_t m : s.members) {
          sum += pop[m].fitness;
          top = std::max(top, pop[m].fitness);
        }
        result.species_log.push_back(
            {gen, s.id, s.members.size(), sum / static_cast<double>(s.members.size()), top, species.threshold});
      }
    }

    GenerationRecord rec;
    rec.generation = gen;
    rec.best_fitness = best.fitness;
    double total = 0.0;
    for (const auto& ind : pop) total += ind.fitness;
    rec.mean_fitness = total / static_cast<double>(pop.size());
    rec.best_steps = best.steps;
    rec.best_neurons = best.genome.neurons.size();
    rec.best_connections = best.genome.connections.size();
    rec.species_count = speciation ? species.species.size() : 0;
    rec.trajectory_segments = trajectory.segments().size();
    rec.scaffold_inputs_available = scaffold_available;
    result.log.push_back(rec);
    if (on_generation) on_generation(rec, best, trajectory);

    if (cfg.features.scaffolding)
      scaffold_available =
          scaffold_inputs_needed(best.steps, cfg.scaffold_period, cfg.scaffold_batch, scaffold_available);
    maybe_extend(trajectory, best.steps, cfg.elongation_trigger, cfg.elongation_margin, trajectory_rng);

    if (gen == cfg.generations) break;

    std::vector<ReproductionSlot> slots;
    if (speciation) {
      adjust_threshold(species);
      Rng selection_rng = make_stream(cfg.seed, StreamTag::selection, gen);
      slots = allocate_and_reproduce(pop, species, gen, selection_rng);
    } else {
      slots = select_truncation(pop, cfg.truncation_fraction);
    }

    const VariationContext ctx = context();
    std::vector<Individual> next;
    next.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Individual& parent = pop[slots[i].parent];
      if (slots[i].elite) {
        next.push_back(parent);
        continue;
      }
      Rng rng = make_stream(cfg.seed, StreamTag::mutation, gen + 1, i);
      Individual child{mutate(parent.genome, ctx, counter, rng).genome, 0.0, 0, false};
      child.genome.id = next_genome_id++;
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }
  result.final_population = std::move(pop);
  return result;
}

std::pair<double, double> mean_and_stderr(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::vector<AggregateRow> aggregate(std::span<const std::vector<GenerationRecord>> logs) {
  std::vector<AggregateRow> rows;
  if (logs.empty()) return rows;
  std::size_t len = logs.front().size();
  for (const auto& l : logs) len = std::min(len, l.size());
  std::vector<double> fit(logs.size()), steps(logs.size());
  for (std::size_t g = 0; g < len; ++g) {
    for (std::size_t r = 0; r < logs.size(); ++r) {
      fit[r] = logs[r][g].best_fitness;
      steps[r] = static_cast<double>(logs[r][g].best_steps);
    }
    const auto [mf, sf] = mean_and_stderr(fit);
    const auto [ms, ss] = mean_and_stderr(steps);
    rows.push_back({logs.front()[g].generation, logs.size(), mf, sf, ms, ss});
  }
  return rows;
}

BatchResult run_batch(const ExperimentConfig& cfg, std::span<const std::uint64_t> seeds,
                      const std::function<void(std::size_t, const RunResult&)>& on_run) {
  if (seeds.empty()) throw ConfigError("a batch needs at least one run");
  BatchResult batch;
  std::vector<std::vector<GenerationRecord>> logs;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    ExperimentConfig c = cfg;
    c.seed = seeds[i];
    RunResult r = run(c);
    if (on_run) on_run(i, r);
    logs.push_back(r.log);
    batch.seeds.push_back(seeds[i]);
    r.final_population.clear();
    batch.runs.push_back(std::move(r));
  }
  batch.aggregate = aggregate(logs);
  return batch;
}

}  // namespace trajevo
