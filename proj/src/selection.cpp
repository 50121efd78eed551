#include "trajevo/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trajevo {

std::vector<std::size_t> rank_by_fitness(std::span<const Individual> pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pop[a].fitness != pop[b].fitness) return pop[a].fitness > pop[b].fitness;
    // Newer genome first, so fitness-neutral offspring can displace tied elites.
    return pop[a].genome.id > pop[b].genome.id;
  });
  return order;
}

std::vector<ReproductionSlot> select_truncation(std::span<const Individual> pop, double fraction) {
  if (pop.empty()) return {};
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("truncation fraction must lie in (0, 1]");
  const auto order = rank_by_fitness(pop);
  const std::size_t n = pop.size();
  // Guard against 0.05 * 300 landing a hair above 15.
  const double raw = fraction * static_cast<double>(n);
  std::size_t parents = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  parents = std::clamp<std::size_t>(parents, 1, n);
  std::vector<ReproductionSlot> slots;
  slots.reserve(n);
  for (std::size_t i = 0; i < parents; ++i) slots.push_back({order[i], true});
  for (std::size_t j = 0; j + parents < n; ++j) slots.push_back({order[j % parents], false});
  return slots;
}

double genome_distance(const Genome& a, const Genome& b, double c_r, double c_w) {
  std::size_t disjoint = 0;
  double weight_diff = 0.0;
  auto ia = a.connections.begin();
  auto ib = b.connections.begin();
  while (ia != a.connections.end() && ib != b.connections.end()) {
    if (ia->innovation == ib->innovation) {
      weight_diff += std::abs(ia->weight - ib->weight);
      ++ia;
      ++ib;
    } else if (ia->innovation < ib->innovation) {
      ++disjoint;
      ++ia;
    } else {
      ++disjoint;
      ++ib;
    }
  }
  disjoint += static_cast<std::size_t>(a.connections.end() - ia) + static_cast<std::size_t>(b.connections.end() - ib);
  return c_r * static_cast<double>(disjoint) + c_w * weight_diff;
}

void assign_species(std::span<const Individual> pop, SpeciationState& state, std::uint64_t generation) {
  for (auto& s : state.species) s.members.clear();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    bool placed = false;
    for (auto& s : state.species) {
      if (genome_distance(pop[i].genome, s.representative, state.params.c_r, state.params.c_w) < state.threshold) {
        s.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      Species s;
      s.id = state.next_species_id++;
      s.representative = pop[i].genome;
      s.members.push_back(i);
      s.best_fitness_ever = pop[i].fitness;
      s.last_improvement_generation = generation;
      state.species.push_back(std::move(s));
    }
  }
  std::erase_if(state.species, [](const Species& s) { return s.members.empty(); });
  for (auto& s : state.species) {
    std::size_t best = s.members.front();
    for (std::size_t m : s.members) {
      const auto& cand = pop[m];
      if (cand.fitness > pop[best].fitness ||
          (cand.fitness == pop[best].fitness && cand.genome.id > pop[best].genome.id))
        best = m;
    }
    if (pop[best].fitness > s.best_fitness_ever) {
      s.best_fitness_ever = pop[best].fitness;
      s.last_improvement_generation = generation;
    }
    s.representative = pop[best].genome;
  }
}

std::vector<std::size_t> apportion(std::span<const double> shares, std::size_t total) {
  const std::size_t k = shares.size();
  std::vector<std::size_t> counts(k, 0);
  if (k == 0) return counts;
  double sum = 0.0;
  for (double s : shares) sum += s;
  std::vector<double> quota(k);
  for (std::size_t i = 0; i < k; ++i)
    quota[i] = sum > 0.0 ? shares[i] / sum * static_cast<double>(total)
                         : static_cast<double>(total) / static_cast<double>(k);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(quota[i]));
    assigned += counts[i];
  }
  if (assigned > total) {  // rounding noise only
    for (std::size_t i = k; i-- > 0 && assigned > total;)
      if (counts[i] > 0) --counts[i], --assigned;
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
  });
  for (std::size_t j = 0; assigned < total; j = (j + 1) % k) {
    ++counts[order[j]];
    ++assigned;
  }
  return counts;
}

std::vector<ReproductionSlot> allocate_and_reproduce(std::span<const Individual> pop, SpeciationState& state,
                                                     std::uint64_t generation, Rng& rng,
                                                     std::vector<SpeciesAllocation>* report) {
  if (state.species.empty()) throw ConfigError("allocate_and_reproduce needs at least one species");
  const auto ranking = rank_by_fitness(pop);
  std::vector<std::size_t> rank_of(pop.size());
  for (std::size_t r = 0; r < ranking.size(); ++r) rank_of[ranking[r]] = r;
  const std::size_t global_best = ranking.front();
  const auto& p = state.params;

  const std::size_t k = state.species.size();
  std::vector<double> means(k), adjusted(k);
  std::size_t best_species = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const auto& sp = state.species[s];
    double sum = 0.0;
    for (std::size_t m : sp.members) sum += pop[m].fitness;
    means[s] = sum / static_cast<double>(sp.members.size());
    const bool holds_best = std::find(sp.members.begin(), sp.members.end(), global_best) != sp.members.end();
    if (holds_best) best_species = s;
    const bool stagnant = generation > sp.last_improvement_generation + p.stagnation_limit;
    adjusted[s] = stagnant && !holds_best ? means[s] * p.stagnation_penalty : means[s];
  }

  auto counts = apportion(adjusted, pop.size());
  if (counts[best_species] == 0) {
    const auto donor = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    --counts[donor];
    ++counts[best_species];
  }

  std::vector<ReproductionSlot> slots;
  slots.reserve(pop.size());
  for (std::size_t s = 0; s < k; ++s) {
    if (report) report->push_back({state.species[s].id, means[s], adjusted[s], counts[s]});
    if (counts[s] == 0) continue;
    std::vector<std::size_t> members = state.species[s].members;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return rank_of[a] < rank_of[b]; });
    const auto culled = static_cast<std::size_t>(std::floor(p.cull_fraction * static_cast<double>(members.size())));
    members.resize(members.size() - culled);
    std::size_t remaining = counts[s];
    if (remaining >= p.elite_min_offspring || s == best_species) {
      slots.push_back({members.front(), true});
      --remaining;
    }
    for (; remaining > 0; --remaining) slots.push_back({members[pick(rng, members.size())], false});
  }
  return slots;
}

void adjust_threshold(SpeciationState& state) {
  const auto n = state.species.size();
  if (n > state.params.target_max)
    state.threshold += state.params.threshold_step;
  else if (n < state.params.target_min)
    state.threshold -= state.params.threshold_step;
  state.threshold = std::max(state.threshold, state.params.threshold_floor);
}

}  // namespace trajevo
