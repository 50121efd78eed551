#include "trajevo/output_files.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace trajevo {

namespace {

std::string num(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

template <typename F>
void for_each_row(std::istream& is, std::size_t columns, F&& f) {
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != columns) throw std::runtime_error("malformed CSV row: " + line);
    f(cells);
  }
}

}  // namespace

Provenance provenance_for(const ExperimentConfig& cfg, std::vector<std::string> overrides) {
  return {config_hash(cfg), cfg.seed, describe(cfg), std::move(overrides)};
}

void write_provenance(std::ostream& os, const Provenance& p) {
  os << "# tool: " << kToolVersion << '\n';
  os << "# config_hash: " << p.config_hash << '\n';
  os << "# seed: " << p.seed << '\n';
  for (const auto& o : p.overrides) os << "# override: " << o << '\n';
  for (const auto& [k, v] : p.config) os << "# config: " << k << " = " << v << '\n';
}

void write_run_log_csv(std::ostream& os, std::span<const GenerationRecord> log, const Provenance* p) {
  if (p) write_provenance(os, *p);
  os << "generation,best_fitness,mean_fitness,best_steps,best_neurons,best_connections,species_count,"
        "trajectory_segments,scaffold_inputs_available\n";
  for (const auto& r : log)
    os << r.generation << ',' << num(r.best_fitness) << ',' << num(r.mean_fitness) << ',' << r.best_steps << ','
       << r.best_neurons << ',' << r.best_connections << ',' << r.species_count << ',' << r.trajectory_segments << ','
       << r.scaffold_inputs_available << '\n';
}

std::vector<GenerationRecord> read_run_log_csv(std::istream& is) {
  std::vector<GenerationRecord> out;
  for_each_row(is, 9, [&](const std::vector<std::string>& c) {
    GenerationRecord r;
    r.generation = std::stoull(c[0]);
    r.best_fitness = std::stod(c[1]);
    r.mean_fitness = std::stod(c[2]);
    r.best_steps = std::stoull(c[3]);
    r.best_neurons = std::stoull(c[4]);
    r.best_connections = std::stoull(c[5]);
    r.species_count = std::stoull(c[6]);
    r.trajectory_segments = std::stoull(c[7]);
    r.scaffold_inputs_available = std::stoull(c[8]);
    out.push_back(r);
  });
  return out;
}

void write_species_csv(std::ostream& os, std::span<const SpeciesRecord> rows, const Provenance* p) {
  if (p) write_provenance(os, *p);
  os << "generation,species_id,size,mean_fitness,best_fitness,threshold\n";
  for (const auto& r : rows)
    os << r.generation << ',' << r.species_id << ',' << r.size << ',' << num(r.mean_fitness) << ','
       << num(r.best_fitness) << ',' << num(r.threshold) << '\n';
}

void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows, const Provenance* p) {
  if (p) write_provenance(os, *p);
  os << "generation,runs,mean_best_fitness,stderr_best_fitness,mean_best_steps,stderr_best_steps\n";
  for (const auto& r : rows)
    os << r.generation << ',' << r.runs << ',' << num(r.mean_best_fitness) << ',' << num(r.stderr_best_fitness) << ','
       << num(r.mean_best_steps) << ',' << num(r.stderr_best_steps) << '\n';
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& is) {
  std::vector<AggregateRow> out;
  for_each_row(is, 6, [&](const std::vector<std::string>& c) {
    out.push_back({std::stoull(c[0]), std::stoull(c[1]), std::stod(c[2]), std::stod(c[3]), std::stod(c[4]),
                   std::stod(c[5])});
  });
  return out;
}

void write_segments_csv(std::ostream& os, const TrajectorySpec& spec, const Provenance* p) {
  if (p) write_provenance(os, *p);
  os << "segment,direction,steps,start_x,start_y,start_z\n";
  std::size_t first = 0;
  const auto segs = spec.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Vec3 start = spec.position(first);
    os << i << ',' << segs[i].direction << ',' << segs[i].steps << ',' << num(start[0]) << ',' << num(start[1]) << ','
       << num(start[2]) << '\n';
    first += segs[i].steps;
  }
}

void write_histogram_csv(std::ostream& os, std::span<const std::size_t> counts) {
  os << "bucket,value\n";
  for (std::size_t i = 0; i < counts.size(); ++i) os << i << ',' << counts[i] << '\n';
}

void write_histogram_csv(std::ostream& os, std::span<const double> values) {
  os << "bucket,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << num(values[i]) << '\n';
}

void write_edges_csv(std::ostream& os, const Genome& g) {
  os << "source,target,weight,kind\n";
  for (const auto& c : g.connections) {
    if (!c.active) continue;
    const char* kind = c.source.is_input() ? "input" : c.target.is_output() ? "output" : "neuron";
    os << to_string(c.source) << ',' << to_string(c.target) << ',' << num(c.weight) << ',' << kind << '\n';
  }
}

std::string serialize_population(std::span<const Individual> pop) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    std::string g = serialize_genome(pop[i].genome);
    if (!g.empty() && g.back() == '\n') g.pop_back();
    out += g;
    out += i + 1 < pop.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

}  // namespace trajevo
