#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajevo/analysis.hpp"
#include "trajevo/config.hpp"
#include "trajevo/engine.hpp"

namespace trajevo {

inline constexpr const char* kToolVersion = "trajevo 1.0.0";

/// `#`-prefixed comment lines opening every CSV the tools write.
struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  /// Command-line overrides, verbatim.
  std::vector<std::string> overrides;
};

Provenance provenance_for(const ExperimentConfig& cfg, std::vector<std::string> overrides = {});

void write_provenance(std::ostream& os, const Provenance& p);

void write_run_log_csv(std::ostream& os, std::span<const GenerationRecord> log, const Provenance* p = nullptr);
/// Reads the data rows back; comment lines are skipped.
std::vector<GenerationRecord> read_run_log_csv(std::istream& is);

void write_species_csv(std::ostream& os, std::span<const SpeciesRecord> rows, const Provenance* p = nullptr);
void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows, const Provenance* p = nullptr);
std::vector<AggregateRow> read_aggregate_csv(std::istream& is);

/// Segment list of a trajectory: index, direction, steps, start coordinates.
void write_segments_csv(std::ostream& os, const TrajectorySpec& spec, const Provenance* p = nullptr);

void write_histogram_csv(std::ostream& os, std::span<const std::size_t> counts);
void write_histogram_csv(std::ostream& os, std::span<const double> values);

/// Active connections as source,target,weight,kind.
void write_edges_csv(std::ostream& os, const Genome& g);

/// Population archive: JSON array of genomes.
std::string serialize_population(std::span<const Individual> pop);

}  // namespace trajevo
