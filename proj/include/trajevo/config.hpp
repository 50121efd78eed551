#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trajevo/network.hpp"
#include "trajevo/selection.hpp"
#include "trajevo/task.hpp"
#include "trajevo/variation.hpp"

namespace trajevo {

enum class SelectionScheme : std::uint8_t { truncation, speciation };

std::string to_string(SelectionScheme s);

struct FeatureFlags {
  bool freezing = true;
  bool scaffolding = true;
  bool new_pathway = true;
  OutputFunction output = OutputFunction::sine;
  bool ctrnn = false;
  bool sine_hidden = false;
};

struct ExperimentConfig {
  TaskKind task = TaskKind::planar;
  SegmentMode segment_mode = SegmentMode::fixed;
  std::size_t initial_segments = 50;
  std::size_t scaffold_period = 20;

  std::size_t population = 300;
  /// Rounds of reproduction; the log holds generations 0..generations.
  std::size_t generations = 300;
  std::uint64_t seed = 1;
  SelectionScheme selection = SelectionScheme::truncation;
  double truncation_fraction = 0.05;
  std::size_t c_m = 25;
  std::size_t scaffold_batch = 5;
  /// Extend once the best agent survives this fraction of the trajectory...
  double elongation_trigger = 0.9;
  /// ...until it is this many nominal segments longer than the best survival.
  std::size_t elongation_margin = 20;

  FeatureFlags features;
  OperatorTable operators;
  SpeciationParams speciation;

  std::size_t snapshot_interval = 100;

  // Runtime knobs. They never change results and are not part of the echo.
  std::size_t threads = 1;
  std::string kernels = "auto";

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Sets `section.key` from its textual value. Throws ConfigError naming the
/// key for unknown keys or unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads an INI-style file ([section] / key = value) on top of `base`.
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

/// Every result-relevant setting as (key, value), in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& cfg);

/// The describe() listing rendered as an INI file readable by load_config_file.
std::string to_ini(const ExperimentConfig& cfg);

/// FNV-1a hash of to_ini(), as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Named feature-toggle arms for ablation studies.
const std::vector<std::string>& ablation_arms();

/// `base` with the arm's toggles applied. Throws ConfigError listing the
/// valid arms for an unknown name.
ExperimentConfig apply_arm(const ExperimentConfig& base, const std::string& arm);

/// Operator table and gate settings implied by the feature flags.
VariationContext variation_context(const ExperimentConfig& cfg, GeneId available_scaffold_max);

}  // namespace trajevo
