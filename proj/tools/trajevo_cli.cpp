// trajevo: evolve, ablate, analyze and replay trajectory-following networks.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trajevo/analysis.hpp"
#include "trajevo/config.hpp"
#include "trajevo/engine.hpp"
#include "trajevo/genome.hpp"
#include "trajevo/output_files.hpp"

namespace fs = std::filesystem;
using namespace trajevo;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string default_output_dir() {
  if (const char* env = std::getenv("TRAJEVO_OUTPUT_DIR"); env && *env) return env;
  return "trajevo_out";
}

/// Options shared by every verb that builds an ExperimentConfig.
struct ExperimentOptions {
  std::string config_path;
  std::optional<std::string> task;
  std::optional<std::size_t> generations;
  std::optional<std::size_t> population;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> selection;
  std::vector<std::string> sets;
  std::size_t threads = 1;
  std::string kernels = "auto";

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "Experiment config file (INI: [section] key = value)");
    app->add_option("--task", task, "2d, 3d-holonomic or 3d-nonholonomic");
    app->add_option("--generations", generations, "Rounds of reproduction");
    app->add_option("--population", population, "Population size");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--selection", selection, "truncation or speciation");
    app->add_option("--set", sets, "Override any config key: section.key=value")->take_all();
    app->add_option("--threads", threads, "Evaluation threads (does not affect results)");
    app->add_option("--kernels", kernels, "auto or scalar (does not affect results)");
  }

  /// Builds the config and the verbatim override list for provenance.
  ExperimentConfig build(std::vector<std::string>& overrides) const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    auto apply = [&](const std::string& flag, const std::string& key, const std::string& value) {
      apply_setting(cfg, key, value);
      overrides.push_back(flag + " " + value);
    };
    if (task) apply("--task", "task.type", *task);
    if (generations) apply("--generations", "evolution.generations", std::to_string(*generations));
    if (population) apply("--population", "evolution.population", std::to_string(*population));
    if (seed) apply("--seed", "evolution.seed", std::to_string(*seed));
    if (selection) apply("--selection", "evolution.selection", *selection);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      apply("--set", s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.threads = threads;
    apply_setting(cfg, "runtime.kernels", kernels);
    cfg.validate();
    return cfg;
  }
};

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

template <typename F>
void write_with(const fs::path& path, F&& f) {
  std::ostringstream os;
  f(os);
  write_file(path, os.str());
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

SnapshotMeta meta_for(const ExperimentConfig& cfg, const GenerationRecord& rec, const Individual& best,
                      const TrajectorySpec& trajectory) {
  return {to_string(cfg.task), cfg.seed,   rec.generation, best.fitness, static_cast<std::int64_t>(best.steps),
          trajectory.segments().size(), to_string(cfg.segment_mode)};
}

/// Executes one run and writes all of its files into `dir`.
RunResult run_into(const ExperimentConfig& cfg, const std::vector<std::string>& overrides, const fs::path& dir) {
  const Provenance prov = provenance_for(cfg, overrides);
  fs::create_directories(dir / "snapshots");
  write_file(dir / "config.ini", to_ini(cfg));
  write_with(dir / "initial_trajectory.csv",
             [&](std::ostream& os) { write_segments_csv(os, regenerate_trajectory(cfg, cfg.initial_segments), &prov); });

  std::optional<std::pair<Individual, SnapshotMeta>> last;
  RunResult result = run(cfg, [&](const GenerationRecord& rec, const Individual& best, const TrajectorySpec& traj) {
    const SnapshotMeta meta = meta_for(cfg, rec, best, traj);
    if (rec.generation > 0 && rec.generation % cfg.snapshot_interval == 0) {
      std::ostringstream name;
      name << "best_gen_" << std::setw(6) << std::setfill('0') << rec.generation << ".json";
      write_file(dir / "snapshots" / name.str(), serialize_genome(best.genome, meta));
    }
    last.emplace(best, meta);
  });

  write_with(dir / "runlog.csv", [&](std::ostream& os) { write_run_log_csv(os, result.log, &prov); });
  if (cfg.selection == SelectionScheme::speciation)
    write_with(dir / "species.csv", [&](std::ostream& os) { write_species_csv(os, result.species_log, &prov); });
  write_with(dir / "trajectory.csv", [&](std::ostream& os) { write_segments_csv(os, result.trajectory, &prov); });
  if (last) write_file(dir / "best_final.json", serialize_genome(last->first.genome, last->second));
  write_file(dir / "final_population.json", serialize_population(result.final_population));
  return result;
}

std::vector<std::uint64_t> seeds_for(const ExperimentConfig& cfg, std::size_t runs,
                                     const std::vector<std::uint64_t>& explicit_seeds) {
  if (!explicit_seeds.empty()) return explicit_seeds;
  if (runs < 1) throw ConfigError("--runs must be at least 1");
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < runs; ++i) seeds.push_back(cfg.seed + i);
  return seeds;
}

std::string run_dir_name(std::uint64_t seed) { return "run_seed" + std::to_string(seed); }

std::vector<AggregateRow> batch_into(const ExperimentConfig& cfg, const std::vector<std::string>& overrides,
                                     const std::vector<std::uint64_t>& seeds, const fs::path& dir) {
  std::vector<std::vector<GenerationRecord>> logs;
  for (std::uint64_t seed : seeds) {
    ExperimentConfig c = cfg;
    c.seed = seed;
    const RunResult r = run_into(c, overrides, dir / run_dir_name(seed));
    const auto& tail = r.log.back();
    std::cout << dir.filename().string() << " seed " << seed << ": best fitness " << tail.best_fitness << ", steps "
              << tail.best_steps << '\n';
    logs.push_back(r.log);
  }
  const auto rows = aggregate(logs);
  Provenance prov = provenance_for(cfg, overrides);
  write_with(dir / "aggregate.csv", [&](std::ostream& os) { write_aggregate_csv(os, rows, &prov); });
  return rows;
}

Genome load_genome(const std::string& path, std::optional<SnapshotMeta>& meta) {
  return deserialize_genome(read_file(path), meta);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuroevolution of trajectory-following recurrent networks"};
  app.require_subcommand(1, 1);
  std::string out_dir = default_output_dir();

  ExperimentOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run one evolutionary experiment");
  run_opts.attach(run_cmd);
  run_cmd->add_option("-o,--out", out_dir, "Output directory (default: $TRAJEVO_OUTPUT_DIR or ./trajevo_out)");

  ExperimentOptions batch_opts;
  std::size_t batch_runs = 20;
  std::vector<std::uint64_t> batch_seeds;
  auto* batch_cmd = app.add_subcommand("batch", "Run several seeds and aggregate");
  batch_opts.attach(batch_cmd);
  batch_cmd->add_option("--runs", batch_runs, "Number of runs (seeds seed, seed+1, ...)");
  batch_cmd->add_option("--seeds", batch_seeds, "Explicit seed list")->delimiter(',');
  batch_cmd->add_option("-o,--out", out_dir, "Output directory");

  ExperimentOptions ablate_opts;
  std::size_t ablate_runs = 5;
  std::vector<std::uint64_t> ablate_seeds;
  std::vector<std::string> arms;
  auto* ablate_cmd = app.add_subcommand("ablate", "Run feature-toggle arms with shared seeds");
  ablate_opts.attach(ablate_cmd);
  ablate_cmd->add_option("--arms", arms, "Comma-separated arms (default: all)")->delimiter(',');
  ablate_cmd->add_option("--runs", ablate_runs, "Runs per arm");
  ablate_cmd->add_option("--seeds", ablate_seeds, "Explicit seed list")->delimiter(',');
  ablate_cmd->add_option("-o,--out", out_dir, "Output directory");

  std::string analyze_genome;
  std::size_t bucket = 10;
  auto* analyze_cmd = app.add_subcommand("analyze", "Structural statistics of a genome");
  analyze_cmd->add_option("genome", analyze_genome, "Genome file")->required();
  analyze_cmd->add_option("--bucket", bucket, "Neurons per bucket for the output-degree histogram");
  analyze_cmd->add_option("-o,--out", out_dir, "Output directory");

  ExperimentOptions replay_opts;
  std::string replay_genome;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "Re-simulate a genome and export its trajectory");
  replay_cmd->add_option("genome", replay_genome, "Genome snapshot file")->required();
  replay_opts.attach(replay_cmd);
  replay_cmd->add_option("-o,--out", replay_out, "Trajectory CSV path (default: <out>/replay.csv)");

  std::string edges_genome;
  std::string edges_out;
  auto* edges_cmd = app.add_subcommand("export-edges", "Write a genome's active connections as an edge list");
  edges_cmd->add_option("genome", edges_genome, "Genome file")->required();
  edges_cmd->add_option("-o,--out", edges_out, "Edge list CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      std::vector<std::string> overrides;
      const ExperimentConfig cfg = run_opts.build(overrides);
      const RunResult r = run_into(cfg, overrides, out_dir);
      const auto& tail = r.log.back();
      std::cout << "final best fitness " << tail.best_fitness << ", steps " << tail.best_steps << '\n';
    } else if (*batch_cmd) {
      std::vector<std::string> overrides;
      const ExperimentConfig cfg = batch_opts.build(overrides);
      const auto rows = batch_into(cfg, overrides, seeds_for(cfg, batch_runs, batch_seeds), out_dir);
      const auto& tail = rows.back();
      std::cout << "mean best steps " << tail.mean_best_steps << " +/- " << tail.stderr_best_steps << '\n';
    } else if (*ablate_cmd) {
      std::vector<std::string> overrides;
      const ExperimentConfig base = ablate_opts.build(overrides);
      if (arms.empty()) arms = ablation_arms();
      std::vector<ExperimentConfig> configs;
      for (const auto& arm : arms) configs.push_back(apply_arm(base, arm));
      const auto seeds = seeds_for(base, ablate_runs, ablate_seeds);
      for (std::size_t i = 0; i < arms.size(); ++i) {
        auto arm_overrides = overrides;
        arm_overrides.push_back("--arm " + arms[i]);
        const auto rows = batch_into(configs[i], arm_overrides, seeds, fs::path(out_dir) / arms[i]);
        std::cout << arms[i] << ": mean best steps " << rows.back().mean_best_steps << " +/- "
                  << rows.back().stderr_best_steps << '\n';
      }
    } else if (*analyze_cmd) {
      std::optional<SnapshotMeta> meta;
      const Genome g = load_genome(analyze_genome, meta);
      const NetworkStats stats = network_stats(g);
      const AgeHistograms h = age_histograms(g, bucket);
      write_stats(std::cout, stats);
      write_with(fs::path(out_dir) / "stats.txt", [&](std::ostream& os) { write_stats(os, stats); });
      write_with(fs::path(out_dir) / "span_histogram.csv",
                 [&](std::ostream& os) { write_histogram_csv(os, std::span<const std::size_t>(h.span_counts)); });
      write_with(fs::path(out_dir) / "output_degree_by_age.csv", [&](std::ostream& os) {
        write_histogram_csv(os, std::span<const double>(h.output_degree_means));
      });
    } else if (*replay_cmd) {
      std::optional<SnapshotMeta> meta;
      const Genome g = load_genome(replay_genome, meta);
      std::vector<std::string> overrides;
      ExperimentConfig cfg = replay_opts.build(overrides);
      std::size_t segments = cfg.initial_segments;
      if (meta) {
        if (meta->task != to_string(cfg.task))
          throw UsageError("dimension mismatch: genome was evolved on task '" + meta->task + "' but config selects '" +
                           to_string(cfg.task) + "'");
        if (!replay_opts.seed) cfg.seed = meta->seed;
        if (!meta->segment_mode.empty()) cfg.segment_mode = parse_segment_mode(meta->segment_mode);
        segments = meta->trajectory_segments;
      }
      try {
        g.validate(output_count(cfg.task));
      } catch (const GenomeError& e) {
        throw UsageError("dimension mismatch: genome does not fit task '" + to_string(cfg.task) + "': " + e.what());
      }
      const TrajectorySpec spec = regenerate_trajectory(cfg, segments);
      std::vector<StepRecord> trace;
      const EvalResult r = evaluate_genome(g, cfg, spec, &trace);
      const fs::path path = replay_out.empty() ? fs::path(out_dir) / "replay.csv" : fs::path(replay_out);
      write_with(path, [&](std::ostream& os) { write_trajectory_csv(os, spec.dim(), trace); });
      std::cout << std::setprecision(17) << "fitness " << r.fitness << ", steps " << r.steps_survived << '\n';
      if (meta && (r.fitness != meta->fitness || static_cast<std::int64_t>(r.steps_survived) != meta->steps))
        std::cerr << "warning: replayed result differs from the snapshot metadata (fitness " << meta->fitness
                  << ", steps " << meta->steps << ")\n";
    } else if (*edges_cmd) {
      std::optional<SnapshotMeta> meta;
      const Genome g = load_genome(edges_genome, meta);
      if (edges_out.empty())
        write_edges_csv(std::cout, g);
      else
        write_with(edges_out, [&](std::ostream& os) { write_edges_csv(os, g); });
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const GenomeError& e) {
    std::cerr << "genome error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
