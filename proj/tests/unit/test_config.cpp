#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "trajevo/config.hpp"

using namespace trajevo;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("trajevo_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("defaults") {
  const ExperimentConfig c;
  CHECK(c.population == 300);
  CHECK(c.generations == 300);
  CHECK(c.truncation_fraction == 0.05);
  CHECK(c.c_m == 25);
  CHECK(c.scaffold_period == 20);
  CHECK(c.features.output == OutputFunction::sine);
  CHECK(c.features.freezing);
  CHECK(c.features.scaffolding);
  CHECK(c.features.new_pathway);
  CHECK_FALSE(c.features.ctrnn);
  c.validate();
}

TEST_CASE("settings by key") {
  ExperimentConfig c;
  apply_setting(c, "task.type", "3d-nonholonomic");
  apply_setting(c, "evolution.population", "50");
  apply_setting(c, "features.output", "tanh");
  apply_setting(c, "features.freezing", "off");
  apply_setting(c, "operators.connect_io", "0.05");
  apply_setting(c, "speciation.threshold", "3.5");
  apply_setting(c, "evolution.selection", "speciation");
  CHECK(c.task == TaskKind::nonholonomic3d);
  CHECK(c.population == 50);
  CHECK(c.features.output == OutputFunction::tanh);
  CHECK_FALSE(c.features.freezing);
  CHECK(c.operators.connect_io == 0.05);
  CHECK(c.speciation.initial_threshold == 3.5);
  CHECK(c.selection == SelectionScheme::speciation);
}

TEST_CASE("bad settings name the key") {
  ExperimentConfig c;
  CHECK_THROWS_WITH_AS(apply_setting(c, "evolution.popsize", "3"), doctest::Contains("evolution.popsize"), ConfigError);
  CHECK_THROWS_WITH_AS(apply_setting(c, "evolution.population", "many"), doctest::Contains("evolution.population"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(apply_setting(c, "features.freezing", "maybe"), doctest::Contains("features.freezing"),
                       ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "features.output", "relu"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "runtime.kernels", "sse"), ConfigError);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.population = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("evolution.population"), ConfigError);
  c = {};
  c.truncation_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.operators.connect_neurons = 0.9;
  c.operators.connect_io = 0.9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config file") {
  SUBCASE("missing file") { CHECK_THROWS_AS(load_config_file("/nonexistent/trajevo.ini"), ConfigError); }
  SUBCASE("keys outside a section") {
    const auto path = temp_file("nosection.ini", "population = 3\n");
    CHECK_THROWS_AS(load_config_file(path), ConfigError);
  }
  SUBCASE("unknown key in file") {
    const auto path = temp_file("unknown.ini", "[evolution]\nspeed = 3\n");
    CHECK_THROWS_WITH_AS(load_config_file(path), doctest::Contains("evolution.speed"), ConfigError);
  }
  SUBCASE("file overrides its base") {
    const auto path = temp_file("partial.ini", "[evolution]\nseed = 9\n\n[features]\nctrnn = true\n");
    ExperimentConfig base;
    base.population = 40;
    const auto c = load_config_file(path, base);
    CHECK(c.seed == 9);
    CHECK(c.features.ctrnn);
    CHECK(c.population == 40);
  }
}

TEST_CASE("INI echo round-trips") {
  ExperimentConfig c;
  c.seed = 123;
  c.features.output = OutputFunction::mean;
  c.operators.weight_sigma = 0.123456789012345;
  c.segment_mode = SegmentMode::uniform;
  c.selection = SelectionScheme::speciation;
  const auto path = temp_file("echo.ini", to_ini(c));
  const auto back = load_config_file(path);
  CHECK(to_ini(back) == to_ini(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.operators.weight_sigma == c.operators.weight_sigma);
}

TEST_CASE("hash tracks result-relevant settings only") {
  ExperimentConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.threads = 8;
  b.kernels = "scalar";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("ablation arms") {
  const ExperimentConfig base;
  CHECK(ablation_arms().size() == 11);
  for (const auto& arm : ablation_arms()) apply_arm(base, arm).validate();

  SUBCASE("single-toggle arms differ from the base in exactly one setting") {
    const std::map<std::string, std::string> toggles{{"no-freezing", "features.freezing"},
                                                      {"no-scaffolding", "features.scaffolding"},
                                                      {"no-new-pathway", "features.new_pathway"},
                                                      {"tanh-output", "features.output"},
                                                      {"mean-output", "features.output"},
                                                      {"sine-hidden", "features.sine_hidden"},
                                                      {"ctrnn", "features.ctrnn"}};
    const auto before = describe(base);
    for (const auto& [arm, key] : toggles) {
      const auto after = describe(apply_arm(base, arm));
      REQUIRE(after.size() == before.size());
      std::vector<std::string> diff;
      for (std::size_t i = 0; i < before.size(); ++i)
        if (before[i] != after[i]) diff.push_back(after[i].first);
      CHECK(diff == std::vector<std::string>{key});
    }
  }
  SUBCASE("neat-speciation") {
    const auto c = apply_arm(base, "neat-speciation");
    CHECK_FALSE(c.features.freezing);
    CHECK_FALSE(c.features.scaffolding);
    CHECK_FALSE(c.features.new_pathway);
    CHECK(c.features.output == OutputFunction::tanh);
    CHECK(c.selection == SelectionScheme::speciation);
    CHECK(apply_arm(base, "neat-truncation").selection == SelectionScheme::truncation);
  }
  SUBCASE("unknown arm lists the valid ones") {
    CHECK_THROWS_WITH_AS(apply_arm(base, "no-brain"), doctest::Contains("neat-speciation"), ConfigError);
  }
}

TEST_CASE("variation context follows the feature flags") {
  ExperimentConfig c;
  c.features.scaffolding = false;
  c.features.ctrnn = true;
  c.task = TaskKind::holonomic3d;
  const auto ctx = variation_context(c, 1009);
  CHECK_FALSE(ctx.gate.enabled);
  CHECK(ctx.table.ctrnn);
  CHECK(ctx.n_outputs == 6);
  CHECK(ctx.gate.available_max_id == 1009);
  CHECK(ctx.c_m == 25);
}
