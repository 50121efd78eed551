#include "trajevo/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

namespace trajevo {

std::string to_string(SelectionScheme s) { return s == SelectionScheme::truncation ? "truncation" : "speciation"; }

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError("invalid value '" + value + "' for key '" + key + "': " + why);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  bad_value(key, v, "expected true or false");
}

template <typename T>
T to_number(const std::string& key, const std::string& v) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad_value(key, v, "not a number");
  return out;
}

std::string fmt_double(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number_field(std::string key, T ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_number<T>(k, v);
          },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
              return fmt_double(c.*member);
            else
              return std::to_string(c.*member);
          }};
}

template <typename Getter, typename Setter>
Field custom(std::string key, Getter get, Setter set) {
  return {std::move(key), set, get};
}

#define TRAJEVO_BOOL(KEY, EXPR)                                                                              \
  custom(                                                                                                    \
      KEY, [](const ExperimentConfig& c) { return fmt_bool(c.EXPR); },                                       \
      [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.EXPR = to_bool(k, v); })
#define TRAJEVO_DOUBLE(KEY, EXPR)                                                                            \
  custom(                                                                                                    \
      KEY, [](const ExperimentConfig& c) { return fmt_double(c.EXPR); },                                     \
      [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.EXPR = to_number<double>(k, v); })
#define TRAJEVO_SIZE(KEY, EXPR)                                                                              \
  custom(                                                                                                    \
      KEY, [](const ExperimentConfig& c) { return std::to_string(c.EXPR); },                                 \
      [](ExperimentConfig& c, const std::string& k, const std::string& v) {                                  \
        c.EXPR = to_number<decltype(c.EXPR)>(k, v);                                                          \
      })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      custom(
          "task.type", [](const ExperimentConfig& c) { return to_string(c.task); },
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            try {
              c.task = parse_task_kind(v);
            } catch (const ConfigError& e) {
              bad_value(k, v, e.what());
            }
          }),
      custom(
          "task.segment_mode", [](const ExperimentConfig& c) { return to_string(c.segment_mode); },
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            try {
              c.segment_mode = parse_segment_mode(v);
            } catch (const ConfigError& e) {
              bad_value(k, v, e.what());
            }
          }),
      number_field("task.initial_segments", &ExperimentConfig::initial_segments),
      number_field("task.scaffold_period", &ExperimentConfig::scaffold_period),
      number_field("evolution.population", &ExperimentConfig::population),
      number_field("evolution.generations", &ExperimentConfig::generations),
      number_field("evolution.seed", &ExperimentConfig::seed),
      custom(
          "evolution.selection", [](const ExperimentConfig& c) { return to_string(c.selection); },
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            if (v == "truncation")
              c.selection = SelectionScheme::truncation;
            else if (v == "speciation")
              c.selection = SelectionScheme::speciation;
            else
              bad_value(k, v, "expected truncation or speciation");
          }),
      number_field("evolution.truncation_fraction", &ExperimentConfig::truncation_fraction),
      number_field("evolution.c_m", &ExperimentConfig::c_m),
      number_field("evolution.scaffold_batch", &ExperimentConfig::scaffold_batch),
      number_field("evolution.elongation_trigger", &ExperimentConfig::elongation_trigger),
      number_field("evolution.elongation_margin", &ExperimentConfig::elongation_margin),
      TRAJEVO_BOOL("features.freezing", features.freezing),
      TRAJEVO_BOOL("features.scaffolding", features.scaffolding),
      TRAJEVO_BOOL("features.new_pathway", features.new_pathway),
      custom(
          "features.output", [](const ExperimentConfig& c) { return to_string(c.features.output); },
          [](ExperimentConfig& c, const std::string& k, const std::string& v) {
            try {
              c.features.output = parse_output_function(v);
            } catch (const ConfigError& e) {
              bad_value(k, v, e.what());
            }
          }),
      TRAJEVO_BOOL("features.ctrnn", features.ctrnn),
      TRAJEVO_BOOL("features.sine_hidden", features.sine_hidden),
      TRAJEVO_DOUBLE("operators.connect_neurons", operators.connect_neurons),
      TRAJEVO_DOUBLE("operators.connect_io", operators.connect_io),
      TRAJEVO_DOUBLE("operators.insert_neuron", operators.insert_neuron),
      TRAJEVO_DOUBLE("operators.toggle_flag", operators.toggle_flag),
      TRAJEVO_DOUBLE("operators.set_flag", operators.set_flag),
      TRAJEVO_DOUBLE("operators.new_pathway", operators.new_pathway),
      TRAJEVO_DOUBLE("operators.tau_perturb", operators.tau_perturb),
      TRAJEVO_DOUBLE("operators.weight_select", operators.weight_select),
      TRAJEVO_DOUBLE("operators.weight_sigma", operators.weight_sigma),
      TRAJEVO_DOUBLE("operators.weight_replace", operators.weight_replace),
      TRAJEVO_DOUBLE("operators.tau_sigma", operators.tau_sigma),
      TRAJEVO_SIZE("operators.max_retries", operators.max_retries),
      TRAJEVO_DOUBLE("speciation.threshold", speciation.initial_threshold),
      TRAJEVO_SIZE("speciation.target_min", speciation.target_min),
      TRAJEVO_SIZE("speciation.target_max", speciation.target_max),
      TRAJEVO_DOUBLE("speciation.threshold_step", speciation.threshold_step),
      TRAJEVO_DOUBLE("speciation.threshold_floor", speciation.threshold_floor),
      TRAJEVO_DOUBLE("speciation.c_r", speciation.c_r),
      TRAJEVO_DOUBLE("speciation.c_w", speciation.c_w),
      TRAJEVO_SIZE("speciation.stagnation_limit", speciation.stagnation_limit),
      TRAJEVO_DOUBLE("speciation.penalty", speciation.stagnation_penalty),
      number_field("output.snapshot_interval", &ExperimentConfig::snapshot_interval),
  };
  return table;
}

#undef TRAJEVO_BOOL
#undef TRAJEVO_DOUBLE
#undef TRAJEVO_SIZE

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "runtime.threads") {
    cfg.threads = to_number<std::size_t>(key, value);
    return;
  }
  if (key == "runtime.kernels") {
    if (value != "auto" && value != "scalar") bad_value(key, value, "expected auto or scalar");
    cfg.kernels = value;
    return;
  }
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file '" + path + "' not found");
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot parse config file: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' must live inside a [section]");
    for (const auto& [key, value] : body) apply_setting(base, section + "." + key, value.data());
  }
  return base;
}

void ExperimentConfig::validate() const {
  auto positive = [](const char* key, std::size_t v) {
    if (v < 1) throw ConfigError(std::string("config key '") + key + "' must be at least 1");
  };
  positive("evolution.population", population);
  positive("task.initial_segments", initial_segments);
  positive("task.scaffold_period", scaffold_period);
  positive("evolution.c_m", c_m);
  positive("evolution.scaffold_batch", scaffold_batch);
  positive("output.snapshot_interval", snapshot_interval);
  positive("runtime.threads", threads);
  if (!(truncation_fraction > 0.0 && truncation_fraction <= 1.0))
    throw ConfigError("config key 'evolution.truncation_fraction' must lie in (0, 1]");
  if (!(elongation_trigger > 0.0 && elongation_trigger <= 1.0))
    throw ConfigError("config key 'evolution.elongation_trigger' must lie in (0, 1]");
  if (!(operators.weight_select > 0.0 && operators.weight_select <= 1.0))
    throw ConfigError("config key 'operators.weight_select' must lie in (0, 1]");
  if (operators.max_retries < 1) throw ConfigError("config key 'operators.max_retries' must be at least 1");
  if (speciation.target_min > speciation.target_max)
    throw ConfigError("config key 'speciation.target_min' exceeds 'speciation.target_max'");
  if (!(speciation.initial_threshold > 0.0)) throw ConfigError("config key 'speciation.threshold' must be positive");
  if (!(speciation.threshold_floor > 0.0))
    throw ConfigError("config key 'speciation.threshold_floor' must be positive");
  OperatorTable t = operators;
  t.new_pathway_enabled = features.new_pathway;
  t.ctrnn = features.ctrnn;
  try {
    (void)t.probabilities();
  } catch (const ConfigError&) {
    throw ConfigError("config keys 'operators.*' sum to more than 1");
  }
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

std::string to_ini(const ExperimentConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, value] : describe(cfg)) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << key.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_ini(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::string>& ablation_arms() {
  static const std::vector<std::string> arms = {
      "full",        "no-freezing", "no-scaffolding", "no-new-pathway",        "tanh-output",     "mean-output",
      "sine-hidden", "ctrnn",       "ctrnn-no-scaffolding", "neat-truncation", "neat-speciation",
  };
  return arms;
}

ExperimentConfig apply_arm(const ExperimentConfig& base, const std::string& arm) {
  ExperimentConfig c = base;
  auto neat = [&](SelectionScheme s) {
    c.features.freezing = false;
    c.features.scaffolding = false;
    c.features.new_pathway = false;
    c.features.output = OutputFunction::tanh;
    c.selection = s;
  };
  if (arm == "full") {
  } else if (arm == "no-freezing") {
    c.features.freezing = false;
  } else if (arm == "no-scaffolding") {
    c.features.scaffolding = false;
  } else if (arm == "no-new-pathway") {
    c.features.new_pathway = false;
  } else if (arm == "tanh-output") {
    c.features.output = OutputFunction::tanh;
  } else if (arm == "mean-output") {
    c.features.output = OutputFunction::mean;
  } else if (arm == "sine-hidden") {
    c.features.sine_hidden = true;
  } else if (arm == "ctrnn") {
    c.features.ctrnn = true;
  } else if (arm == "ctrnn-no-scaffolding") {
    c.features.ctrnn = true;
    c.features.scaffolding = false;
  } else if (arm == "neat-truncation") {
    neat(SelectionScheme::truncation);
  } else if (arm == "neat-speciation") {
    neat(SelectionScheme::speciation);
  } else {
    std::string valid;
    for (const auto& a : ablation_arms()) valid += (valid.empty() ? "" : ", ") + a;
    throw ConfigError("unknown ablation arm '" + arm + "' (valid arms: " + valid + ")");
  }
  return c;
}

VariationContext variation_context(const ExperimentConfig& cfg, GeneId available_scaffold_max) {
  VariationContext ctx;
  ctx.table = cfg.operators;
  ctx.table.new_pathway_enabled = cfg.features.new_pathway;
  ctx.table.ctrnn = cfg.features.ctrnn;
  ctx.gate.enabled = cfg.features.scaffolding;
  ctx.gate.available_max_id = available_scaffold_max;
  ctx.freezing = cfg.features.freezing;
  ctx.c_m = cfg.c_m;
  ctx.sine_hidden = cfg.features.sine_hidden;
  ctx.n_outputs = output_count(cfg.task);
  return ctx;
}

}  // namespace trajevo
