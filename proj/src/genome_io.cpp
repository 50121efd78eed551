#include <charconv>

#include "json.hpp"
#include "trajevo/genome.hpp"

namespace trajevo {

using json = nlohmann::ordered_json;

namespace {

std::string transfer_name(Transfer t) { return t == Transfer::sine ? "sine" : "tanh"; }

Transfer parse_transfer(const std::string& s) {
  if (s == "tanh") return Transfer::tanh;
  if (s == "sine") return Transfer::sine;
  throw GenomeError("unknown transfer function '" + s + "'");
}

Endpoint parse_endpoint(const std::string& s) {
  if (s.size() < 2) throw GenomeError("malformed endpoint '" + s + "'");
  EndpointKind kind;
  switch (s[0]) {
    case 'i': kind = EndpointKind::input; break;
    case 'n': kind = EndpointKind::neuron; break;
    case 'o': kind = EndpointKind::output; break;
    default: throw GenomeError("malformed endpoint '" + s + "'");
  }
  GeneId id = 0;
  const char* first = s.data() + 1;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, id);
  if (ec != std::errc{} || ptr != last) throw GenomeError("malformed endpoint '" + s + "'");
  return {kind, id};
}

json genome_json(const Genome& g) {
  json j;
  j["id"] = g.id;
  json neurons = json::array();
  for (const auto& n : g.neurons)
    neurons.push_back({{"id", n.id}, {"tau", n.tau}, {"transfer", transfer_name(n.transfer)}});
  j["neurons"] = std::move(neurons);
  json conns = json::array();
  for (const auto& c : g.connections)
    conns.push_back({{"innovation", c.innovation},
                     {"source", to_string(c.source)},
                     {"target", to_string(c.target)},
                     {"weight", c.weight},
                     {"active", c.active}});
  j["connections"] = std::move(conns);
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw GenomeError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw GenomeError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string serialize_genome(const Genome& g) { return genome_json(g).dump(1) + "\n"; }

std::string serialize_genome(const Genome& g, const SnapshotMeta& meta) {
  json j = genome_json(g);
  j["meta"] = {{"task", meta.task},
               {"seed", meta.seed},
               {"generation", meta.generation},
               {"fitness", meta.fitness},
               {"steps", meta.steps},
               {"trajectory_segments", meta.trajectory_segments},
               {"segment_mode", meta.segment_mode}};
  return j.dump(1) + "\n";
}

Genome deserialize_genome(const std::string& text, std::optional<SnapshotMeta>& meta) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GenomeError("genome parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  Genome g;
  g.id = field<std::uint64_t>(j, "id");
  for (const auto& n : field<json>(j, "neurons"))
    g.neurons.push_back({field<GeneId>(n, "id"), field<double>(n, "tau"),
                         parse_transfer(field<std::string>(n, "transfer"))});
  for (const auto& c : field<json>(j, "connections"))
    g.connections.push_back({field<GeneId>(c, "innovation"), parse_endpoint(field<std::string>(c, "source")),
                             parse_endpoint(field<std::string>(c, "target")), field<double>(c, "weight"),
                             field<bool>(c, "active")});
  meta.reset();
  if (j.contains("meta")) {
    const json& m = j["meta"];
    SnapshotMeta sm;
    sm.task = field<std::string>(m, "task");
    sm.seed = field<std::uint64_t>(m, "seed");
    sm.generation = field<std::uint64_t>(m, "generation");
    sm.fitness = field<double>(m, "fitness");
    sm.steps = field<std::int64_t>(m, "steps");
    sm.trajectory_segments = field<std::size_t>(m, "trajectory_segments");
    sm.segment_mode = field<std::string>(m, "segment_mode");
    meta = sm;
  }
  return g;
}

Genome deserialize_genome(const std::string& text) {
  std::optional<SnapshotMeta> ignored;
  return deserialize_genome(text, ignored);
}

}  // namespace trajevo
