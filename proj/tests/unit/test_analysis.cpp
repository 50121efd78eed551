#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "trajevo/analysis.hpp"

using namespace trajevo;

namespace {

Genome neurons_only(std::size_t n) {
  Genome g;
  for (std::size_t i = 0; i < n; ++i) g.neurons.push_back({static_cast<GeneId>(i + 1), 1.0, Transfer::tanh});
  return g;
}

void link(Genome& g, GeneId& next, Endpoint s, Endpoint t, bool active = true) {
  g.connections.push_back({next++, s, t, t.is_output() ? 1.0 : 0.5, active});
}

}  // namespace

TEST_CASE("information rate") {
  CHECK(info_rate(386, 16, 3500) == doctest::Approx(0.44114).epsilon(1e-4));
  CHECK(info_rate(0, 16, 100) == 0.0);
  CHECK(selection_limit_bits(0.05) == doctest::Approx(4.3219).epsilon(1e-4));
  CHECK_THROWS_AS(info_rate(3, 16, 0), ConfigError);
}

TEST_CASE("network statistics") {
  SUBCASE("common ancestor: 4 singleton components") {
    InnovationCounter counter;
    Rng rng = make_stream(1, StreamTag::ancestor);
    const std::vector<GeneId> inputs{0, 1000, 1001, 1002, 1003, 1004};
    const auto s = network_stats(make_common_ancestor(4, inputs, counter, rng));
    CHECK(s.n_neurons == 4);
    CHECK(s.n_components == 4);
    CHECK(s.mean_component_size == 1.0);
    CHECK(s.n_outputs == 4);
    CHECK(s.n_output_connections == 4);
  }
  SUBCASE("chain of 3 is one component") {
    Genome g = neurons_only(3);
    GeneId next = 4;
    link(g, next, Endpoint::neuron(1), Endpoint::neuron(2));
    link(g, next, Endpoint::neuron(3), Endpoint::neuron(2));
    link(g, next, Endpoint::input(0), Endpoint::neuron(1));
    link(g, next, Endpoint::input(1002), Endpoint::neuron(3));
    link(g, next, Endpoint::neuron(3), Endpoint::output(1));
    const auto s = network_stats(g);
    CHECK(s.n_components == 1);
    CHECK(s.mean_component_size == 3.0);
    CHECK(s.n_inputs == 2);
    CHECK(s.n_scaffold_inputs == 1);
    CHECK(s.n_neuron_connections == 2);
  }
  SUBCASE("inactive links and shared inputs do not join components") {
    Genome g = neurons_only(3);
    GeneId next = 4;
    link(g, next, Endpoint::neuron(1), Endpoint::neuron(2), false);
    link(g, next, Endpoint::input(0), Endpoint::neuron(1));
    link(g, next, Endpoint::input(0), Endpoint::neuron(2));
    link(g, next, Endpoint::neuron(1), Endpoint::output(0));
    link(g, next, Endpoint::neuron(2), Endpoint::output(0));
    CHECK(network_stats(g).n_components == 3);
  }
  SUBCASE("empty genome") {
    const auto s = network_stats(Genome{});
    CHECK(s.n_components == 0);
    CHECK(s.mean_component_size == 0.0);
  }
  SUBCASE("components match a breadth-first oracle") {
    Rng rng = make_stream(80, StreamTag::test);
    for (int trial = 0; trial < 50; ++trial) {
      InnovationCounter counter;
      const Genome g = oracle::grown_genome(rng, 5 + pick(rng, 36), pick(rng, 40), 4, 1010, counter);
      std::map<GeneId, std::set<GeneId>> adj;
      for (const auto& n : g.neurons) adj[n.id];
      for (const auto& c : g.connections)
        if (c.active && c.source.is_neuron() && c.target.is_neuron()) {
          adj[c.source.id].insert(c.target.id);
          adj[c.target.id].insert(c.source.id);
        }
      std::set<GeneId> seen;
      std::size_t components = 0;
      for (const auto& [id, _] : adj) {
        if (seen.count(id)) continue;
        ++components;
        std::vector<GeneId> stack{id};
        seen.insert(id);
        while (!stack.empty()) {
          const GeneId v = stack.back();
          stack.pop_back();
          for (GeneId w : adj[v])
            if (seen.insert(w).second) stack.push_back(w);
        }
      }
      CHECK(network_stats(g).n_components == components);
    }
  }
}

TEST_CASE("stats report") {
  std::ostringstream os;
  write_stats(os, network_stats(neurons_only(2)));
  CHECK(os.str().find("neurons = 2") != std::string::npos);
  CHECK(os.str().find("components = 2") != std::string::npos);
}

TEST_CASE("age histograms") {
  SUBCASE("self-recurrent links all span 0") {
    Genome g = neurons_only(5);
    GeneId next = 6;
    for (GeneId i = 1; i <= 5; ++i) link(g, next, Endpoint::neuron(i), Endpoint::neuron(i));
    const auto h = age_histograms(g);
    CHECK(h.span_counts == std::vector<std::size_t>{5});
  }
  SUBCASE("hand-built 20-neuron genome") {
    Genome g = neurons_only(20);
    GeneId next = 21;
    link(g, next, Endpoint::neuron(1), Endpoint::neuron(2));    // span 1
    link(g, next, Endpoint::neuron(20), Endpoint::neuron(1));   // span 19
    link(g, next, Endpoint::neuron(5), Endpoint::neuron(8));    // span 3
    link(g, next, Endpoint::neuron(8), Endpoint::neuron(5));    // span 3
    link(g, next, Endpoint::neuron(9), Endpoint::neuron(10), false);
    link(g, next, Endpoint::input(0), Endpoint::neuron(10));
    link(g, next, Endpoint::neuron(3), Endpoint::output(0));
    link(g, next, Endpoint::neuron(3), Endpoint::output(1));
    link(g, next, Endpoint::neuron(15), Endpoint::output(0));
    const auto h = age_histograms(g, 10);
    std::vector<std::size_t> want(20, 0);
    want[1] = 1;
    want[3] = 2;
    want[19] = 1;
    CHECK(h.span_counts == want);
    REQUIRE(h.output_degree_means.size() == 2);
    CHECK(h.output_degree_means[0] == doctest::Approx(0.2));
    CHECK(h.output_degree_means[1] == doctest::Approx(0.1));
  }
  SUBCASE("uniform out-degree 1 gives 1.0 per bucket, short last bucket included") {
    Genome g = neurons_only(23);
    GeneId next = 24;
    for (GeneId i = 1; i <= 23; ++i) link(g, next, Endpoint::neuron(i), Endpoint::output(i % 4));
    const auto h = age_histograms(g, 10);
    CHECK(h.output_degree_means == std::vector<double>{1.0, 1.0, 1.0});
  }
  CHECK_THROWS_AS(age_histograms(Genome{}, 0), ConfigError);
}

TEST_CASE("expected scaffolding inputs") {
  auto e = expected_scaffold_count(449);
  CHECK(e.needed == 674);
  CHECK(e.available == 675);
  e = expected_scaffold_count(1);
  CHECK(e.needed == 2);
  CHECK(e.available == 5);
  CHECK(expected_scaffold_count(2, 30, 30).needed == 2);
  CHECK_THROWS_AS(expected_scaffold_count(0), ConfigError);
}
