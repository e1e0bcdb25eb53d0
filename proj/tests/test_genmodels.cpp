#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "epinet/genmodels.hpp"
#include "testutil.hpp"

using namespace epinet;
using namespace testutil;

TEST_CASE("torus coordinate arithmetic") {
  CHECK(torus_wrap(0.5) == doctest::Approx(0.5));
  CHECK(torus_wrap(1.25) == doctest::Approx(0.25));
  CHECK(torus_wrap(-0.25) == doctest::Approx(0.75));
  CHECK(torus_wrap(1.0) == doctest::Approx(0.0));
  CHECK(torus_wrap(-1.0) == doctest::Approx(0.0));
  CHECK(torus_wrap(3.75) == doctest::Approx(0.75));

  CHECK(torus_delta(0.1, 0.9) == doctest::Approx(-0.2));
  CHECK(torus_delta(0.9, 0.1) == doctest::Approx(0.2));
  CHECK(torus_delta(0.2, 0.6) == doctest::Approx(0.4));
  CHECK(torus_delta(0.3, 0.3) == doctest::Approx(0.0));
  CHECK(std::fabs(torus_delta(0.0, 0.5)) == doctest::Approx(0.5));

  // mixing a position with itself is a fixed point of the influence update
  for (double p : {0.0, 0.37, 0.99}) {
    for (double mix : {0.0, 0.5, 0.95, 1.0}) {
      CHECK(torus_wrap(mix * p + (1.0 - mix) * p) == doctest::Approx(p));
    }
  }
}

TEST_CASE("walk stop probability floors at one third") {
  CHECK(rw_stop_probability(1) == doctest::Approx(0.01));
  CHECK(rw_stop_probability(50) == doctest::Approx(1.0 / 51));
  CHECK(rw_stop_probability(97) == doctest::Approx(1.0 / 4));
  CHECK(rw_stop_probability(98) == doctest::Approx(1.0 / 3));
  CHECK(rw_stop_probability(99) == doctest::Approx(1.0 / 3));
  CHECK(rw_stop_probability(100) == doctest::Approx(1.0 / 3));
  CHECK(rw_stop_probability(100000) == doctest::Approx(1.0 / 3));
  for (int d = 2; d <= 120; ++d) CHECK(rw_stop_probability(d) >= rw_stop_probability(d - 1));
}

TEST_CASE("local_geometric replicates a brute-force kNN construction") {
  const int n = 200;
  const std::uint64_t seed = 314;
  Rng lib_rng(seed);
  Graph g = local_geometric(n, lib_rng);

  // replicate the documented draw order: positions (x, y per node), then k's
  Rng rng(seed);
  std::vector<double> xs(n), ys(n);
  for (int v = 0; v < n; ++v) {
    xs[v] = torus_wrap(uniform01(rng));
    ys[v] = torus_wrap(uniform01(rng));
  }
  std::vector<int> want(n);
  for (int v = 0; v < n; ++v) want[v] = 1 + uniform_int(rng, 20);
  std::set<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) {
    std::vector<std::pair<double, int>> cand;
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      double dx = xs[u] - xs[v], dy = ys[u] - ys[v];
      cand.emplace_back(dx * dx + dy * dy, u);
    }
    std::sort(cand.begin(), cand.end());
    for (int k = 0; k < want[v]; ++k) {
      int u = cand[k].second;
      edges.insert({std::min(u, v), std::max(u, v)});
    }
  }
  std::vector<std::pair<int, int>> brute(edges.begin(), edges.end());
  CHECK(sorted_edges(g) == brute);
}

TEST_CASE("local_geometric degree scale and validation") {
  Rng rng(11);
  Graph g = local_geometric(500, rng);
  CHECK(g.n == 500);
  double mean_deg = 2.0 * static_cast<double>(g.m) / g.n;
  CHECK(mean_deg >= 10.5);  // each node elects 10.5 neighbors on average
  CHECK(mean_deg <= 21.0);  // union-symmetrization at most doubles that
  CHECK_THROWS_AS(local_geometric(20, rng), std::invalid_argument);
}

TEST_CASE("GenConfig validation") {
  GenConfig ok;
  CHECK_NOTHROW(ok.validate());
  GenConfig c = ok;
  c.n = 2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.iterations = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.degree_log_sd = -0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.influence_mix = 1.2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.noise_scale = -1e-3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.weak_tie_factor = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.reconnect_residual = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("geometric_communities target degrees follow the configured log-normal") {
  // replicate the draw order (2n position uniforms, then one normal per
  // node) and check the raw log-targets against the configured mean
  const int n = 2000;
  const std::uint64_t seed = 77;
  GenConfig cfg;
  cfg.n = n;
  cfg.iterations = 0;
  Rng lib_rng(seed);
  Graph g = geometric_communities(cfg, lib_rng);
  CHECK(g.n == n);
  CHECK(g.m > 0);

  Rng rng(seed);
  for (int i = 0; i < 2 * n; ++i) (void)uniform01(rng);
  double sum_log = 0.0;
  for (int v = 0; v < n; ++v)
    sum_log += cfg.degree_log_mean + cfg.degree_log_sd * normal01(rng);
  double mean_log = sum_log / n;
  CHECK(std::fabs(mean_log - std::log(4.0)) < 0.1);

  // the realized degrees must reflect the heavy-tailed targets: some node
  // far above the median scale
  int dmax = 0;
  for (int v = 0; v < n; ++v) dmax = std::max(dmax, g.degree(v));
  CHECK(dmax >= 20);
}

TEST_CASE("geometric_communities runs deterministically and stays connected") {
  GenConfig cfg;
  cfg.n = 300;
  cfg.iterations = 5;
  Rng a(42), b(42);
  Graph ga = geometric_communities(cfg, a);
  Graph gb = geometric_communities(cfg, b);
  CHECK(ga.n == 300);
  CHECK(sorted_edges(ga) == sorted_edges(gb));
  CHECK(giant_component(ga).n == ga.n);  // stitched back together every iteration
  double mean_deg = 2.0 * static_cast<double>(ga.m) / ga.n;
  CHECK(mean_deg > 2.0);
  CHECK(mean_deg < 60.0);
}

TEST_CASE("geometric_communities snapshots fire every tenth iteration") {
  GenConfig cfg;
  cfg.n = 120;
  cfg.iterations = 21;
  Rng rng(9);
  std::vector<int> iters;
  Graph g = geometric_communities(cfg, rng, [&](int it, const Graph& s) {
    iters.push_back(it);
    CHECK(s.n == 120);
  });
  std::vector<int> want{10, 20};
  CHECK(iters == want);
}

TEST_CASE("connect_components_chung_lu joins components one edge at a time") {
  Rng rng(101);
  // already connected: nothing to do
  Graph g = random_connected_graph(30, 0.1, rng);
  Graph c = connect_components_chung_lu(g, rng);
  CHECK(sorted_edges(c) == sorted_edges(g));

  // two triangles: exactly one edge appears
  Graph two = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  Graph joined = connect_components_chung_lu(two, rng);
  CHECK(joined.m == two.m + 1);
  CHECK(giant_component(joined).n == 6);
  for (auto [u, v] : two.edge_list()) CHECK(joined.has_edge(u, v));

  // k isolated nodes need exactly k - 1 accepted proposals
  Graph iso = Graph::from_edges(5, {});
  Graph tree = connect_components_chung_lu(iso, rng);
  CHECK(tree.m == 4);
  CHECK(giant_component(tree).n == 5);
}

TEST_CASE("random_walk_communities densifies a connected base") {
  Rng rng(55);
  Graph base = planted_partition(60, 3, 0.6, 0.02, rng);
  base = connect_components_chung_lu(base, rng);
  REQUIRE(giant_component(base).n == base.n);

  Rng a(7), b(7);
  Graph ga = random_walk_communities(base, 3000, a);
  Graph gb = random_walk_communities(base, 3000, b);
  CHECK(sorted_edges(ga) == sorted_edges(gb));
  CHECK(ga.m > base.m);
  for (auto [u, v] : base.edge_list()) CHECK(ga.has_edge(u, v));

  Rng c(1);
  Graph same = random_walk_communities(base, 0, c);
  CHECK(sorted_edges(same) == sorted_edges(base));
}

TEST_CASE("random_walk_communities rejects disconnected bases") {
  Rng rng(2);
  Graph disc = Graph::from_edges(5, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(random_walk_communities(disc, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(random_walk_communities(path_graph(3), -1, rng), std::invalid_argument);
}

TEST_CASE("random_walk_communities snapshots fire every thousandth walk") {
  Rng rng(3);
  Graph base = cycle_graph(40);
  std::vector<int> walks;
  Graph g = random_walk_communities(base, 2500, rng, [&](int w, const Graph& s) {
    walks.push_back(w);
    CHECK(s.n == 40);
  });
  std::vector<int> want{1000, 2000};
  CHECK(walks == want);
}

TEST_CASE("planted_partition block structure") {
  Rng rng(13);
  Graph g = planted_partition(12, 3, 1.0, 0.0, rng);
  CHECK(g.m == 18);  // three disjoint K4 blocks
  for (auto [u, v] : g.edge_list()) CHECK(u / 4 == v / 4);

  Graph full = planted_partition(12, 3, 1.0, 1.0, rng);
  CHECK(full.m == 66);

  // cross-block density responds to p_out
  Graph mixed = planted_partition(200, 4, 0.5, 0.01, rng);
  long long in = 0, out = 0;
  for (auto [u, v] : mixed.edge_list()) (u / 50 == v / 50 ? in : out)++;
  CHECK(in > out);

  CHECK_THROWS_AS(planted_partition(1, 1, 0.5, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(planted_partition(10, 0, 0.5, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(planted_partition(10, 11, 0.5, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(planted_partition(10, 2, 1.5, 0.5, rng), std::invalid_argument);
}
