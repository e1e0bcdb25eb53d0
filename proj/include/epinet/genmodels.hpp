#pragma once
// Synthetic network generators with tunable multi-scale local structure.

#include <algorithm>
#include <cmath>
#include <functional>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

// Coordinate folded into [0, 1).
inline double torus_wrap(double x) {
  x = std::fmod(x, 1.0);
  if (x < 0.0) x += 1.0;
  if (x >= 1.0) x -= 1.0;
  return x;
}

// Shortest signed displacement from a to b on the unit circle, in [-0.5, 0.5].
inline double torus_delta(double a, double b) {
  double d = b - a;
  if (d > 0.5) d -= 1.0;
  else if (d < -0.5) d += 1.0;
  return d;
}

// Walk stop probability 1/max(100 - degree + 1, 3): degree >= 98 floors at 1/3.
inline double rw_stop_probability(int degree) {
  return 1.0 / std::max(100 - degree + 1, 3);
}

// Uniform positions in the unit square (no wraparound); each node links to
// its k nearest Euclidean neighbors, k ~ U{1..20}, ties by ascending id;
// edges are union-symmetrized. Requires n >= 21. Draw order (relied on by
// the determinism tests): all positions first (x then y per node), then one
// k per node.
Graph local_geometric(int n, Rng& rng);

struct GenConfig {
  int n = 5000;
  int iterations = 50;
  double degree_log_mean = 1.3862943611198906;  // log 4
  double degree_log_sd = 1.0;
  double influence_mix = 0.95;       // weight kept on a node's own position
  double noise_scale = 0.001;        // per-coordinate Gaussian jitter
  double weak_tie_factor = 0.25;     // ceil(factor * sqrt(degree)) weak ties
  double reconnect_residual = 0.85;  // see geometric_communities
  double reconnect_target = 0.25;
  void validate() const;
};

using SnapshotFn = std::function<void(int iteration, const Graph&)>;

// Iterated toroidal geometry. Initialization: log-normal target degrees
// (rounded, >= 1), each node wired to target-many nearest neighbors, then
// ceil(0.25*sqrt(degree)) weak ties per node with endpoints drawn
// proportional to degree. Each iteration: (1) keep only edges at least as
// long as the mean pairwise distance (estimated from 10,000 sampled pairs) —
// short-range edges regrow from geometry; (2) move every node toward its
// highest-degree kept neighbor (ties by id) by mixing positions
// 0.95p + 0.05q plus 0.001-scale noise, all from pre-move coordinates;
// (3) reconnect round(0.85*residual + max(0, 0.25*(target - residual)))
// nearest non-neighbors at the new positions, residual = max(0, target -
// kept degree); (4) give every non-giant component two uniform edges into
// the giant. `snap`, when set, is called after every 10th iteration.
Graph geometric_communities(const GenConfig& cfg, Rng& rng, const SnapshotFn& snap = {});

// Adds edges with endpoints drawn proportional to degree+1 (so isolated
// nodes stay reachable), accepting only proposals that join two distinct
// components, until the graph is connected. Throws if the proposal budget
// runs out first.
Graph connect_components_chung_lu(const Graph& g, Rng& rng);

// Random-walk densification over a connected base. Per walk: a uniform seed;
// the walk marks its current node with probability 1/2, then stops with
// probability 1/max(100 - deg(seed) + 1, 3) (seed degree in the current
// graph), else steps to a uniform neighbor; on stop the seed is joined to
// every marked node (self/duplicate edges skipped). `snap` is called after
// every 1000th walk. The output edge set always contains the base's.
Graph random_walk_communities(const Graph& base, int n_walks, Rng& rng,
                              const SnapshotFn& snap = {});

// Tiny planted-partition graph (contiguous equal blocks, independent
// Bernoulli edges) used as a walk base in tests; not an LFR implementation.
// Quadratic in n — test scale only.
Graph planted_partition(int n, int communities, double p_in, double p_out, Rng& rng);

}  // namespace epinet
