#pragma once
// Graph perturbations: random rewiring (degree-agnostic and degree-preserving),
// hyperedge shuffling, common-neighbor sparsification, community-local shuffle.

#include <span>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

struct RewireSchedule {
  std::vector<long long> counts;  // strictly increasing, zeros dropped
};

// Log-spaced rewiring counts round(f * m) for f in [lo, hi], `points` values
// per side of the schedule.
RewireSchedule rewire_schedule(long long m, int points = 17, double lo = 1e-4,
                               double hi = 100.0);

// `count` single-edge rewires: remove a uniform edge, insert an edge between
// two uniform distinct nodes; proposals hitting a self-loop or an existing
// edge (including the one being replaced) are resampled, up to 1000
// consecutive rejections per step (then throws). Edge count is preserved.
Graph rewire_gnp(const Graph& g, long long count, Rng& rng);

// `count` double-edge swap attempts: pick two distinct edges (a,b),(c,d) and
// one of the two re-pairings uniformly; invalid proposals (self-loop or
// duplicate against the current edge set) consume the step. Throws after 1000
// consecutive rejections. Degree sequence is preserved exactly.
Graph rewire_cm(const Graph& g, long long count, Rng& rng);

// Replace `count` uniformly chosen hyperedges with fresh triples of distinct
// uniform nodes. Throws if n < 3 or if h is empty while count > 0.
HyperedgeList shuffle_triangles(const HyperedgeList& h, int n, long long count, Rng& rng);

// Each node scores incident edges by shared-neighbor count / its own degree
// and elects the top ceil(keep_fraction * degree) (ties: smaller neighbor
// id). An edge survives if either endpoint elected it. Returns the giant
// component of the surviving graph. keep_fraction must be in (0, 1].
Graph sparsify_common_neighbors(const Graph& g, double keep_fraction);

// Degree-preserving swaps restricted to edges inside each community
// (100x the community's internal edge count per community); edges between
// communities are untouched. community[v] = community id for every node.
Graph intra_community_shuffle(const Graph& g, std::span<const int> community, Rng& rng);

}  // namespace epinet
