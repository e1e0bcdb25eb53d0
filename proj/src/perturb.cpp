#include "epinet/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace epinet {

namespace {

constexpr int kRejectCap = 1000;

inline std::uint64_t ekey(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

struct EdgeSoup {
  std::vector<std::pair<int, int>> edges;  // stored u < v
  std::unordered_set<std::uint64_t> present;

  explicit EdgeSoup(const Graph& g) : edges(g.edge_list()) {
    present.reserve(edges.size() * 2);
    for (auto [u, v] : edges) present.insert(ekey(u, v));
  }
  bool has(int u, int v) const { return present.count(ekey(u, v)) != 0; }
  void replace(std::size_t i, int u, int v) {
    auto [a, b] = edges[i];
    present.erase(ekey(a, b));
    if (u > v) std::swap(u, v);
    edges[i] = {u, v};
    present.insert(ekey(u, v));
  }
  Graph build(int n) const { return Graph::from_edges(n, edges); }
};

// One double-edge-swap attempt on edges i and j of soup; applies it when the
// proposal is simple. Returns true when the swap was applied.
bool try_swap(EdgeSoup& soup, std::size_t i, std::size_t j, Rng& rng) {
  auto [a, b] = soup.edges[i];
  auto [c, d] = soup.edges[j];
  int x1, y1, x2, y2;
  if (uniform_int(rng, 2) == 0) {
    x1 = a; y1 = d; x2 = c; y2 = b;
  } else {
    x1 = a; y1 = c; x2 = b; y2 = d;
  }
  if (x1 == y1 || x2 == y2) return false;
  if (ekey(x1, y1) == ekey(x2, y2)) return false;
  if (soup.has(x1, y1) || soup.has(x2, y2)) return false;
  soup.replace(i, x1, y1);
  soup.replace(j, x2, y2);
  return true;
}

}  // namespace

RewireSchedule rewire_schedule(long long m, int points, double lo, double hi) {
  if (m <= 0) throw std::invalid_argument("rewire_schedule: m must be positive");
  if (points < 2 || lo <= 0 || hi <= lo)
    throw std::invalid_argument("rewire_schedule: bad parameters");
  RewireSchedule s;
  double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    double f = std::pow(10.0, llo + (lhi - llo) * i / (points - 1));
    long long c = std::llround(f * static_cast<double>(m));
    if (c <= 0) continue;
    if (!s.counts.empty() && s.counts.back() == c) continue;
    s.counts.push_back(c);
  }
  return s;
}

Graph rewire_gnp(const Graph& g, long long count, Rng& rng) {
  if (g.n < 2 || g.m == 0) throw std::invalid_argument("rewire_gnp: graph too small");
  EdgeSoup soup(g);
  for (long long step = 0; step < count; ++step) {
    std::size_t i = static_cast<std::size_t>(uniform_index(rng, g.m));
    int rejects = 0;
    for (;;) {
      int u = uniform_int(rng, g.n);
      int v = uniform_int(rng, g.n);
      if (u != v && !soup.has(u, v)) {
        soup.replace(i, u, v);
        break;
      }
      if (++rejects >= kRejectCap)
        throw std::runtime_error("rewire_gnp: no valid insertion found (rejection cap)");
    }
  }
  return soup.build(g.n);
}

Graph rewire_cm(const Graph& g, long long count, Rng& rng) {
  if (g.m < 2) throw std::invalid_argument("rewire_cm: need at least two edges");
  EdgeSoup soup(g);
  int consecutive = 0;
  for (long long step = 0; step < count; ++step) {
    std::size_t i = static_cast<std::size_t>(uniform_index(rng, g.m));
    std::size_t j = static_cast<std::size_t>(uniform_index(rng, g.m - 1));
    if (j >= i) ++j;
    if (try_swap(soup, i, j, rng)) {
      consecutive = 0;
    } else if (++consecutive >= kRejectCap) {
      throw std::runtime_error("rewire_cm: rejection cap hit (graph admits no swaps?)");
    }
  }
  return soup.build(g.n);
}

HyperedgeList shuffle_triangles(const HyperedgeList& h, int n, long long count, Rng& rng) {
  if (count > 0 && h.tris.empty())
    throw std::invalid_argument("shuffle_triangles: empty hyperedge list");
  if (count > 0 && n < 3) throw std::invalid_argument("shuffle_triangles: need n >= 3");
  HyperedgeList out = h;
  for (long long step = 0; step < count; ++step) {
    std::size_t i =
        static_cast<std::size_t>(uniform_index(rng, static_cast<long long>(out.tris.size())));
    int a = uniform_int(rng, n), b, c;
    do b = uniform_int(rng, n); while (b == a);
    do c = uniform_int(rng, n); while (c == a || c == b);
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    out.tris[i] = t;
  }
  return out;
}

Graph sparsify_common_neighbors(const Graph& g, double keep_fraction) {
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
    throw std::invalid_argument("sparsify_common_neighbors: keep_fraction must be in (0,1]");
  TriangleData td = triangle_weights(g);
  std::vector<std::uint8_t> elected(g.adj.size(), 0);
  std::vector<std::pair<int, int>> rank;  // (-shared, neighbor id)
  for (int u = 0; u < g.n; ++u) {
    int d = g.degree(u);
    if (d == 0) continue;
    int keep = static_cast<int>(std::ceil(keep_fraction * d));
    rank.clear();
    for (long long a = g.off[u]; a < g.off[u + 1]; ++a)
      rank.emplace_back(-td.arc_count[a], g.adj[a]);
    std::sort(rank.begin(), rank.end());
    for (int k = 0; k < keep && k < d; ++k)
      elected[g.arc_index(u, rank[k].second)] = 1;
  }
  std::vector<std::pair<int, int>> kept;
  for (int u = 0; u < g.n; ++u)
    for (long long a = g.off[u]; a < g.off[u + 1]; ++a) {
      int v = g.adj[a];
      if (u < v && (elected[a] || elected[g.arc_index(v, u)])) kept.emplace_back(u, v);
    }
  return giant_component(Graph::from_edges(g.n, std::move(kept)));
}

Graph intra_community_shuffle(const Graph& g, std::span<const int> community, Rng& rng) {
  if (static_cast<int>(community.size()) != g.n)
    throw std::invalid_argument("intra_community_shuffle: partition must cover every node");
  EdgeSoup soup(g);
  // bucket internal-edge indices by community
  std::vector<std::pair<int, std::size_t>> internal;  // (community, edge index)
  for (std::size_t i = 0; i < soup.edges.size(); ++i) {
    auto [u, v] = soup.edges[i];
    if (community[u] == community[v]) internal.emplace_back(community[u], i);
  }
  std::sort(internal.begin(), internal.end());
  for (std::size_t lo = 0; lo < internal.size();) {
    std::size_t hi = lo;
    while (hi < internal.size() && internal[hi].first == internal[lo].first) ++hi;
    long long nedges = static_cast<long long>(hi - lo);
    if (nedges >= 2) {
      for (long long step = 0; step < 100 * nedges; ++step) {
        long long i = uniform_index(rng, nedges);
        long long j = uniform_index(rng, nedges - 1);
        if (j >= i) ++j;
        try_swap(soup, internal[lo + i].second, internal[lo + j].second, rng);
      }
    }
    lo = hi;
  }
  return soup.build(g.n);
}

}  // namespace epinet
