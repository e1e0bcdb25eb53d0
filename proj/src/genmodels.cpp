#include "epinet/genmodels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

namespace epinet {

namespace {

std::uint64_t ekey(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

// Uniform bucket grid over [0,1)^2 for k-nearest-neighbor queries, optionally
// with toroidal wraparound. Rebuilt whenever positions change.
class PointGrid {
 public:
  PointGrid(const std::vector<double>& xs, const std::vector<double>& ys, bool torus)
      : xs_(xs), ys_(ys), torus_(torus) {
    int n = static_cast<int>(xs.size());
    side_ = std::max(1, static_cast<int>(std::floor(std::sqrt(n / 2.0))));
    cell_ = 1.0 / side_;
    cells_.assign(static_cast<std::size_t>(side_) * side_, {});
    for (int v = 0; v < n; ++v) cells_[cell_of(v)].push_back(v);
  }

  double dist2(int a, int b) const {
    double dx, dy;
    if (torus_) {
      dx = torus_delta(xs_[a], xs_[b]);
      dy = torus_delta(ys_[a], ys_[b]);
    } else {
      dx = xs_[b] - xs_[a];
      dy = ys_[b] - ys_[a];
    }
    return dx * dx + dy * dy;
  }

  // k nearest nodes to v, excluding v itself and nodes where skip(u) is true;
  // ties broken by ascending id. Expands cell rings until the k-th best
  // distance is certified against everything unscanned.
  template <class Skip>
  std::vector<int> knn(int v, int k, Skip&& skip) const {
    std::vector<int> out;
    if (k <= 0) return out;
    std::vector<std::pair<double, int>> cand;
    std::vector<std::uint8_t> seen(cells_.size(), 0);
    int cx = coord(xs_[v]), cy = coord(ys_[v]);
    int unseen = static_cast<int>(cells_.size());
    auto scan = [&](int gx, int gy) {
      if (torus_) {
        gx = ((gx % side_) + side_) % side_;
        gy = ((gy % side_) + side_) % side_;
      } else if (gx < 0 || gx >= side_ || gy < 0 || gy >= side_) {
        return;
      }
      std::size_t c = static_cast<std::size_t>(gy) * side_ + gx;
      if (seen[c]) return;
      seen[c] = 1;
      --unseen;
      for (int u : cells_[c]) {
        if (u == v || skip(u)) continue;
        cand.emplace_back(dist2(v, u), u);
      }
    };
    for (int rho = 0; unseen > 0; ++rho) {
      if (rho == 0) {
        scan(cx, cy);
      } else {
        for (int gx = cx - rho; gx <= cx + rho; ++gx) {
          scan(gx, cy - rho);
          scan(gx, cy + rho);
        }
        for (int gy = cy - rho + 1; gy <= cy + rho - 1; ++gy) {
          scan(cx - rho, gy);
          scan(cx + rho, gy);
        }
      }
      if (static_cast<int>(cand.size()) >= k) {
        std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
        double bound = rho * cell_;  // anything unscanned is at least this far
        if (cand[k - 1].first <= bound * bound) break;
      }
    }
    int kk = static_cast<int>(std::min<std::size_t>(k, cand.size()));
    std::partial_sort(cand.begin(), cand.begin() + kk, cand.end());
    out.reserve(kk);
    for (int i = 0; i < kk; ++i) out.push_back(cand[i].second);
    return out;
  }

 private:
  int coord(double x) const {
    int c = static_cast<int>(x * side_);
    return std::min(std::max(c, 0), side_ - 1);
  }
  std::size_t cell_of(int v) const {
    return static_cast<std::size_t>(coord(ys_[v])) * side_ + coord(xs_[v]);
  }
  const std::vector<double>& xs_;
  const std::vector<double>& ys_;
  bool torus_;
  int side_ = 1;
  double cell_ = 1.0;
  std::vector<std::vector<int>> cells_;
};

constexpr auto kSkipNone = [](int) { return false; };

}  // namespace

Graph local_geometric(int n, Rng& rng) {
  if (n < 21) throw std::invalid_argument("local_geometric: need n >= 21");
  std::vector<double> xs(n), ys(n);
  for (int v = 0; v < n; ++v) {
    xs[v] = torus_wrap(uniform01(rng));
    ys[v] = torus_wrap(uniform01(rng));
  }
  std::vector<int> want(n);
  for (int v = 0; v < n; ++v) want[v] = 1 + uniform_int(rng, 20);
  PointGrid grid(xs, ys, /*torus=*/false);
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v)
    for (int u : grid.knn(v, want[v], kSkipNone)) edges.emplace_back(v, u);
  return Graph::from_edges(n, edges);
}

void GenConfig::validate() const {
  if (n < 3) throw std::invalid_argument("gen config: n must be >= 3");
  if (iterations < 0) throw std::invalid_argument("gen config: iterations must be >= 0");
  if (!(degree_log_sd >= 0.0)) throw std::invalid_argument("gen config: bad degree spread");
  if (!(influence_mix >= 0.0 && influence_mix <= 1.0))
    throw std::invalid_argument("gen config: influence_mix must be in [0, 1]");
  if (!(noise_scale >= 0.0)) throw std::invalid_argument("gen config: bad noise scale");
  if (!(weak_tie_factor >= 0.0)) throw std::invalid_argument("gen config: bad weak tie factor");
  if (!(reconnect_residual >= 0.0 && reconnect_target >= 0.0))
    throw std::invalid_argument("gen config: bad reconnect factors");
}

Graph geometric_communities(const GenConfig& cfg, Rng& rng, const SnapshotFn& snap) {
  cfg.validate();
  const int n = cfg.n;
  std::vector<double> xs(n), ys(n);
  for (int v = 0; v < n; ++v) {
    xs[v] = torus_wrap(uniform01(rng));
    ys[v] = torus_wrap(uniform01(rng));
  }
  std::vector<int> target(n);
  for (int v = 0; v < n; ++v) {
    double t = std::exp(cfg.degree_log_mean + cfg.degree_log_sd * normal01(rng));
    target[v] = static_cast<int>(
        std::min<long long>(std::max<long long>(1, std::llround(t)), n - 1));
  }

  std::unordered_set<std::uint64_t> present;
  std::vector<std::pair<int, int>> edges;
  auto add_edge = [&](int u, int v) {
    if (u == v) return false;
    if (!present.insert(ekey(u, v)).second) return false;
    edges.emplace_back(u, v);
    return true;
  };

  {  // local edges to target-many nearest neighbors
    PointGrid grid(xs, ys, /*torus=*/true);
    for (int v = 0; v < n; ++v)
      for (int u : grid.knn(v, target[v], kSkipNone)) add_edge(v, u);
  }
  {  // weak ties: endpoints proportional to degree (uniform over arcs)
    Graph g0 = Graph::from_edges(n, edges);
    const long long arcs = 2 * g0.m;
    if (arcs > 0) {
      for (int v = 0; v < n; ++v) {
        int ties = static_cast<int>(
            std::ceil(cfg.weak_tie_factor * std::sqrt(static_cast<double>(g0.degree(v)))));
        for (int j = 0; j < ties; ++j) {
          for (int attempt = 0; attempt < 50; ++attempt) {
            int u = g0.adj[uniform_index(rng, arcs)];
            if (u != v && add_edge(v, u)) break;
          }
        }
      }
    }
  }

  Graph g = Graph::from_edges(n, edges);
  if (cfg.iterations == 0) return g;

  std::vector<double> nxs(n), nys(n);
  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    // mean pairwise distance, estimated from sampled distinct pairs
    double mean_dist = 0.0;
    {
      const int pairs = 10000;
      double acc = 0.0;
      for (int s = 0; s < pairs; ++s) {
        int a = uniform_int(rng, n);
        int b = uniform_int(rng, n - 1);
        if (b >= a) ++b;
        double dx = torus_delta(xs[a], xs[b]);
        double dy = torus_delta(ys[a], ys[b]);
        acc += std::sqrt(dx * dx + dy * dy);
      }
      mean_dist = acc / pairs;
    }

    // 1. keep only long edges; short-range ones regrow from geometry below
    std::vector<std::pair<int, int>> kept;
    kept.reserve(edges.size());
    for (auto [u, v] : edges) {
      double dx = torus_delta(xs[u], xs[v]);
      double dy = torus_delta(ys[u], ys[v]);
      if (std::sqrt(dx * dx + dy * dy) >= mean_dist) kept.emplace_back(u, v);
    }
    Graph kg = Graph::from_edges(n, kept);

    // 2. drift toward the highest-degree kept neighbor (ties to the smaller
    //    id); every move reads the pre-move coordinates
    for (int v = 0; v < n; ++v) {
      int best = -1, bestd = -1;
      for (int u : kg.neighbors(v)) {  // ascending ids: '>' keeps the smallest
        int du = kg.degree(u);
        if (du > bestd) {
          bestd = du;
          best = u;
        }
      }
      if (best < 0) {
        nxs[v] = xs[v];
        nys[v] = ys[v];
        continue;
      }
      double tx = xs[v] + (1.0 - cfg.influence_mix) * torus_delta(xs[v], xs[best]);
      double ty = ys[v] + (1.0 - cfg.influence_mix) * torus_delta(ys[v], ys[best]);
      nxs[v] = torus_wrap(tx + cfg.noise_scale * normal01(rng));
      nys[v] = torus_wrap(ty + cfg.noise_scale * normal01(rng));
    }
    xs.swap(nxs);
    ys.swap(nys);

    // 3. reconnect locally at the new positions
    present.clear();
    edges = kept;
    for (auto [u, v] : kept) present.insert(ekey(u, v));
    {
      PointGrid grid(xs, ys, /*torus=*/true);
      for (int v = 0; v < n; ++v) {
        long long res = std::max(0LL, static_cast<long long>(target[v]) - kg.degree(v));
        long long want = std::llround(
            cfg.reconnect_residual * static_cast<double>(res) +
            std::max(0.0, cfg.reconnect_target * static_cast<double>(target[v] - res)));
        if (want <= 0) continue;
        int k = static_cast<int>(std::min<long long>(want, n - 1));
        for (int u : grid.knn(v, k, [&](int u2) { return present.count(ekey(v, u2)) > 0; }))
          add_edge(v, u);
      }
    }

    // 4. give every non-giant component two uniform edges into the giant
    {
      Graph cur = Graph::from_edges(n, edges);
      std::vector<int> comp(n, -1), stack;
      std::vector<long long> csize;
      int nc = 0;
      for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = nc;
        stack.push_back(s);
        long long sz = 0;
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          ++sz;
          for (int u : cur.neighbors(v))
            if (comp[u] < 0) {
              comp[u] = nc;
              stack.push_back(u);
            }
        }
        csize.push_back(sz);
        ++nc;
      }
      if (nc > 1) {
        int giant = 0;
        for (int c = 1; c < nc; ++c)
          if (csize[c] > csize[giant]) giant = c;
        std::vector<std::vector<int>> members(nc);
        for (int v = 0; v < n; ++v) members[comp[v]].push_back(v);
        for (int c = 0; c < nc; ++c) {
          if (c == giant) continue;
          int added = 0;
          for (int attempt = 0; attempt < 200 && added < 2; ++attempt) {
            int u = members[c][uniform_int(rng, static_cast<int>(members[c].size()))];
            int w = members[giant][uniform_int(rng, static_cast<int>(members[giant].size()))];
            if (add_edge(u, w)) ++added;
          }
        }
      }
    }

    g = Graph::from_edges(n, edges);
    if (snap && iter % 10 == 0) snap(iter, g);
  }
  return g;
}

Graph connect_components_chung_lu(const Graph& g, Rng& rng) {
  const int n = g.n;
  if (n == 0) throw std::invalid_argument("connect_components: empty graph");
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  int comps = n;
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u))
      if (u < v) {
        int a = find(u), b = find(v);
        if (a != b) {
          parent[a] = b;
          --comps;
        }
      }
  if (comps == 1) return g;

  std::vector<int> bag;  // node v appears degree(v)+1 times
  bag.reserve(static_cast<std::size_t>(2 * g.m + n));
  for (int v = 0; v < n; ++v)
    for (int i = 0; i <= g.degree(v); ++i) bag.push_back(v);

  std::vector<std::pair<int, int>> edges = g.edge_list();
  const long long cap = 10'000'000;
  long long tries = 0;
  while (comps > 1) {
    if (++tries > cap) throw std::runtime_error("connect_components: proposal cap exceeded");
    int u = bag[uniform_index(rng, static_cast<long long>(bag.size()))];
    int v = bag[uniform_index(rng, static_cast<long long>(bag.size()))];
    int a = find(u), b = find(v);
    if (a == b) continue;
    parent[a] = b;
    --comps;
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

Graph random_walk_communities(const Graph& base, int n_walks, Rng& rng, const SnapshotFn& snap) {
  if (n_walks < 0) throw std::invalid_argument("random_walk: n_walks must be >= 0");
  const int n = base.n;
  if (n < 2) throw std::invalid_argument("random_walk: need at least two nodes");
  {
    std::vector<std::uint8_t> vis(n, 0);
    std::vector<int> stack{0};
    vis[0] = 1;
    int cnt = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++cnt;
      for (int u : base.neighbors(v))
        if (!vis[u]) {
          vis[u] = 1;
          stack.push_back(u);
        }
    }
    if (cnt != n) throw std::invalid_argument("random_walk: base graph must be connected");
  }

  std::vector<std::vector<int>> adj(n);
  std::unordered_set<std::uint64_t> present;
  std::vector<std::pair<int, int>> edges = base.edge_list();
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
    present.insert(ekey(u, v));
  }

  std::vector<std::uint8_t> markflag(n, 0);
  std::vector<int> marked;
  for (int w = 1; w <= n_walks; ++w) {
    int seed = uniform_int(rng, n);
    int d = static_cast<int>(adj[seed].size());
    double stop_p = rw_stop_probability(d);
    int cur = seed;
    marked.clear();
    for (;;) {
      if (bernoulli(rng, 0.5) && !markflag[cur]) {
        markflag[cur] = 1;
        marked.push_back(cur);
      }
      if (bernoulli(rng, stop_p)) break;
      cur = adj[cur][uniform_index(rng, static_cast<long long>(adj[cur].size()))];
    }
    for (int u : marked) {
      markflag[u] = 0;
      if (u == seed) continue;
      if (!present.insert(ekey(seed, u)).second) continue;
      edges.emplace_back(seed, u);
      adj[seed].push_back(u);
      adj[u].push_back(seed);
    }
    if (snap && w % 1000 == 0) snap(w, Graph::from_edges(n, edges));
  }
  return Graph::from_edges(n, edges);
}

Graph planted_partition(int n, int communities, double p_in, double p_out, Rng& rng) {
  if (n < 2) throw std::invalid_argument("planted_partition: need at least two nodes");
  if (communities < 1 || communities > n)
    throw std::invalid_argument("planted_partition: bad community count");
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0))
    throw std::invalid_argument("planted_partition: probabilities must be in [0, 1]");
  auto block = [&](int v) {
    return static_cast<int>(static_cast<long long>(v) * communities / n);
  };
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (bernoulli(rng, block(u) == block(v) ? p_in : p_out)) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

}  // namespace epinet
