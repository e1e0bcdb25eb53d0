#include "epinet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace epinet {

long long Graph::arc_index(int u, int v) const {
  const int* base = adj.data() + off[u];
  const int* end = adj.data() + off[u + 1];
  const int* it = std::lower_bound(base, end, v);
  if (it == end || *it != v) return -1;
  return it - adj.data();
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int u = 0; u < n; ++u)
    for (int v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw std::invalid_argument("from_edges: negative n");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("from_edges: node id out of range");
    if (u > v) std::swap(u, v);
  }
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.n = n;
  g.m = static_cast<long long>(edges.size());
  g.off.assign(n + 1, 0);
  for (auto [u, v] : edges) {
    ++g.off[u + 1];
    ++g.off[v + 1];
  }
  for (int i = 0; i < n; ++i) g.off[i + 1] += g.off[i];
  g.adj.resize(static_cast<std::size_t>(2 * g.m));
  std::vector<long long> cur(g.off.begin(), g.off.end() - 1);
  for (auto [u, v] : edges) {
    g.adj[cur[u]++] = v;
    g.adj[cur[v]++] = u;
  }
  // per-node blocks are filled in ascending order already for the lower
  // endpoint, but not for the upper one; sort each block.
  for (int u = 0; u < n; ++u)
    std::sort(g.adj.begin() + g.off[u], g.adj.begin() + g.off[u + 1]);
  return g;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::unordered_map<long long, int> id;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  auto intern = [&](long long raw) {
    auto [it, fresh] = id.emplace(raw, static_cast<int>(id.size()));
    (void)fresh;
    return it->second;
  };
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos) continue;
    if (line[p] == '#' || line[p] == '%') continue;
    std::istringstream ls(line.substr(p));
    long long a, b;
    if (!(ls >> a >> b))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'u v'");
    int u = intern(a);
    int v = intern(b);
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(static_cast<int>(id.size()), std::move(edges));
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (auto [u, v] : g.edge_list()) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

GiantComponent giant_component_map(const Graph& g) {
  if (g.n == 0) return {g, {}};
  std::vector<int> comp(g.n, -1);
  std::vector<int> stack;
  int ncomp = 0;
  std::vector<long long> size;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    int c = ncomp++;
    size.push_back(0);
    stack.push_back(s);
    comp[s] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++size[c];
      for (int v : g.neighbors(u))
        if (comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
    }
  }
  int best = 0;
  for (int c = 1; c < ncomp; ++c)
    if (size[c] > size[best]) best = c;  // ties keep the earlier (smaller-id) one
  std::vector<int> remap(g.n, -1);
  int nn = 0;
  for (int u = 0; u < g.n; ++u)
    if (comp[u] == best) remap[u] = nn++;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u) {
    if (comp[u] != best) continue;
    for (int v : g.neighbors(u))
      if (u < v) edges.emplace_back(remap[u], remap[v]);
  }
  return {Graph::from_edges(nn, std::move(edges)), std::move(remap)};
}

Graph giant_component(const Graph& g) { return giant_component_map(g).g; }

NodeSet set_stats(const Graph& g, std::span<const int> members) {
  if (members.empty()) throw std::invalid_argument("set_stats: empty set");
  if (static_cast<long long>(members.size()) >= g.n)
    throw std::invalid_argument("set_stats: set must be a proper subset");
  std::vector<std::uint8_t> in(g.n, 0);
  for (int v : members) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("set_stats: node id out of range");
    if (in[v]) throw std::invalid_argument("set_stats: duplicate member");
    in[v] = 1;
  }
  NodeSet s;
  s.members.assign(members.begin(), members.end());
  std::sort(s.members.begin(), s.members.end());
  for (int v : s.members) {
    s.volume += g.degree(v);
    for (int w : g.neighbors(v))
      if (!in[w]) ++s.cut;
  }
  long long den = std::min(s.volume, 2 * g.m - s.volume);
  s.conductance = den > 0 ? static_cast<double>(s.cut) / static_cast<double>(den) : 1.0;
  return s;
}

TriangleData triangle_weights(const Graph& g) {
  TriangleData td;
  td.arc_count.assign(g.adj.size(), 0);
  auto bump = [&](int a, int b) {
    ++td.arc_count[g.arc_index(a, b)];
    ++td.arc_count[g.arc_index(b, a)];
  };
  for (int u = 0; u < g.n; ++u) {
    auto nu = g.neighbors(u);
    for (int v : nu) {
      if (v <= u) continue;
      auto nv = g.neighbors(v);
      // merge-intersect, keeping only w > v so each triangle appears once
      std::size_t i = 0, j = 0;
      while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j])
          ++i;
        else if (nu[i] > nv[j])
          ++j;
        else {
          int w = nu[i];
          if (w > v) {
            td.h.tris.push_back({u, v, w});
            bump(u, v);
            bump(u, w);
            bump(v, w);
          }
          ++i;
          ++j;
        }
      }
    }
  }
  return td;
}

PowerResult lambda1(const Graph& g, double tol, long long max_iters) {
  if (g.n <= 0) throw std::invalid_argument("lambda1: empty graph");
  std::vector<double> v(g.n, 1.0 / std::sqrt(static_cast<double>(g.n)));
  std::vector<double> w(g.n);
  PowerResult r;
  for (long long it = 1; it <= max_iters; ++it) {
    for (int u = 0; u < g.n; ++u) {
      double s = 0.0;
      for (int x : g.neighbors(u)) s += v[x];
      w[u] = s;
    }
    double lam = 0.0;
    for (int u = 0; u < g.n; ++u) lam += v[u] * w[u];
    double rn = 0.0;
    for (int u = 0; u < g.n; ++u) {
      double d = w[u] - lam * v[u];
      rn += d * d;
    }
    r.value = lam;
    r.residual = std::sqrt(rn);
    r.iterations = it;
    if (r.residual <= tol) return r;
    // iterate on (A + I) so spectra with lambda_min ~ -lambda_1 still converge
    double nrm = 0.0;
    for (int u = 0; u < g.n; ++u) {
      w[u] += v[u];
      nrm += w[u] * w[u];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return r;  // zero matrix: lambda1 = 0, residual 0 already
    for (int u = 0; u < g.n; ++u) v[u] = w[u] / nrm;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "lambda1: no convergence in %lld iterations (residual %.3e)",
                max_iters, r.residual);
  throw std::runtime_error(buf);
}

double epidemic_strength(double beta, double gamma, double lam) {
  if (gamma <= 0.0) throw std::invalid_argument("epidemic_strength: gamma must be positive");
  return beta / gamma * lam;
}

}  // namespace epinet
