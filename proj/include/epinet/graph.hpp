#pragma once
// Core graph type: compressed sparse adjacency over nodes 0..n-1, undirected,
// simple (no self-loops, no multi-edges), neighbor lists sorted.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epinet {

struct Graph {
  int n = 0;
  long long m = 0;              // number of undirected edges
  std::vector<long long> off;  // size n+1
  std::vector<int> adj;        // size 2m, sorted within each node block

  int degree(int u) const { return static_cast<int>(off[u + 1] - off[u]); }
  std::span<const int> neighbors(int u) const {
    return {adj.data() + off[u], static_cast<std::size_t>(off[u + 1] - off[u])};
  }
  bool has_edge(int u, int v) const { return arc_index(u, v) >= 0; }
  // Index into adj for the directed arc u->v, or -1 if absent.
  long long arc_index(int u, int v) const;
  // Canonical edge list: pairs with u < v, lexicographically ascending.
  std::vector<std::pair<int, int>> edge_list() const;

  // Builds from an arbitrary pair list: reversed duplicates and repeats are
  // merged, self-loops dropped. Throws on ids outside [0, n).
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);
};

// Whitespace-separated "u v" lines; '#'/'%' lines are comments. Node ids are
// compacted to 0..n-1 in order of first appearance.
Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

// Largest connected component (ties: the one containing the smallest node
// id), node ids remapped to 0..n'-1 preserving relative order.
struct GiantComponent {
  Graph g;
  std::vector<int> old_to_new;  // -1 for nodes outside the giant component
};
GiantComponent giant_component_map(const Graph& g);
Graph giant_component(const Graph& g);

struct NodeSet {
  std::vector<int> members;  // sorted ascending
  long long cut = 0;
  long long volume = 0;
  double conductance = 1.0;  // cut / min(vol, 2m - vol); 1.0 when volume is 0
};
// Throws if members is empty, covers all nodes, or contains duplicates.
NodeSet set_stats(const Graph& g, std::span<const int> members);

struct HyperedgeList {
  std::vector<std::array<int, 3>> tris;
};

struct TriangleData {
  HyperedgeList h;             // each triangle once, ordered (a < b < c)
  std::vector<int> arc_count;  // aligned with Graph::adj: triangles on that edge
};
TriangleData triangle_weights(const Graph& g);

struct PowerResult {
  double value = 0.0;
  double residual = 0.0;
  long long iterations = 0;
};
// Dominant adjacency eigenvalue by power iteration (internally shifted by +I
// so bipartite-ish spectra converge). residual = ||A v - value * v||_2 with
// ||v||_2 = 1. Throws if the residual does not reach tol within max_iters.
PowerResult lambda1(const Graph& g, double tol = 1e-8, long long max_iters = 100000);

// (beta / gamma) * lam where lam is a dominant adjacency eigenvalue.
double epidemic_strength(double beta, double gamma, double lam);

}  // namespace epinet
