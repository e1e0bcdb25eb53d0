#pragma once
// Experiment harness: deterministic parameter sweeps over
// (graph variant x beta x quarantine level x seed node) with per-cell rng
// derivation, parallel execution, and plot-ready aggregation.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epinet/epidemic.hpp"
#include "epinet/graph.hpp"

namespace epinet {

// 27 transmission probabilities: 1e-3..9e-3, 1e-2..9e-2, 0.1, 0.12..0.19.
std::vector<double> a1_beta_grid();
// 16 quarantine capacity fractions: 0 to 0.15 in steps of 0.01.
std::vector<double> default_q_levels();

struct SweepSpec {
  // Ordered most-CM-rewired ... original ... most-GNP-rewired; names feed the
  // per-cell seed derivation and must be unique.
  std::vector<std::string> variant_names;
  std::vector<double> betas = a1_beta_grid();
  std::vector<double> q_levels = default_q_levels();
  int seeds_per_cell = 50;
  Model model = Model::seir;
  double gamma = 0.05;
  double exposed_mean = 5.0;
  std::uint64_t master_seed = 0;
  int workers = 1;
  void validate() const;
};

struct CellResult {
  int variant = 0, beta_idx = 0, q_idx = 0, seed_idx = 0;
  int seed_node = -1;
  long long total_infected = 0;
  int end_time = 0;
  bool truncated = false;
  std::string error;  // nonempty when the cell failed; sweep continues
};

struct SweepResult {
  SweepSpec spec;
  int nodes = 0;                   // shared node count of all variants
  std::vector<int> seed_nodes;     // sampled once, shared across variants
  std::vector<CellResult> cells;   // canonical order: variant, beta, q, seed
  // susceptible[variant][q][node]: times the node finished susceptible,
  // summed over betas and seed nodes.
  std::vector<std::vector<std::vector<long long>>> susceptible;
  long long cell_index(int vi, int bi, int qi, int si) const;
};

// Executes every cell with spec.workers threads. Cell seeds derive from
// (master seed, variant name, beta index, q index, seed index), so output is
// identical for any worker count. `on_cell` (optional) is invoked as cells
// complete, serialized by a mutex.
SweepResult run_sweep(const SweepSpec& spec, const std::vector<const Graph*>& graphs,
                      const std::function<void(const CellResult&)>& on_cell = {});

struct UShapeTable {
  std::vector<std::string> variants;
  std::vector<double> q_levels;
  std::vector<double> mean_fraction;  // variant-major; NaN where no data
  double at(int vi, int qi) const { return mean_fraction[vi * q_levels.size() + qi]; }
};
// Mean infected fraction per (variant, q level) over betas and seeds,
// skipping failed cells.
UShapeTable aggregate_u_shape(const SweepResult& r);

// Per-variant 1 - mean(total at q)/mean(total at q=0); throws when the
// spec has no q=0 level.
std::vector<double> impact_table(const SweepResult& r, int q_idx);

// Pearson correlation of average ranks. Throws on length mismatch, fewer
// than 3 points, or constant input.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// Largest grid beta whose mean no-quarantine infected fraction over `probes`
// runs stays below frac_cap; falls back to the smallest beta.
double choose_beta(const Graph& g, Model model, const std::vector<double>& grid, int probes,
                   std::uint64_t seed, double frac_cap = 0.9);

// Canonical serializations (deterministic byte-for-byte given equal results).
std::string cell_ndjson_line(const SweepSpec& spec, const CellResult& c);
void write_cells_ndjson(const SweepResult& r, const std::string& path);
void write_u_shape_csv(const SweepResult& r, const std::string& path);
void write_susceptible_csv(const SweepResult& r, const std::string& path);

}  // namespace epinet
