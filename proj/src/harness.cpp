#include "epinet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "epinet/rng.hpp"
#include "json.hpp"

namespace epinet {

std::vector<double> a1_beta_grid() {
  std::vector<double> b;
  for (int i = 1; i <= 9; ++i) b.push_back(i * 1e-3);
  for (int i = 1; i <= 9; ++i) b.push_back(i * 1e-2);
  b.push_back(0.1);
  for (int i = 12; i <= 19; ++i) b.push_back(i * 1e-2);
  return b;
}

std::vector<double> default_q_levels() {
  std::vector<double> q;
  for (int i = 0; i <= 15; ++i) q.push_back(i * 0.01);
  return q;
}

void SweepSpec::validate() const {
  if (variant_names.empty()) throw std::invalid_argument("sweep: no variants");
  std::unordered_set<std::string> seen;
  for (const auto& name : variant_names) {
    if (name.empty()) throw std::invalid_argument("sweep: empty variant name");
    if (!seen.insert(name).second)
      throw std::invalid_argument("sweep: duplicate variant name " + name);
  }
  if (betas.empty()) throw std::invalid_argument("sweep: empty beta grid");
  for (double b : betas)
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("sweep: beta outside [0,1]");
  if (q_levels.empty()) throw std::invalid_argument("sweep: empty q grid");
  for (double q : q_levels)
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sweep: q outside [0,1]");
  if (seeds_per_cell < 1) throw std::invalid_argument("sweep: seeds_per_cell < 1");
  if (workers < 1) throw std::invalid_argument("sweep: workers < 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("sweep: gamma outside (0,1]");
  if (model == Model::seir && exposed_mean < 1.0)
    throw std::invalid_argument("sweep: exposed_mean < 1");
}

long long SweepResult::cell_index(int vi, int bi, int qi, int si) const {
  const long long B = (long long)spec.betas.size();
  const long long Q = (long long)spec.q_levels.size();
  const long long S = spec.seeds_per_cell;
  return ((vi * B + bi) * Q + qi) * S + si;
}

SweepResult run_sweep(const SweepSpec& spec, const std::vector<const Graph*>& graphs,
                      const std::function<void(const CellResult&)>& on_cell) {
  spec.validate();
  if (graphs.size() != spec.variant_names.size())
    throw std::invalid_argument("run_sweep: need one graph per variant");
  for (const Graph* g : graphs)
    if (g == nullptr) throw std::invalid_argument("run_sweep: null graph");
  const int n = graphs[0]->n;
  for (const Graph* g : graphs)
    if (g->n != n)
      throw std::invalid_argument("run_sweep: variants must share one node set");
  if (n < 2) throw std::invalid_argument("run_sweep: graph too small");

  SweepResult res;
  res.spec = spec;
  res.nodes = n;
  {
    // Seed nodes are drawn once and reused for every variant and q level so
    // per-cell differences reflect structure, not seed placement.
    Rng r = SeedMix(spec.master_seed).mix("seed-nodes").rng();
    res.seed_nodes.resize(spec.seeds_per_cell);
    for (int& s : res.seed_nodes) s = uniform_int(r, n);
  }

  const int V = (int)spec.variant_names.size();
  const int B = (int)spec.betas.size();
  const int Q = (int)spec.q_levels.size();
  const int S = spec.seeds_per_cell;
  const long long total = (long long)V * B * Q * S;
  res.cells.resize(total);
  res.susceptible.assign(
      V, std::vector<std::vector<long long>>(Q, std::vector<long long>(n, 0)));

  std::atomic<long long> next{0};
  std::mutex emit_mu;
  std::mutex merge_mu;

  auto worker = [&]() {
    std::vector<std::vector<std::vector<long long>>> tally(
        V, std::vector<std::vector<long long>>(Q, std::vector<long long>(n, 0)));
    for (;;) {
      const long long ci = next.fetch_add(1);
      if (ci >= total) break;
      const int si = (int)(ci % S);
      const int qi = (int)((ci / S) % Q);
      const int bi = (int)((ci / ((long long)S * Q)) % B);
      const int vi = (int)(ci / ((long long)S * Q * B));
      CellResult c;
      c.variant = vi;
      c.beta_idx = bi;
      c.q_idx = qi;
      c.seed_idx = si;
      c.seed_node = res.seed_nodes[si];
      try {
        EpidemicParams p;
        p.model = spec.model;
        p.beta = spec.betas[bi];
        p.gamma = spec.gamma;
        p.exposed_mean = spec.exposed_mean;
        p.q_capacity_fraction = spec.q_levels[qi];
        Rng rng = SeedMix(spec.master_seed)
                      .mix(spec.variant_names[vi])
                      .mix((std::uint64_t)bi)
                      .mix((std::uint64_t)qi)
                      .mix((std::uint64_t)si)
                      .rng();
        EpidemicEngine eng(*graphs[vi], p);
        const EpidemicOutcome& out = eng.run(c.seed_node, rng);
        c.total_infected = out.total_infected;
        c.end_time = out.end_time;
        c.truncated = out.truncated;
        auto& t = tally[vi][qi];
        for (int v = 0; v < n; ++v) t[v] += out.final_susceptible[v];
      } catch (const std::exception& e) {
        c.error = e.what();
      }
      res.cells[ci] = std::move(c);
      if (on_cell) {
        std::lock_guard<std::mutex> lk(emit_mu);
        on_cell(res.cells[ci]);
      }
    }
    std::lock_guard<std::mutex> lk(merge_mu);
    for (int vi = 0; vi < V; ++vi)
      for (int qi = 0; qi < Q; ++qi) {
        auto& dst = res.susceptible[vi][qi];
        const auto& src = tally[vi][qi];
        for (int v = 0; v < n; ++v) dst[v] += src[v];
      }
  };

  if (spec.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(spec.workers);
    for (int w = 0; w < spec.workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return res;
}

UShapeTable aggregate_u_shape(const SweepResult& r) {
  const int V = (int)r.spec.variant_names.size();
  const int Q = (int)r.spec.q_levels.size();
  UShapeTable t;
  t.variants = r.spec.variant_names;
  t.q_levels = r.spec.q_levels;
  t.mean_fraction.assign((size_t)V * Q, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> sum((size_t)V * Q, 0.0);
  std::vector<long long> cnt((size_t)V * Q, 0);
  for (const CellResult& c : r.cells) {
    if (!c.error.empty()) continue;
    sum[(size_t)c.variant * Q + c.q_idx] += (double)c.total_infected;
    cnt[(size_t)c.variant * Q + c.q_idx] += 1;
  }
  if (r.nodes < 1) throw std::invalid_argument("aggregate_u_shape: result has no nodes");
  for (size_t i = 0; i < sum.size(); ++i)
    if (cnt[i] > 0) t.mean_fraction[i] = sum[i] / (double)cnt[i] / r.nodes;
  return t;
}

std::vector<double> impact_table(const SweepResult& r, int q_idx) {
  const int Q = (int)r.spec.q_levels.size();
  if (q_idx < 0 || q_idx >= Q) throw std::invalid_argument("impact_table: bad q index");
  int zero_idx = -1;
  for (int i = 0; i < Q; ++i)
    if (r.spec.q_levels[i] == 0.0) { zero_idx = i; break; }
  if (zero_idx < 0)
    throw std::invalid_argument("impact_table: sweep has no q=0 baseline");
  const int V = (int)r.spec.variant_names.size();
  std::vector<double> sum((size_t)V * Q, 0.0);
  std::vector<long long> cnt((size_t)V * Q, 0);
  for (const CellResult& c : r.cells) {
    if (!c.error.empty()) continue;
    sum[(size_t)c.variant * Q + c.q_idx] += (double)c.total_infected;
    cnt[(size_t)c.variant * Q + c.q_idx] += 1;
  }
  std::vector<double> out(V);
  for (int vi = 0; vi < V; ++vi) {
    const long long cb = cnt[(size_t)vi * Q + zero_idx];
    const long long cq = cnt[(size_t)vi * Q + q_idx];
    if (cb == 0 || cq == 0)
      throw std::runtime_error("impact_table: variant " + r.spec.variant_names[vi] +
                               " has no successful cells at the requested levels");
    const double base = sum[(size_t)vi * Q + zero_idx] / (double)cb;
    const double with_q = sum[(size_t)vi * Q + q_idx] / (double)cq;
    out[vi] = quarantine_impact(with_q, base);
  }
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mean_rank = 0.5 * (double)(i + j) + 1.0;  // 1-based
    for (size_t k = i; k <= j; ++k) r[idx[k]] = mean_rank;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("spearman: need at least 3 points");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = (double)x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) { mx += rx[i]; my += ry[i]; }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::domain_error("spearman: constant input has no rank correlation");
  return sxy / std::sqrt(sxx * syy);
}

double choose_beta(const Graph& g, Model model, const std::vector<double>& grid, int probes,
                   std::uint64_t seed, double frac_cap) {
  if (grid.empty()) throw std::invalid_argument("choose_beta: empty grid");
  if (probes < 1) throw std::invalid_argument("choose_beta: probes < 1");
  if (g.n < 2) throw std::invalid_argument("choose_beta: graph too small");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  for (int bi = (int)sorted.size() - 1; bi >= 0; --bi) {
    EpidemicParams p;
    p.model = model;
    p.beta = sorted[bi];
    EpidemicEngine eng(g, p);
    double total = 0.0;
    for (int pi = 0; pi < probes; ++pi) {
      Rng rng = SeedMix(seed).mix("choose-beta").mix((std::uint64_t)bi).mix((std::uint64_t)pi).rng();
      const int seed_node = uniform_int(rng, g.n);
      total += (double)eng.run(seed_node, rng).total_infected;
    }
    if (total / probes / g.n < frac_cap) return sorted[bi];
  }
  return sorted.front();
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

}  // namespace

std::string cell_ndjson_line(const SweepSpec& spec, const CellResult& c) {
  nlohmann::ordered_json j;
  j["variant"] = spec.variant_names.at(c.variant);
  j["beta_idx"] = c.beta_idx;
  j["beta"] = spec.betas.at(c.beta_idx);
  j["q_idx"] = c.q_idx;
  j["q"] = spec.q_levels.at(c.q_idx);
  j["seed_idx"] = c.seed_idx;
  j["seed_node"] = c.seed_node;
  if (c.error.empty()) {
    j["total_infected"] = c.total_infected;
    j["end_time"] = c.end_time;
    j["truncated"] = c.truncated;
  } else {
    j["error"] = c.error;
  }
  return j.dump();
}

void write_cells_ndjson(const SweepResult& r, const std::string& path) {
  std::ofstream f = open_out(path);
  for (const CellResult& c : r.cells)
    f << cell_ndjson_line(r.spec, c) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_u_shape_csv(const SweepResult& r, const std::string& path) {
  const UShapeTable t = aggregate_u_shape(r);
  std::ofstream f = open_out(path);
  f << "variant";
  for (double q : t.q_levels) f << ",q=" << fmt_double(q);
  f << '\n';
  for (size_t vi = 0; vi < t.variants.size(); ++vi) {
    f << t.variants[vi];
    for (size_t qi = 0; qi < t.q_levels.size(); ++qi) {
      const double v = t.at((int)vi, (int)qi);
      f << ',';
      if (!std::isnan(v)) f << fmt_double(v);
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_susceptible_csv(const SweepResult& r, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "variant,node";
  for (double q : r.spec.q_levels) f << ",q=" << fmt_double(q);
  f << '\n';
  const int n = r.nodes;
  for (size_t vi = 0; vi < r.spec.variant_names.size(); ++vi) {
    for (int v = 0; v < n; ++v) {
      f << r.spec.variant_names[vi] << ',' << v;
      for (size_t qi = 0; qi < r.spec.q_levels.size(); ++qi)
        f << ',' << r.susceptible[vi][qi][v];
      f << '\n';
    }
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace epinet
