// Acceptance gate: one self-contained check per release criterion, each
// printing a PASS/FAIL line. Exit status is the number of failed criteria.
// All thresholds, sizes, and rng seeds are pinned here on purpose — edit
// them only with a written justification.
//
// Usage: epinet_acceptance [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "epinet/epidemic.hpp"
#include "epinet/genmodels.hpp"
#include "epinet/graph.hpp"
#include "epinet/harness.hpp"
#include "epinet/ncp.hpp"
#include "epinet/perturb.hpp"
#include "epinet/rng.hpp"
#include "testutil.hpp"

using namespace epinet;

namespace {

constexpr std::uint64_t kMaster = 20260814;

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

Rng crng(const char* tag) { return SeedMix(kMaster).mix(tag).rng(); }

// ---- shared cached artifacts -------------------------------------------

const Graph& geocomm5000() {
  static Graph g = [] {
    std::printf("      [building 5000-node community graph, 150 iterations...]\n");
    std::fflush(stdout);
    GenConfig cfg;
    cfg.n = 5000;
    cfg.iterations = 150;
    Rng rng = crng("geocomm-5000");
    return geometric_communities(cfg, rng);
  }();
  return g;
}

const Graph& geocomm1000() {
  static Graph g = [] {
    GenConfig cfg;
    cfg.n = 1000;
    cfg.iterations = 50;
    Rng rng = crng("geocomm-1000");
    return geometric_communities(cfg, rng);
  }();
  return g;
}

const Graph& ring2000() {
  static Graph g = testutil::ring_of_cliques(200, 10);
  return g;
}

// Random-walk community graph at desk scale. Walk length is degree-capped
// (~100 steps), which at n=1000 spans the whole graph, so each walk mostly
// adds global edges; a light walk count keeps the planted structure visible.
const Graph& rwcomm1000() {
  static Graph g = [] {
    Rng brng = crng("c8-rw-base");
    Graph base = planted_partition(1000, 10, 0.0303, 0.000333, brng);
    base = connect_components_chung_lu(base, brng);
    Rng wrng = crng("c8-rw-walks");
    return random_walk_communities(base, 200, wrng);
  }();
  return g;
}

Graph cm_rewired(const Graph& g, long long mult, const char* tag) {
  Rng rng = crng(tag);
  return rewire_cm(g, mult * g.m, rng);
}

// ---- 1: engine vs step-by-step oracle ----------------------------------
//
// Small-graph family x {beta} x {gamma} x {model} x {quarantine off/on};
// 1e5 runs per implementation per combo; total-variation distance between
// the outbreak-size distributions must stay below 0.02.

bool criterion1() {
  const int runs = 100000;
  const double tv_cap = 0.02;
  struct Named {
    const char* name;
    Graph g;
  };
  std::vector<Named> graphs;
  graphs.push_back({"path6", testutil::path_graph(6)});
  graphs.push_back({"cycle6", testutil::cycle_graph(6)});
  graphs.push_back({"star5", testutil::star_graph(5)});
  graphs.push_back({"clique6", testutil::clique_graph(6)});
  graphs.push_back({"bridged-triangles", testutil::two_triangles_bridge()});

  double worst = 0.0;
  std::string worst_at = "-";
  int combos = 0;
  Rng seeder = crng("c1");
  for (const Named& gr : graphs) {
    for (double beta : {0.1, 0.5, 1.0}) {
      for (double gamma : {0.2, 1.0}) {
        for (Model model : {Model::sir, Model::seir}) {
          for (bool quarantine : {false, true}) {
            EpidemicParams p;
            p.model = model;
            p.beta = beta;
            p.gamma = gamma;
            p.exposed_mean = 2.0;
            if (quarantine) {
              p.q_capacity_fraction = 0.5;
              p.detect_threshold = 0;
            }
            Rng ra(seeder()), rb(seeder());
            EpidemicEngine eng(gr.g, p);
            std::vector<long long> he(gr.g.n, 0), hn(gr.g.n, 0);
            for (int i = 0; i < runs; ++i)
              ++he[eng.run(0, ra).total_infected - 1];
            for (int i = 0; i < runs; ++i)
              ++hn[naive_epidemic(gr.g, p, 0, rb).total_infected - 1];
            double tv = testutil::tv_distance(he, hn);
            ++combos;
            if (tv > worst) {
              worst = tv;
              std::ostringstream ss;
              ss << gr.name << " beta=" << beta << " gamma=" << gamma
                 << (model == Model::sir ? " sir" : " seir") << (quarantine ? " q" : "");
              worst_at = ss.str();
            }
          }
        }
      }
    }
  }
  std::printf("      combos=%d worst TV=%.4f at %s\n", combos, worst, worst_at.c_str());
  return worst <= tv_cap;
}

// ---- 2: state machine under sustained quarantine ------------------------

bool criterion2() {
  const Graph& g = geocomm1000();
  EpidemicParams p;
  p.model = Model::seir;
  p.beta = 0.1;
  p.gamma = 0.05;  // 20-step quarantine
  p.exposed_mean = 5.0;
  p.q_capacity_fraction = 0.05;
  p.detect_threshold = 10;
  EpidemicEngine eng(g, p);
  eng.set_check_invariants(true);
  Rng rng = crng("c2");
  const int runs = 10000;
  for (int i = 0; i < runs; ++i) (void)eng.run(uniform_int(rng, g.n), rng);
  const auto& ck = eng.checks();
  std::printf("      runs=%d violations=%lld quarantine entries=%lld\n", runs, ck.violations,
              ck.quarantine_entries);
  if (ck.violations > 0) std::printf("      first: %s\n", ck.first.c_str());
  return ck.violations == 0 && ck.quarantine_entries > 0;
}

// ---- 3: exact structural invariants of the perturbations ----------------

bool criterion3() {
  Rng rng = crng("c3");
  const long long ops = 100000;
  bool ok = true;
  for (int rep = 0; rep < 10; ++rep) {
    int n = 30 + uniform_int(rng, 90);
    Graph g = planted_partition(n, 3, 0.5, 0.05, rng);
    g = connect_components_chung_lu(g, rng);

    Graph cm = rewire_cm(g, ops, rng);
    if (testutil::degree_sequence(cm) != testutil::degree_sequence(g)) {
      std::printf("      degree sequence broken (rep %d)\n", rep);
      ok = false;
    }
    for (int v = 0; v < g.n; ++v)
      if (cm.degree(v) != g.degree(v)) {
        std::printf("      per-node degree broken at %d (rep %d)\n", v, rep);
        ok = false;
        break;
      }

    Graph gp = rewire_gnp(g, ops, rng);
    if (gp.m != g.m) {
      std::printf("      edge count broken: %lld vs %lld (rep %d)\n", gp.m, g.m, rep);
      ok = false;
    }

    TriangleData td = triangle_weights(g);
    if (!td.h.tris.empty()) {
      HyperedgeList sh = shuffle_triangles(td.h, g.n, ops, rng);
      if (sh.tris.size() != td.h.tris.size()) {
        std::printf("      hyperedge count broken (rep %d)\n", rep);
        ok = false;
      }
      long long pair_cover = 0;
      for (const auto& t : sh.tris) {
        if (!(0 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] < g.n)) {
          std::printf("      malformed hyperedge (rep %d)\n", rep);
          ok = false;
        }
        pair_cover += 3;
      }
      if (pair_cover != 3 * static_cast<long long>(sh.tris.size())) ok = false;
    }
  }
  std::printf("      10 graphs x %lld ops per perturbation\n", ops);
  return ok;
}

// ---- 4: spectra: anchors and decay along the rewiring schedule -----------

bool criterion4() {
  bool ok = true;
  double k10 = lambda1(testutil::clique_graph(10)).value;
  double s16 = lambda1(testutil::star_graph(16)).value;
  double c4 = lambda1(testutil::cycle_graph(4)).value;
  if (std::fabs(k10 - 9.0) > 1e-6 || std::fabs(s16 - 4.0) > 1e-6 || std::fabs(c4 - 2.0) > 1e-6) {
    std::printf("      anchor eigenvalues off: %f %f %f\n", k10, s16, c4);
    ok = false;
  }

  const Graph& g = geocomm5000();
  RewireSchedule sched = rewire_schedule(g.m);
  Rng rng = crng("c4");
  Graph cur = g;
  double prev = lambda1(g, 1e-7).value;
  long long done = 0;
  int pairs = 0, non_increasing = 0;
  for (long long target : sched.counts) {
    cur = rewire_cm(cur, target - done, rng);  // continuing one swap chain
    done = target;
    double lam = lambda1(cur, 1e-7).value;
    ++pairs;
    if (lam <= prev + 1e-5) ++non_increasing;
    prev = lam;
  }
  int need = (pairs * 8 + 9) / 10;  // ceil(0.8 * pairs)
  std::printf("      anchors ok; schedule points=%d non-increasing=%d (need >= %d)\n", pairs,
              non_increasing, need);
  return ok && non_increasing >= need;
}

// ---- 5: sweep curves and PageRank push against dense references ----------

bool criterion5() {
  Rng rng = crng("c5");
  bool ok = true;
  int rankings = 0;
  for (int gi = 0; gi < 10 && ok; ++gi) {
    int n = 20 + uniform_int(rng, 81);  // up to 100 nodes
    Graph g = testutil::random_connected_graph(n, 0.1, rng);
    for (int ri = 0; ri < 10 && ok; ++ri) {
      std::vector<double> score(g.n);
      for (double& s : score) s = uniform01(rng);
      SweepCurve sw = sweepcut(g, score);
      ++rankings;
      std::vector<int> prefix;
      for (int k = 1; k < g.n; ++k) {
        prefix.push_back(sw.order[k - 1]);
        NodeSet ns = set_stats(g, prefix);
        if (ns.cut != sw.cut[k - 1] || ns.volume != sw.volume[k - 1] ||
            std::fabs(ns.conductance - sw.conductance[k - 1]) > 1e-12) {
          std::printf("      sweep mismatch at graph %d ranking %d k=%d\n", gi, ri, k);
          ok = false;
          break;
        }
      }
    }
  }

  const double alpha = 0.9;
  int solves = 0;
  for (int gi = 0; gi < 5 && ok; ++gi) {
    int n = 20 + uniform_int(rng, 81);
    Graph g = testutil::random_connected_graph(n, 0.08, rng);
    for (int si = 0; si < 4 && ok; ++si) {
      int seed = uniform_int(rng, g.n);
      for (double eps : {1e-4, 1e-6}) {
        std::vector<double> x = ppr_push(g, seed, alpha, eps);
        ++solves;
        for (int v = 0; v < g.n; ++v) {
          double ax = 0.0;
          for (int u : g.neighbors(v)) ax += x[u] / g.degree(u);
          double rho = (v == seed ? 1.0 - alpha : 0.0) - (x[v] - alpha * ax);
          if (rho < -1e-12 || rho / (1.0 - alpha) >= eps * g.degree(v) + 1e-15) {
            std::printf("      residual bound broken (graph %d seed %d eps %g)\n", gi, seed, eps);
            ok = false;
            break;
          }
        }
        std::vector<double> exact = testutil::dense_ppr(g, seed, alpha);
        double diff = 0.0;
        for (int v = 0; v < g.n; ++v) diff += std::fabs(exact[v] - x[v]);
        if (diff > eps * 2.0 * g.m / (1.0 - alpha) + 1e-12) {
          std::printf("      l1 error above budget (graph %d seed %d eps %g)\n", gi, seed, eps);
          ok = false;
        }
      }
    }
  }
  std::printf("      rankings=%d (all prefixes exact), ppr solves=%d\n", rankings, solves);
  return ok;
}

// ---- 6: quarantine effort U-shape across the rewiring axis ---------------

bool criterion6() {
  const Graph& orig = geocomm5000();
  Graph cm = cm_rewired(orig, 100, "c6-cm");
  Rng grng = crng("c6-gnp");
  Graph gnp = rewire_gnp(orig, 100 * orig.m, grng);

  // Cap 0.5: with ~10% of seeds fizzling, a 0.9 cap is met even by runaway
  // betas; 0.5 lands on the knee of the fraction-vs-beta curve.
  double beta = choose_beta(orig, Model::seir, a1_beta_grid(), 50,
                            SeedMix(kMaster).mix("c6-beta").value(), 0.5);

  SweepSpec spec;
  spec.variant_names = {"cm", "orig", "gnp"};
  spec.betas = {beta};
  spec.q_levels = {0.0, 0.05, 0.10, 0.15};
  spec.seeds_per_cell = 20;
  spec.model = Model::seir;
  spec.gamma = 0.05;
  spec.exposed_mean = 5.0;
  spec.master_seed = SeedMix(kMaster).mix("c6-sweep").value();
  SweepResult r = run_sweep(spec, {&cm, &orig, &gnp});
  UShapeTable t = aggregate_u_shape(r);

  const double target = 0.10;
  auto qstar = [&](int vi) {
    for (std::size_t qi = 0; qi < spec.q_levels.size(); ++qi)
      if (t.at(vi, static_cast<int>(qi)) < target) return static_cast<int>(qi);
    return std::numeric_limits<int>::max();
  };
  int q_cm = qstar(0), q_orig = qstar(1), q_gnp = qstar(2);
  std::printf("      beta=%.3g fractions:", beta);
  for (int vi = 0; vi < 3; ++vi) {
    std::printf(" %s=[", spec.variant_names[vi].c_str());
    for (int qi = 0; qi < 4; ++qi) std::printf("%s%.3f", qi ? " " : "", t.at(vi, qi));
    std::printf("]");
  }
  std::printf("\n      q* (index): orig=%d cm=%d gnp=%d\n", q_orig, q_cm, q_gnp);
  return q_orig < q_cm && q_orig < q_gnp;
}

// ---- 7: multi-scale structure score drops under degree-preserving mixing --

bool criterion7() {
  // exact zero for a flat profile
  NcpProfile flat(2000);
  flat.add(4, 1.0);
  flat.add(700, 1.0);
  if (aancp(flat, 2000) != 0.0) {
    std::printf("      flat profile aancp != 0\n");
    return false;
  }

  bool ok = true;
  struct Fam {
    const char* name;
    const Graph* orig;
    Graph cm;
  };
  std::vector<Fam> fams;
  fams.push_back({"geocomm5000", &geocomm5000(), cm_rewired(geocomm5000(), 100, "c7-cm-geo")});
  fams.push_back({"ring2000", &ring2000(), cm_rewired(ring2000(), 100, "c7-cm-ring")});
  for (const Fam& f : fams) {
    Rng ra = crng("c7-ncp-orig"), rb = crng("c7-ncp-cm");
    double a_orig = aancp(epidemic_ncp(*f.orig, 2000, 20, ra).profile, f.orig->n);
    double a_cm = aancp(epidemic_ncp(f.cm, 2000, 20, rb).profile, f.cm.n);
    std::printf("      %s: aancp orig=%.4f cm=%.4f\n", f.name, a_orig, a_cm);
    if (!(a_orig > a_cm)) ok = false;
  }
  return ok;
}

// ---- 8: structure score predicts quarantine impact -----------------------

bool criterion8() {
  struct Fam {
    const char* tag;
    const Graph* orig;
  };
  std::vector<double> aancps, impacts;
  for (Fam f : {Fam{"geo", &geocomm1000()}, Fam{"rw", &rwcomm1000()}}) {
    std::vector<Graph> variants;
    variants.push_back(*f.orig);
    // Graded shallow ladder: multipliers deep enough to separate the graphs
    // but short of full mixing, where every variant collapses onto the same
    // configuration-model score and rank order degenerates into noise ties.
    for (double mult : {0.1, 0.3, 1.0}) {
      Rng rng = SeedMix(kMaster)
                    .mix("c8-cm")
                    .mix(f.tag)
                    .mix((std::uint64_t)llround(mult * 100))
                    .rng();
      variants.push_back(
          rewire_cm(*f.orig, (long long)llround(mult * f.orig->m), rng));
    }

    double beta =
        choose_beta(*f.orig, Model::seir, a1_beta_grid(), 50,
                    SeedMix(kMaster).mix("c8-beta").mix(f.tag).value(), 0.5);
    SweepSpec spec;
    spec.variant_names = {"orig", "cm01", "cm03", "cm1"};
    spec.betas = {beta};
    spec.q_levels = {0.0, 0.10};
    spec.seeds_per_cell = 20;
    spec.model = Model::seir;
    spec.gamma = 0.05;
    spec.exposed_mean = 5.0;
    spec.master_seed = SeedMix(kMaster).mix("c8-sweep").mix(f.tag).value();
    SweepResult r =
        run_sweep(spec, {&variants[0], &variants[1], &variants[2], &variants[3]});
    std::vector<double> imp = impact_table(r, 1);

    for (int vi = 0; vi < 4; ++vi) {
      Rng rng = SeedMix(kMaster).mix("c8-ncp").mix(f.tag).mix(vi).rng();
      double a = aancp(epidemic_ncp(variants[vi], 300, 20, rng).profile, variants[vi].n);
      aancps.push_back(a);
      impacts.push_back(imp[vi]);
      std::printf("      %s/%s: aancp=%.4f impact=%.4f (beta=%.3g)\n", f.tag,
                  spec.variant_names[vi].c_str(), a, imp[vi], beta);
    }
  }
  double rho = spearman_rho(aancps, impacts);
  std::printf("      spearman over %zu graphs: %.4f (need > 0.5)\n", aancps.size(), rho);
  return rho > 0.5;
}

// ---- 9: low-conductance small sets shelter susceptible nodes -------------
//
// Corner selection: among the below-median-size bins, the bottom conductance
// decile. A plain ring of equal cliques is useless here: every node has the
// same expected susceptibility by symmetry, so the weights are flat; the
// community graph is where the effect is measurable.

bool criterion9() {
  const Graph& g = geocomm1000();
  Rng prng = crng("c9-ppr");
  PprNcpResult sets = ppr_ncp(g, 128, prng);

  int passed = 0;
  const double beta_levels[] = {0.005, 0.01, 0.02, 0.05};
  for (int bi = 0; bi < 4; ++bi) {
    double beta = beta_levels[bi];
    EpidemicParams p;
    p.model = Model::seir;
    p.beta = beta;
    p.gamma = 0.05;
    p.exposed_mean = 5.0;  // no quarantine
    EpidemicEngine eng(g, p);
    Rng rng = SeedMix(kMaster).mix("c9-epi").mix(static_cast<std::uint64_t>(bi)).rng();
    const int runs = 200;
    std::vector<double> susceptible(g.n, 0.0);
    for (int i = 0; i < runs; ++i) {
      const EpidemicOutcome& o = eng.run(uniform_int(rng, g.n), rng);
      for (int v = 0; v < g.n; ++v)
        if (o.final_susceptible[v]) susceptible[v] += 1.0;
    }
    for (double& s : susceptible) s /= runs;

    MissedSets ms = missed_sets(sets.sets, susceptible);
    struct Bin {
      double cond, size, weight;
    };
    std::vector<Bin> bins;
    for (int sb = 0; sb < NcpProfile::kSizeBins; ++sb)
      for (int cb = 0; cb < NcpProfile::kCondBins; ++cb) {
        std::size_t i = static_cast<std::size_t>(sb) * NcpProfile::kCondBins + cb;
        if (ms.weight[i] < 0.0) continue;
        bins.push_back({std::sqrt(ms.bins.cond_bin_lo(cb) * ms.bins.cond_bin_hi(cb)),
                        std::sqrt(ms.bins.size_bin_lo(sb) * ms.bins.size_bin_hi(sb)),
                        ms.weight[i]});
      }
    if (bins.size() < 8) {
      std::printf("      too few occupied bins (%zu) at beta=%g\n", bins.size(), beta);
      continue;
    }
    std::vector<double> sizes;
    for (const Bin& b : bins) sizes.push_back(b.size);
    std::sort(sizes.begin(), sizes.end());
    double size_thr = sizes[(sizes.size() - 1) / 2];
    std::vector<double> small_conds;
    for (const Bin& b : bins)
      if (b.size <= size_thr) small_conds.push_back(b.cond);
    std::sort(small_conds.begin(), small_conds.end());
    double cond_thr = small_conds[(small_conds.size() - 1) / 10];

    double sel_sum = 0, all_sum = 0;
    long long sel_n = 0;
    for (const Bin& b : bins) {
      all_sum += b.weight;
      if (b.size <= size_thr && b.cond <= cond_thr) {
        sel_sum += b.weight;
        ++sel_n;
      }
    }
    double sel_mean = sel_n ? sel_sum / sel_n : -1.0;
    double all_mean = all_sum / static_cast<double>(bins.size());
    bool dir = sel_n >= 1 && sel_n < static_cast<long long>(bins.size()) && sel_mean > all_mean;
    if (dir) ++passed;
    std::printf("      beta=%.3g bins=%zu selected=%lld mean(sel)=%.4f mean(all)=%.4f %s\n", beta,
                bins.size(), sel_n, sel_mean, all_mean, dir ? "ok" : "no");
  }
  std::printf("      direction holds for %d of 4 beta values (need >= 2)\n", passed);
  return passed >= 2;
}

// ---- 10: triangle shuffling weakens localized quarantine -----------------

bool criterion10() {
  const Graph& g = geocomm1000();
  TriangleData td = triangle_weights(g);
  Rng srng = crng("c10-shuffle");
  HyperedgeList shuffled = shuffle_triangles(td.h, g.n, 100000, srng);

  EpidemicParams base;
  base.model = Model::seir;
  base.beta = 0.02;
  base.gamma = 0.05;
  base.exposed_mean = 5.0;
  EpidemicParams with_q = base;
  with_q.q_capacity_fraction = 0.10;
  with_q.detect_threshold = 0;

  Rng seed_rng = crng("c10-seeds");
  std::vector<int> seeds(20);
  for (int& s : seeds) s = uniform_int(seed_rng, g.n);

  auto impact_for = [&](const HyperedgeList& h, const char* tag) {
    double sum_q = 0, sum_free = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      Rng ra = SeedMix(kMaster).mix("c10-run").mix(tag).mix(i).mix(0).rng();
      Rng rb = SeedMix(kMaster).mix("c10-run").mix(tag).mix(i).mix(1).rng();
      sum_free += static_cast<double>(run_epidemic_weighted(g, h, base, seeds[i], ra).total_infected);
      sum_q += static_cast<double>(run_epidemic_weighted(g, h, with_q, seeds[i], rb).total_infected);
    }
    return quarantine_impact(sum_q / seeds.size(), sum_free / seeds.size());
  };
  double orig = impact_for(td.h, "orig");
  double shuf = impact_for(shuffled, "shuffled");
  std::printf("      quarantine impact: original=%.4f shuffled=%.4f (20 seeds)\n", orig, shuf);
  return shuf < orig;
}

// ---- 11: sweep output determinism across reruns and worker counts --------

bool criterion11() {
  Graph orig = testutil::ring_of_cliques(20, 10);
  Graph cm = cm_rewired(orig, 10, "c11-cm");
  SweepSpec spec;
  spec.variant_names = {"cm", "orig"};
  spec.betas = {0.05, 0.1};
  spec.q_levels = {0.0, 0.05};
  spec.seeds_per_cell = 10;
  spec.model = Model::seir;
  spec.gamma = 0.05;
  spec.exposed_mean = 5.0;
  spec.master_seed = SeedMix(kMaster).mix("c11").value();

  auto render = [&](int workers) {
    SweepSpec s = spec;
    s.workers = workers;
    SweepResult r = run_sweep(s, {&cm, &orig});
    std::ostringstream ss;
    for (const CellResult& c : r.cells) ss << cell_ndjson_line(s, c) << '\n';
    for (const auto& per_q : r.susceptible)
      for (const auto& per_node : per_q)
        for (long long v : per_node) ss << v << ',';
    return ss.str();
  };
  std::string serial_a = render(1);
  std::string serial_b = render(1);
  std::string parallel = render(8);
  bool rerun_ok = serial_a == serial_b;
  bool workers_ok = serial_a == parallel;
  std::printf("      rerun identical=%s, 8-worker identical=%s (%zu bytes)\n",
              rerun_ok ? "yes" : "no", workers_ok ? "yes" : "no", serial_a.size());
  return rerun_ok && workers_ok;
}

struct Criterion {
  int id;
  const char* title;
  bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "engine and oracle outbreak distributions agree (TV <= 0.02)", criterion1},
    {2, "no state-machine violations under sustained quarantine", criterion2},
    {3, "perturbations preserve their exact structural invariants", criterion3},
    {4, "spectral anchors and non-increasing lambda1 along the cm schedule", criterion4},
    {5, "sweep curves and ppr push match dense references", criterion5},
    {6, "quarantine effort is lowest on the original community graph", criterion6},
    {7, "aancp drops under full degree-preserving rewiring", criterion7},
    {8, "aancp rank-correlates with quarantine impact (rho > 0.5)", criterion8},
    {9, "small low-conductance sets retain susceptible mass", criterion9},
    {10, "triangle shuffling lowers localized quarantine impact", criterion10},
    {11, "sweeps are byte-stable across reruns and worker counts", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: %s [--only N[,N...]]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    double t0 = now_s();
    bool pass = false;
    try {
      pass = c.fn();
    } catch (const std::exception& e) {
      std::printf("      exception: %s\n", e.what());
    }
    std::printf("[%2d] %s  %s (%.1fs)\n", c.id, pass ? "PASS" : "FAIL", c.title, now_s() - t0);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
