#include "epinet/ncp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "epinet/epidemic.hpp"

namespace epinet {

std::optional<EpidemicRanking> epidemic_ranking(const Graph& g, int seed, int trials, double beta,
                                                Rng& rng, int max_trivial) {
  if (seed < 0 || seed >= g.n) throw std::out_of_range("epidemic_ranking: seed out of range");
  if (trials < 1) throw std::invalid_argument("epidemic_ranking: trials must be >= 1");
  EpidemicParams p;
  p.model = Model::seir;
  p.beta = beta;
  p.gamma = 0.05;
  p.q_capacity_fraction = 0.0;  // no quarantine while profiling
  EpidemicEngine eng(g, p);
  EpidemicRanking r;
  r.seed = seed;
  r.score.assign(g.n, 0.0);
  int trivial = 0;
  for (int i = 0; i < trials; ++i) {
    const EpidemicOutcome& out = eng.run(seed, rng);
    if (out.total_infected <= 1) ++trivial;
    const std::vector<int>& it = eng.infection_times();
    const double miss = out.end_time + 1.0;
    for (int v = 0; v < g.n; ++v)
      r.score[v] -= it[v] < 0 ? miss : std::min(static_cast<double>(it[v]), miss);
  }
  if (trivial > max_trivial) return std::nullopt;
  return r;
}

SweepCurve sweepcut(const Graph& g, const std::vector<double>& score) {
  const int n = g.n;
  if (static_cast<int>(score.size()) != n)
    throw std::invalid_argument("sweepcut: score length must equal node count");
  if (n < 2) throw std::invalid_argument("sweepcut: need at least two nodes");
  for (double s : score)
    if (!std::isfinite(s)) throw std::invalid_argument("sweepcut: scores must be finite");

  SweepCurve sw;
  sw.order.resize(n);
  std::iota(sw.order.begin(), sw.order.end(), 0);
  std::sort(sw.order.begin(), sw.order.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  sw.total_volume = 2 * g.m;
  sw.cut.reserve(n - 1);
  sw.volume.reserve(n - 1);
  sw.conductance.reserve(n - 1);

  std::vector<std::uint8_t> inset(n, 0);
  long long cut = 0, vol = 0;
  for (int i = 0; i + 1 < n; ++i) {
    int v = sw.order[i];
    vol += g.degree(v);
    for (int u : g.neighbors(v)) cut += inset[u] ? -1 : 1;
    inset[v] = 1;
    long long denom = std::min(vol, sw.total_volume - vol);
    sw.cut.push_back(cut);
    sw.volume.push_back(vol);
    sw.conductance.push_back(denom > 0 ? static_cast<double>(cut) / static_cast<double>(denom)
                                       : 1.0);
  }
  return sw;
}

int pick_min_in_window(const SweepCurve& sweep, double lb, double ub) {
  const long long len = static_cast<long long>(sweep.conductance.size());
  long long lo = static_cast<long long>(std::floor(lb)) + 1;  // smallest k > lb
  long long hi = static_cast<long long>(std::floor(ub));      // largest k <= ub
  lo = std::max(lo, 1LL);
  hi = std::min(hi, len);
  int best = -1;
  for (long long k = lo; k <= hi; ++k) {
    int idx = static_cast<int>(k - 1);
    if (best < 0 || sweep.conductance[idx] < sweep.conductance[best]) best = idx;
  }
  return best;
}

std::vector<NcpSample> subsample_profile(const Graph& g, const SweepCurve& sweep, int seed,
                                         int reps, Rng& rng) {
  std::vector<NcpSample> out;
  const long long maxk = static_cast<long long>(sweep.conductance.size());
  if (maxk == 0 || reps <= 0) return out;
  static constexpr double kSplits[] = {1.0, 1e2, 1e3, 1e4, 1e5,
                                       std::numeric_limits<double>::infinity()};
  for (int r = 0; r + 1 < static_cast<int>(std::size(kSplits)); ++r) {
    double lo = kSplits[r];
    if (lo > static_cast<double>(maxk)) break;
    double hi = std::min(kSplits[r + 1], static_cast<double>(maxk));
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int rep = 0; rep < reps; ++rep) {
      double a = std::pow(10.0, llo + uniform01(rng) * (lhi - llo));
      double b = std::pow(10.0, llo + uniform01(rng) * (lhi - llo));
      int idx = pick_min_in_window(sweep, std::min(a, b), std::max(a, b));
      if (idx < 0) continue;
      long long k = idx + 1;
      NcpSample s;
      s.seed = seed;
      s.size = std::min(k, g.n - k);
      s.cut = sweep.cut[idx];
      s.volume = std::min(sweep.volume[idx], sweep.total_volume - sweep.volume[idx]);
      s.conductance = sweep.conductance[idx];
      out.push_back(std::move(s));
    }
  }
  return out;
}

NcpProfile::NcpProfile(long long n) : n_(n) {
  if (n < 2) throw std::invalid_argument("ncp profile: need at least two nodes");
  log_size_hi_ = std::log10(std::max(2.0, static_cast<double>(n) / 2.0));
  count_.assign(static_cast<std::size_t>(kSizeBins) * kCondBins, 0);
  min_cond_.assign(kSizeBins, std::numeric_limits<double>::infinity());
  size_at_min_.assign(kSizeBins, 0);
}

int NcpProfile::size_bin(long long size) const {
  double s = std::min(std::max(1.0, static_cast<double>(size)),
                      std::pow(10.0, log_size_hi_));
  int b = static_cast<int>(kSizeBins * std::log10(s) / log_size_hi_);
  return std::min(std::max(b, 0), kSizeBins - 1);
}

int NcpProfile::cond_bin(double conductance) const {
  double c = std::min(1.0, std::max(kCondFloor, conductance));
  double span = -std::log10(kCondFloor);  // 6 decades
  int b = static_cast<int>(kCondBins * (std::log10(c) - std::log10(kCondFloor)) / span);
  return std::min(std::max(b, 0), kCondBins - 1);
}

double NcpProfile::size_bin_lo(int b) const {
  return std::pow(10.0, log_size_hi_ * b / kSizeBins);
}
double NcpProfile::size_bin_hi(int b) const {
  return std::pow(10.0, log_size_hi_ * (b + 1) / kSizeBins);
}
double NcpProfile::cond_bin_lo(int b) const {
  double span = -std::log10(kCondFloor);
  return std::pow(10.0, std::log10(kCondFloor) + span * b / kCondBins);
}
double NcpProfile::cond_bin_hi(int b) const {
  double span = -std::log10(kCondFloor);
  return std::pow(10.0, std::log10(kCondFloor) + span * (b + 1) / kCondBins);
}

void NcpProfile::add(long long size, double conductance) {
  if (size < 1) throw std::invalid_argument("ncp profile: set size must be >= 1");
  double c = std::min(1.0, std::max(kCondFloor, conductance));
  int sb = size_bin(size), cb = cond_bin(c);
  ++count_[static_cast<std::size_t>(sb) * kCondBins + cb];
  ++total_;
  if (c < min_cond_[sb]) {
    min_cond_[sb] = c;
    size_at_min_[sb] = size;
  }
}

std::vector<double> NcpProfile::column_normalized() const {
  std::vector<double> dens(count_.size(), 0.0);
  for (int sb = 0; sb < kSizeBins; ++sb) {
    long long mx = 0;
    for (int cb = 0; cb < kCondBins; ++cb)
      mx = std::max(mx, count_[static_cast<std::size_t>(sb) * kCondBins + cb]);
    if (mx == 0) continue;
    for (int cb = 0; cb < kCondBins; ++cb) {
      std::size_t i = static_cast<std::size_t>(sb) * kCondBins + cb;
      dens[i] = static_cast<double>(count_[i]) / static_cast<double>(mx);
    }
  }
  return dens;
}

double aancp(const NcpProfile& profile, long long n) {
  if (n != profile.nodes())
    throw std::invalid_argument("aancp: node count disagrees with the profile");
  const double half = static_cast<double>(n) / 2.0;
  std::vector<double> xs, ys;
  for (int sb = 0; sb < NcpProfile::kSizeBins; ++sb) {
    double c = profile.column_min_cond(sb);
    if (!std::isfinite(c)) continue;
    xs.push_back(std::log10(static_cast<double>(profile.column_size_at_min(sb)) / half));
    ys.push_back(-std::log10(c));
  }
  if (xs.size() < 2)
    throw std::domain_error("aancp: need at least two filled size columns");
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    area += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
  double span = xs.back() - xs.front();
  if (!(span > 0)) throw std::domain_error("aancp: degenerate size span");
  return area / span;
}

EpidemicNcpResult epidemic_ncp(const Graph& g, int seeds, int trials_per_seed, Rng& rng) {
  if (seeds < 1) throw std::invalid_argument("epidemic_ncp: seeds must be >= 1");
  EpidemicNcpResult res{NcpProfile(g.n), {}};
  const std::uint64_t master = rng();
  int accepted = 0;
  for (int i = 0; i < seeds; ++i) {
    Rng sr = SeedMix(master).mix("epi-ncp").mix(static_cast<std::uint64_t>(i)).rng();
    int seed = uniform_int(sr, g.n);
    auto ranking = epidemic_ranking(g, seed, trials_per_seed, 0.3, sr);
    if (!ranking) continue;
    ++accepted;
    SweepCurve sw = sweepcut(g, ranking->score);
    auto samples = subsample_profile(g, sw, seed, 8, sr);
    for (auto& s : samples) {
      res.profile.add(s);
      res.samples.push_back(std::move(s));
    }
  }
  if (accepted == 0) throw std::runtime_error("epidemic_ncp: every sampled seed was rejected");
  return res;
}

std::vector<double> ppr_push(const Graph& g, int seed, double alpha, double epsilon) {
  if (seed < 0 || seed >= g.n) throw std::out_of_range("ppr_push: seed out of range");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ppr_push: alpha in (0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("ppr_push: epsilon must be positive");
  std::vector<double> x(g.n, 0.0), r(g.n, 0.0);
  if (g.degree(seed) == 0) {  // nowhere to walk; all mass stays home
    x[seed] = 1.0;
    return x;
  }
  r[seed] = 1.0;
  std::vector<int> queue{seed};
  std::vector<std::uint8_t> queued(g.n, 0);
  queued[seed] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    queued[v] = 0;
    double d = static_cast<double>(g.degree(v));
    double rv = r[v];
    if (rv < epsilon * d) continue;
    x[v] += (1.0 - alpha) * rv;
    r[v] = 0.0;
    double spread = alpha * rv / d;
    for (int u : g.neighbors(v)) {
      r[u] += spread;
      if (!queued[u] && r[u] >= epsilon * g.degree(u)) {
        queued[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return x;
}

PprNcpResult ppr_ncp(const Graph& g, int seeds, Rng& rng) {
  if (seeds < 1) throw std::invalid_argument("ppr_ncp: seeds must be >= 1");
  if (g.n < 2) throw std::invalid_argument("ppr_ncp: need at least two nodes");
  PprNcpResult res{NcpProfile(g.n), {}};
  const double alpha = g.n > 45000 ? 0.995 : 0.99;
  std::vector<double> eps(12);
  for (int j = 0; j < 12; ++j) eps[j] = std::pow(10.0, -8.0 + 6.0 * j / 11.0);

  const long long total_vol = 2 * g.m;
  std::vector<std::uint8_t> inset(g.n, 0);
  std::vector<int> support;
  for (int i = 0; i < seeds; ++i) {
    int seed = uniform_int(rng, g.n);
    for (double e : eps) {
      std::vector<double> x = ppr_push(g, seed, alpha, e);
      support.clear();
      for (int v = 0; v < g.n; ++v)
        if (x[v] > 0.0) support.push_back(v);
      if (support.empty()) continue;
      std::sort(support.begin(), support.end(), [&](int a, int b) {
        double sa = x[a] / std::max(1, g.degree(a));
        double sb = x[b] / std::max(1, g.degree(b));
        if (sa != sb) return sa > sb;
        return a < b;
      });
      // sweep the support against the full graph
      long long cut = 0, vol = 0;
      int best_k = -1;
      long long best_cut = 0, best_vol = 0;
      double best_cond = std::numeric_limits<double>::infinity();
      int kmax = static_cast<int>(support.size());
      if (kmax >= g.n) kmax = g.n - 1;
      for (int k = 1; k <= kmax; ++k) {
        int v = support[k - 1];
        vol += g.degree(v);
        for (int u : g.neighbors(v)) cut += inset[u] ? -1 : 1;
        inset[v] = 1;
        long long denom = std::min(vol, total_vol - vol);
        double cond = denom > 0 ? static_cast<double>(cut) / static_cast<double>(denom) : 1.0;
        if (cond < best_cond) {
          best_cond = cond;
          best_k = k;
          best_cut = cut;
          best_vol = vol;
        }
      }
      for (int k = 0; k < kmax; ++k) inset[support[k]] = 0;
      if (best_k < 0) continue;
      NcpSample s;
      s.seed = seed;
      s.size = std::min<long long>(best_k, g.n - best_k);
      s.cut = best_cut;
      s.volume = std::min(best_vol, total_vol - best_vol);
      s.conductance = best_cond;
      s.members.assign(support.begin(), support.begin() + best_k);
      res.profile.add(s);
      res.sets.push_back(std::move(s));
    }
  }
  return res;
}

MissedSets missed_sets(const std::vector<NcpSample>& sets,
                       const std::vector<double>& susceptible) {
  const long long n = static_cast<long long>(susceptible.size());
  if (n < 2) throw std::invalid_argument("missed_sets: need at least two nodes");
  for (double s : susceptible)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("missed_sets: susceptibility values must be in [0, 1]");
  MissedSets out{NcpProfile(n), {}};
  std::vector<double> occ(out.bins.counts().size(), 0.0);
  std::vector<double> sus(out.bins.counts().size(), 0.0);
  for (const NcpSample& s : sets) {
    if (s.members.empty())
      throw std::invalid_argument("missed_sets: sets must carry their members");
    std::size_t bin = static_cast<std::size_t>(out.bins.size_bin(s.size)) * NcpProfile::kCondBins +
                      out.bins.cond_bin(s.conductance);
    out.bins.add(s);
    for (int v : s.members) {
      if (v < 0 || v >= n) throw std::out_of_range("missed_sets: member out of range");
      occ[bin] += 1.0;
      sus[bin] += susceptible[v];
    }
  }
  out.weight.assign(occ.size(), -1.0);
  for (std::size_t i = 0; i < occ.size(); ++i)
    if (occ[i] > 0.0) out.weight[i] = sus[i] / occ[i];
  return out;
}

}  // namespace epinet
