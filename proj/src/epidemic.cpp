#include "epinet/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace epinet {

namespace {

constexpr std::int8_t kS = 0, kE = 1, kI = 2, kR = 3;
constexpr double kProbFloor = 1e-6;

double clamp_arc_prob(double p) {
  return std::min(1.0 - kProbFloor, std::max(kProbFloor, p));
}

long long capacity_from_fraction(double f, int n) {
  return static_cast<long long>(std::floor(f * static_cast<double>(n)));
}

}  // namespace

int EpidemicParams::q_duration() const {
  return std::max(1, static_cast<int>(std::llround(1.0 / gamma)));
}

int EpidemicParams::effective_max_steps() const {
  return max_steps > 0 ? max_steps : 100 * q_duration();
}

void EpidemicParams::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("epidemic: beta must be in [0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("epidemic: gamma must be in (0, 1]");
  if (model == Model::seir && !(exposed_mean >= 1.0))
    throw std::invalid_argument("epidemic: exposed_mean must be >= 1");
  if (!(q_capacity_fraction >= 0.0 && q_capacity_fraction <= 1.0))
    throw std::invalid_argument("epidemic: q_capacity_fraction must be in [0, 1]");
  if (detect_threshold < 0) throw std::invalid_argument("epidemic: detect_threshold must be >= 0");
  if (node_detect_delay < 0 || neighbor_q_delay < 0)
    throw std::invalid_argument("epidemic: delays must be >= 0");
  if (max_steps < 0) throw std::invalid_argument("epidemic: max_steps must be >= 0");
}

WeightedContacts build_weighted_contacts(const Graph& g, const HyperedgeList& h) {
  auto key = [](int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
  };
  std::unordered_map<std::uint64_t, int> tri;
  tri.reserve(h.tris.size() * 3);
  for (const auto& tr : h.tris) {
    for (int x : tr)
      if (x < 0 || x >= g.n) throw std::invalid_argument("weighted contacts: node out of range");
    if (tr[0] == tr[1] || tr[0] == tr[2] || tr[1] == tr[2])
      throw std::invalid_argument("weighted contacts: degenerate hyperedge");
    ++tri[key(tr[0], tr[1])];
    ++tri[key(tr[0], tr[2])];
    ++tri[key(tr[1], tr[2])];
  }
  std::vector<std::pair<int, int>> edges = g.edge_list();
  for (const auto& kv : tri) {
    int u = static_cast<int>(kv.first >> 32);
    int v = static_cast<int>(kv.first & 0xffffffffULL);
    if (!g.has_edge(u, v)) edges.emplace_back(u, v);
  }
  WeightedContacts wc;
  wc.contact = Graph::from_edges(g.n, edges);
  wc.arc_weight.assign(wc.contact.adj.size(), 1);
  for (int u = 0; u < wc.contact.n; ++u) {
    for (long long a = wc.contact.off[u]; a < wc.contact.off[u + 1]; ++a) {
      int v = wc.contact.adj[a];
      auto it = tri.find(key(u, v));
      int t = it == tri.end() ? 0 : it->second;
      int base = g.has_edge(u, v) ? 1 : 0;
      wc.arc_weight[a] = std::max(base, t);
    }
  }
  return wc;
}

EpidemicEngine::EpidemicEngine(const Graph& g, const EpidemicParams& p) { init(g, nullptr, p); }

EpidemicEngine::EpidemicEngine(const WeightedContacts& wc, const EpidemicParams& p) {
  if (wc.arc_weight.size() != wc.contact.adj.size())
    throw std::invalid_argument("epidemic: arc weights misaligned with contact graph");
  init(wc.contact, &wc.arc_weight, p);
}

void EpidemicEngine::init(const Graph& g, const std::vector<int>* w, const EpidemicParams& p) {
  p.validate();
  if (g.n <= 0) throw std::invalid_argument("epidemic: empty graph");
  g_ = &g;
  p_ = p;
  log1m_beta_ = std::log1p(-p_.beta);  // -inf when beta == 1; geometric handles it
  log1m_gamma_ = std::log1p(-p_.gamma);
  pe_ = p_.model == Model::seir ? 1.0 / p_.exposed_mean : 0.0;
  qdur_ = p_.q_duration();
  max_steps_ = p_.effective_max_steps();
  qcap_ = capacity_from_fraction(p_.q_capacity_fraction, g.n);
  if (w) {
    arc_p_.resize(w->size());
    arc_log1mp_.resize(w->size());
    for (std::size_t a = 0; a < w->size(); ++a) {
      double pa = clamp_arc_prob(p_.beta * (*w)[a]);
      arc_p_[a] = pa;
      arc_log1mp_[a] = std::log1p(-pa);
    }
  }
  int n = g.n;
  state_.assign(n, kS);
  inq_.assign(n, 0);
  itime_.assign(n, kNever);
  ctime_.assign(n, kNever);
  rtime_.assign(n, kNever);
  qtime_.assign(n, -1);
  itime_view_.assign(n, -1);
  ihist_.assign(n, {});
  ihist_touched_.clear();
  for (Calendar* c : {&cal_exit_, &cal_cont_, &cal_expo_, &cal_recov_, &cal_nq_})
    c->init(max_steps_);
  detectable_.clear();
}

void EpidemicEngine::detect_insert(int v) {
  if (qcap_ > 0) detectable_.insert(v);
}

void EpidemicEngine::detect_erase(int v) {
  if (qcap_ > 0) detectable_.erase(v);
}

void EpidemicEngine::add_candidate(int v, int u, int cand) {
  auto& h = ihist_[v];
  if (h.empty()) ihist_touched_.push_back(v);
  h.emplace_back(u, cand);
  if (cand < itime_[v]) {
    itime_[v] = cand;
    cal_expo_.push(cand, v);
  }
}

void EpidemicEngine::make_contagious(int u, int t, Rng& rng) {
  state_[u] = kI;
  ctime_[u] = t;
  int d = geometric_from_log(rng, log1m_gamma_);
  rtime_[u] = d >= kNever ? kNever : t + d;
  cal_recov_.push(rtime_[u], u);
  const Graph& g = *g_;
  auto nb = g.neighbors(u);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    int w = nb[k];
    if (state_[w] != kS || inq_[w]) continue;
    int d2 = transmission_delay(rng, g.off[u] + k);
    if (d2 >= kNever) continue;
    int cand = t + d2;  // first transmission chance is the step after ctime
    if (cand > rtime_[u]) continue;
    add_candidate(w, u, cand);
  }
}

void EpidemicEngine::expose(int v, int t, Rng& rng) {
  ++cum_exposed_;
  ++new_inf_[t];
  itime_[v] = t;
  bool frozen = inq_[v] != 0;  // quarantined this very step, before transmission
  if (frozen) ++checks_.exposed_while_quarantined;
  if (p_.model == Model::sir) {
    ++num_i_;
    if (frozen) {
      state_[v] = kI;
      ctime_[v] = t;
      rtime_[v] = qtime_[v] + qdur_;  // sits out its quarantine, leaves recovered
      ++checks_.infectious_quarantined;
    } else {
      make_contagious(v, t, rng);
      detect_insert(v);
    }
  } else {
    ++num_e_;
    state_[v] = kE;
    if (frozen) {
      ctime_[v] = rtime_[v] = qtime_[v] + qdur_;
    } else {
      int d = geometric(rng, pe_);
      ctime_[v] = d >= kNever ? kNever : t + d;
      cal_cont_.push(ctime_[v], v);
      detect_insert(v);
    }
  }
}

void EpidemicEngine::quarantine(int v, int t) {
  ++checks_.quarantine_entries;
  if (check_ && (inq_[v] || num_q_ >= qcap_)) violation("bad quarantine entry");
  inq_[v] = 1;
  qtime_[v] = t;
  ++num_q_;
  cal_exit_.push(t + qdur_, v);
  switch (state_[v]) {
    case kS: {
      // drop pending exposures after today; a candidate landing exactly on the
      // entry step still infects (quarantine does not outrun the same step)
      auto& h = ihist_[v];
      h.erase(std::remove_if(h.begin(), h.end(),
                             [&](const std::pair<int, int>& e) { return e.second > t; }),
              h.end());
      int mn = kNever;
      for (const auto& e : h) mn = std::min(mn, e.second);
      itime_[v] = mn;
      break;
    }
    case kE:
      ctime_[v] = rtime_[v] = t + qdur_;  // frozen; leaves as removed
      detect_erase(v);
      break;
    case kI: {
      ++checks_.infectious_quarantined;
      rtime_[v] = t + qdur_;
      detect_erase(v);
      // v stops transmitting immediately: retract its pending candidates
      const Graph& g = *g_;
      for (int w : g.neighbors(v)) {
        if (state_[w] != kS) continue;
        auto& h = ihist_[w];
        auto pos = std::find_if(h.begin(), h.end(),
                                [&](const std::pair<int, int>& e) { return e.first == v; });
        if (pos == h.end()) continue;
        h.erase(pos);
        int mn = kNever;
        for (const auto& e : h) mn = std::min(mn, e.second);
        if (mn != itime_[w]) {
          itime_[w] = mn;
          cal_expo_.push(mn, w);
        }
      }
      break;
    }
    default:
      break;  // recovered nodes just sit it out
  }
}

void EpidemicEngine::violation(const std::string& what) {
  ++checks_.violations;
  if (checks_.first.empty()) checks_.first = what;
}

const EpidemicOutcome& EpidemicEngine::run(int seed_node, Rng& rng) {
  const Graph& g = *g_;
  const int n = g.n;
  if (seed_node < 0 || seed_node >= n)
    throw std::out_of_range("epidemic: seed node out of range");

  std::fill(state_.begin(), state_.end(), kS);
  std::fill(inq_.begin(), inq_.end(), 0);
  std::fill(itime_.begin(), itime_.end(), kNever);
  std::fill(ctime_.begin(), ctime_.end(), kNever);
  std::fill(rtime_.begin(), rtime_.end(), kNever);
  std::fill(qtime_.begin(), qtime_.end(), -1);
  for (int v : ihist_touched_) ihist_[v].clear();
  ihist_touched_.clear();
  for (Calendar* c : {&cal_exit_, &cal_cont_, &cal_expo_, &cal_recov_, &cal_nq_}) c->reset();
  detectable_.clear();
  num_e_ = num_i_ = num_q_ = 0;
  new_inf_.assign(1, 1);
  removals_.assign(1, 0);

  // seed exposed at t = 0
  cum_exposed_ = 1;
  itime_[seed_node] = 0;
  if (p_.model == Model::sir) {
    ++num_i_;
    make_contagious(seed_node, 0, rng);
  } else {
    ++num_e_;
    state_[seed_node] = kE;
    int d = geometric(rng, pe_);
    ctime_[seed_node] = d >= kNever ? kNever : d;
    cal_cont_.push(ctime_[seed_node], seed_node);
  }
  detect_insert(seed_node);

  bool done = false;
  int t = 1;
  for (; t <= max_steps_ && !done; ++t) {
    new_inf_.push_back(0);
    removals_.push_back(0);

    {  // 1. quarantine exits
      auto& b = cal_exit_.bucket[t];
      for (std::size_t i = 0; i < b.size(); ++i) {
        int v = b[i];
        if (!inq_[v] || qtime_[v] + qdur_ != t) continue;
        inq_[v] = 0;
        --num_q_;
        if (state_[v] == kS) {
          // back in circulation: fresh clocks against currently active neighbors
          auto nb = g.neighbors(v);
          for (std::size_t k = 0; k < nb.size(); ++k) {
            int u = nb[k];
            if (state_[u] != kI || inq_[u]) continue;
            int d = transmission_delay(rng, g.off[v] + k);
            if (d >= kNever) continue;
            int cand = t - 1 + d;  // may land on this very step
            if (cand <= rtime_[u]) add_candidate(v, u, cand);
          }
        } else if (state_[v] == kE) {
          state_[v] = kR;
          --num_e_;
          ++removals_[t];
        } else if (state_[v] == kI) {
          state_[v] = kR;
          --num_i_;
          ++removals_[t];
        }
      }
    }

    {  // 2. exposed -> infectious
      auto& b = cal_cont_.bucket[t];
      for (std::size_t i = 0; i < b.size(); ++i) {
        int v = b[i];
        if (state_[v] != kE || inq_[v] || ctime_[v] != t) continue;
        --num_e_;
        ++num_i_;
        make_contagious(v, t, rng);
      }
    }

    {  // 3. scheduled neighbor quarantines
      auto& b = cal_nq_.bucket[t];
      for (std::size_t i = 0; i < b.size() && num_q_ < qcap_; ++i) {
        int w = b[i];
        if (!inq_[w]) quarantine(w, t);
      }
    }

    // 4. detection sweep, ascending id over free exposed/infectious nodes
    if (qcap_ > 0 && cum_exposed_ >= p_.detect_threshold) {
      int last = -1;
      while (num_q_ < qcap_) {
        auto it = detectable_.upper_bound(last);
        if (it == detectable_.end()) break;
        int v = *it;
        last = v;
        if (itime_[v] + p_.node_detect_delay > t) continue;
        long long rem = qcap_ - num_q_;
        if (uniform01(rng) > 1.0 / static_cast<double>(rem + 1)) continue;
        quarantine(v, t);
        if (p_.neighbor_q_delay == 0) {
          for (int u : g.neighbors(v)) {
            if (num_q_ >= qcap_) break;
            if (!inq_[u]) quarantine(u, t);
          }
        } else {
          for (int u : g.neighbors(v))
            if (!inq_[u]) cal_nq_.push(t + p_.neighbor_q_delay, u);
        }
      }
    }

    {  // 5. transmission
      auto& b = cal_expo_.bucket[t];
      for (std::size_t i = 0; i < b.size(); ++i) {
        int v = b[i];
        if (state_[v] != kS || itime_[v] != t) continue;
        if (inq_[v] && qtime_[v] != t) continue;
        expose(v, t, rng);
      }
    }

    {  // 6. recovery
      auto& b = cal_recov_.bucket[t];
      for (std::size_t i = 0; i < b.size(); ++i) {
        int v = b[i];
        if (state_[v] != kI || inq_[v] || rtime_[v] != t) continue;
        state_[v] = kR;
        --num_i_;
        ++removals_[t];
        detect_erase(v);
      }
    }

    done = (num_e_ + num_i_ == 0);
  }

  out_.end_time = done ? t - 1 : max_steps_;
  out_.truncated = !done;
  out_.new_infections = new_inf_;
  out_.net_infections.resize(new_inf_.size());
  for (std::size_t s = 0; s < new_inf_.size(); ++s)
    out_.net_infections[s] = new_inf_[s] - removals_[s];
  out_.final_susceptible.resize(n);
  for (int v = 0; v < n; ++v) out_.final_susceptible[v] = state_[v] == kS ? 1 : 0;
  out_.total_infected = cum_exposed_;
  for (int v = 0; v < n; ++v) itime_view_[v] = state_[v] == kS ? -1 : itime_[v];

  if (check_) {
    long long nq = 0;
    for (int v = 0; v < n; ++v) nq += inq_[v];
    if (nq != num_q_) violation("quarantine count drift");
    if (num_q_ > qcap_) violation("quarantine capacity exceeded");
    long long series = 0;
    for (long long x : new_inf_) series += x;
    if (series != cum_exposed_) violation("per-step series disagrees with total");
    for (int v = 0; v < n; ++v) {
      if (!out_.truncated && inq_[v] && (state_[v] == kE || state_[v] == kI))
        violation("active node still quarantined after termination");
      if (state_[v] != kS &&
          (itime_[v] < 0 || itime_[v] > ctime_[v] || ctime_[v] > rtime_[v]))
        violation("itime <= ctime <= rtime violated");
    }
  }
  return out_;
}

EpidemicOutcome run_epidemic(const Graph& g, const EpidemicParams& p, int seed_node, Rng& rng) {
  EpidemicEngine eng(g, p);
  return eng.run(seed_node, rng);
}

EpidemicOutcome run_epidemic_weighted(const Graph& g, const HyperedgeList& h,
                                      const EpidemicParams& p, int seed_node, Rng& rng) {
  WeightedContacts wc = build_weighted_contacts(g, h);
  EpidemicEngine eng(wc, p);
  return eng.run(seed_node, rng);
}

namespace {

// Straight per-step sweep over all nodes. Deliberately shares no machinery
// with EpidemicEngine beyond the parameter struct.
EpidemicOutcome naive_run(const Graph& g, const std::vector<double>* arc_p,
                          const EpidemicParams& p, int seed_node, Rng& rng) {
  p.validate();
  const int n = g.n;
  if (n <= 0) throw std::invalid_argument("epidemic: empty graph");
  if (seed_node < 0 || seed_node >= n)
    throw std::out_of_range("epidemic: seed node out of range");
  const int qdur = p.q_duration();
  const int max_steps = p.effective_max_steps();
  const long long qcap = capacity_from_fraction(p.q_capacity_fraction, n);
  const double pe = p.model == Model::seir ? 1.0 / p.exposed_mean : 0.0;

  std::vector<std::int8_t> state(n, kS);
  std::vector<std::uint8_t> inq(n, 0);
  std::vector<int> itime(n, -1), became_i(n, kNever), qtime(n, -1);
  std::vector<std::vector<int>> nq_sched(max_steps + 1);
  std::vector<long long> new_inf{1}, removals{0};
  long long num_e = 0, num_i = 0, num_q = 0, cum = 1;

  itime[seed_node] = 0;
  if (p.model == Model::sir) {
    state[seed_node] = kI;
    became_i[seed_node] = 0;
    num_i = 1;
  } else {
    state[seed_node] = kE;
    num_e = 1;
  }

  auto prob = [&](long long a) { return arc_p ? (*arc_p)[a] : p.beta; };

  bool done = false;
  int t = 1;
  for (; t <= max_steps && !done; ++t) {
    new_inf.push_back(0);
    removals.push_back(0);

    // 1. quarantine exits
    for (int v = 0; v < n; ++v) {
      if (!inq[v] || qtime[v] + qdur != t) continue;
      inq[v] = 0;
      --num_q;
      if (state[v] == kE) {
        state[v] = kR;
        --num_e;
        ++removals[t];
      } else if (state[v] == kI) {
        state[v] = kR;
        --num_i;
        ++removals[t];
      }
    }

    // 2. exposed -> infectious
    if (p.model == Model::seir) {
      for (int v = 0; v < n; ++v) {
        if (state[v] != kE || inq[v] || itime[v] >= t) continue;
        if (uniform01(rng) <= pe) {
          state[v] = kI;
          became_i[v] = t;
          --num_e;
          ++num_i;
        }
      }
    }

    // 3. scheduled neighbor quarantines
    for (int w : nq_sched[t]) {
      if (num_q >= qcap) break;
      if (inq[w]) continue;
      inq[w] = 1;
      qtime[w] = t;
      ++num_q;
    }

    // 4. detection sweep
    if (qcap > 0 && cum >= p.detect_threshold) {
      for (int v = 0; v < n && num_q < qcap; ++v) {
        if ((state[v] != kE && state[v] != kI) || inq[v]) continue;
        if (itime[v] + p.node_detect_delay > t) continue;
        long long rem = qcap - num_q;
        if (uniform01(rng) > 1.0 / static_cast<double>(rem + 1)) continue;
        inq[v] = 1;
        qtime[v] = t;
        ++num_q;
        if (p.neighbor_q_delay == 0) {
          for (int u : g.neighbors(v)) {
            if (num_q >= qcap) break;
            if (!inq[u]) {
              inq[u] = 1;
              qtime[u] = t;
              ++num_q;
            }
          }
        } else if (t + p.neighbor_q_delay <= max_steps) {
          for (int u : g.neighbors(v))
            if (!inq[u]) nq_sched[t + p.neighbor_q_delay].push_back(u);
        }
      }
    }

    // 5. transmission
    for (int v = 0; v < n; ++v) {
      if (state[v] != kS) continue;
      if (inq[v] && qtime[v] != t) continue;
      bool hit = false;
      auto nb = g.neighbors(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        int u = nb[k];
        if (state[u] != kI || inq[u] || became_i[u] >= t) continue;
        if (uniform01(rng) <= prob(g.off[v] + k)) {
          hit = true;
          break;
        }
      }
      if (!hit) continue;
      itime[v] = t;
      ++cum;
      ++new_inf[t];
      if (p.model == Model::sir) {
        state[v] = kI;
        became_i[v] = t;
        ++num_i;
      } else {
        state[v] = kE;
        ++num_e;
      }
    }

    // 6. recovery
    for (int v = 0; v < n; ++v) {
      if (state[v] != kI || inq[v] || became_i[v] >= t) continue;
      if (uniform01(rng) <= p.gamma) {
        state[v] = kR;
        --num_i;
        ++removals[t];
      }
    }

    done = (num_e + num_i == 0);
  }

  EpidemicOutcome out;
  out.end_time = done ? t - 1 : max_steps;
  out.truncated = !done;
  out.new_infections = std::move(new_inf);
  out.net_infections.resize(out.new_infections.size());
  for (std::size_t s = 0; s < out.new_infections.size(); ++s)
    out.net_infections[s] = out.new_infections[s] - removals[s];
  out.final_susceptible.resize(n);
  for (int v = 0; v < n; ++v) out.final_susceptible[v] = state[v] == kS ? 1 : 0;
  out.total_infected = cum;
  return out;
}

}  // namespace

EpidemicOutcome naive_epidemic(const Graph& g, const EpidemicParams& p, int seed_node, Rng& rng) {
  return naive_run(g, nullptr, p, seed_node, rng);
}

EpidemicOutcome naive_epidemic_weighted(const Graph& g, const HyperedgeList& h,
                                        const EpidemicParams& p, int seed_node, Rng& rng) {
  WeightedContacts wc = build_weighted_contacts(g, h);
  std::vector<double> pa(wc.arc_weight.size());
  for (std::size_t a = 0; a < pa.size(); ++a)
    pa[a] = clamp_arc_prob(p.beta * wc.arc_weight[a]);
  return naive_run(wc.contact, &pa, p, seed_node, rng);
}

double quarantine_impact(double avg_with_q, double avg_without_q) {
  if (!(avg_without_q > 0.0))
    throw std::domain_error("quarantine_impact: baseline average must be positive");
  double r = 1.0 - avg_with_q / avg_without_q;
  return std::min(1.0, std::max(0.0, r));
}

}  // namespace epinet
