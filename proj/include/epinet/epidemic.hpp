#pragma once
// Discrete-time SEIR/SIR simulation with optional local quarantine.
//
// Dynamics, per integer step t (seed exposed at t = 0):
//   1. quarantine exits       (entered exactly q_duration() steps ago)
//   2. exposed -> infectious  (geometric latency, SEIR only)
//   3. scheduled neighbor quarantines
//   4. detection sweep        (random testing, ascending node id)
//   5. transmission           (per infectious neighbor, per step, prob beta)
//   6. recovery               (geometric infectious period)
// A node that became infectious at step c transmits on steps c+1 .. r where r
// is its recovery step (transmission happens before recovery within a step).
// Quarantined nodes neither transmit nor receive; a node quarantined at t can
// still become exposed at t (quarantine is attempted first but the infection
// is kept), and a node quarantined on its recovery step stays quarantined and
// leaves to R when the quarantine ends. Quarantined S nodes return to S.
//
// Two independent implementations of the same contract are provided: an
// event-driven engine (EpidemicEngine) and a per-step sweep (naive_epidemic),
// kept separate so they can be tested against each other distributionally.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

enum class Model { sir, seir };

struct EpidemicParams {
  Model model = Model::seir;
  double beta = 0.1;                 // per-step transmission probability
  double gamma = 0.05;               // per-step recovery probability
  double exposed_mean = 5.0;         // mean steps in E (SEIR)
  double q_capacity_fraction = 0.0;  // rolling quarantine capacity, fraction of n
  long long detect_threshold = 100;  // cumulative exposures before testing starts
  int node_detect_delay = 1;         // steps after exposure before detectable
  int neighbor_q_delay = 1;          // lag for quarantining a detectee's neighbors
  int max_steps = 0;                 // 0 = 100 * q_duration()

  int q_duration() const;  // round(1 / gamma), at least 1
  int effective_max_steps() const;
  void validate() const;
};

struct EpidemicOutcome {
  std::vector<long long> new_infections;  // indexed by step, 0..end_time
  std::vector<long long> net_infections;  // new minus removals per step
  std::vector<std::uint8_t> final_susceptible;
  long long total_infected = 0;
  int end_time = 0;  // first step with no exposed/infectious nodes left
  bool truncated = false;
};

// Union of the base edges and all pairs covered by a hyperedge, with
// per-arc transmission weight max(adjacency, triangles through the pair);
// pairs present only through hyperedges get the triangle count alone.
struct WeightedContacts {
  Graph contact;
  std::vector<int> arc_weight;  // aligned with contact.adj
};
WeightedContacts build_weighted_contacts(const Graph& g, const HyperedgeList& h);

class EpidemicEngine {
 public:
  // Uniform per-arc probability beta.
  EpidemicEngine(const Graph& g, const EpidemicParams& p);
  // Per-arc probability clamp(beta * weight, 1e-6, 1 - 1e-6).
  EpidemicEngine(const WeightedContacts& wc, const EpidemicParams& p);

  // Returned reference is reused by the next run; copy to keep.
  const EpidemicOutcome& run(int seed_node, Rng& rng);

  // Exposure step per node after run(), -1 where never exposed.
  const std::vector<int>& infection_times() const { return itime_view_; }

  struct Checks {
    long long violations = 0;
    std::string first;  // description of the first violation
    long long quarantine_entries = 0;
    long long exposed_while_quarantined = 0;  // same-step tie rule hits
    long long infectious_quarantined = 0;
  };
  void set_check_invariants(bool on) { check_ = on; }
  const Checks& checks() const { return checks_; }

 private:
  void init(const Graph& g, const std::vector<int>* w, const EpidemicParams& p);
  const Graph* g_ = nullptr;  // weighted ctor keeps a pointer into the WeightedContacts
  EpidemicParams p_;
  double log1m_beta_ = 0;
  double log1m_gamma_ = 0;
  double pe_ = 0;
  long long qcap_ = 0;
  int qdur_ = 0, max_steps_ = 0;
  std::vector<double> arc_log1mp_;  // empty for the uniform case
  std::vector<double> arc_p_;

  std::vector<std::int8_t> state_;
  std::vector<std::uint8_t> inq_;
  std::vector<int> itime_, ctime_, rtime_, qtime_;
  std::vector<int> itime_view_;
  std::vector<std::vector<std::pair<int, int>>> ihist_;  // (source, candidate t)
  std::vector<int> ihist_touched_;

  // Fixed-horizon bucket calendar; events beyond the horizon can never fire
  // (the run stops at max_steps) and are dropped at push time.
  struct Calendar {
    std::vector<std::vector<int>> bucket;
    std::vector<int> touched;
    int horizon = 0;
    void init(int h) {
      horizon = h;
      bucket.assign(h + 1, {});
      touched.clear();
    }
    void push(int t, int v) {
      if (t > horizon) return;
      if (bucket[t].empty()) touched.push_back(t);
      bucket[t].push_back(v);
    }
    void reset() {
      for (int t : touched) bucket[t].clear();
      touched.clear();
    }
  };
  Calendar cal_exit_, cal_cont_, cal_expo_, cal_recov_, cal_nq_;
  std::set<int> detectable_;  // E/I, not quarantined; maintained only when qcap_ > 0
  long long num_e_ = 0, num_i_ = 0, num_q_ = 0, cum_exposed_ = 0;
  std::vector<long long> new_inf_, removals_;
  EpidemicOutcome out_;
  bool check_ = false;
  Checks checks_;

  double arc_prob(long long a) const { return arc_log1mp_.empty() ? p_.beta : arc_p_[a]; }
  int transmission_delay(Rng& rng, long long a) {
    return arc_log1mp_.empty() ? geometric_from_log(rng, log1m_beta_)
                               : geometric_from_log(rng, arc_log1mp_[a]);
  }
  void detect_insert(int v);
  void detect_erase(int v);
  void add_candidate(int v, int u, int cand);
  void make_contagious(int u, int t, Rng& rng);
  void expose(int v, int t, Rng& rng);
  void quarantine(int v, int t);
  void violation(const std::string& what);
};

// Convenience wrappers returning a fresh outcome.
EpidemicOutcome run_epidemic(const Graph& g, const EpidemicParams& p, int seed_node, Rng& rng);
EpidemicOutcome run_epidemic_weighted(const Graph& g, const HyperedgeList& h,
                                      const EpidemicParams& p, int seed_node, Rng& rng);

// Independent per-step reference implementation (O(steps * m) per run).
EpidemicOutcome naive_epidemic(const Graph& g, const EpidemicParams& p, int seed_node, Rng& rng);
EpidemicOutcome naive_epidemic_weighted(const Graph& g, const HyperedgeList& h,
                                        const EpidemicParams& p, int seed_node, Rng& rng);

// 1 - with/without, clamped to [0, 1]. Throws if avg_without_q <= 0.
double quarantine_impact(double avg_with_q, double avg_without_q);

}  // namespace epinet
