#pragma once
// Network community profiles (NCPs): rank nodes around a seed, sweep prefix
// sets, subsample (size, conductance) records, and summarize the per-size
// minimum-conductance envelope as a single normalized-area scalar.
//
// Two ranking routes are provided: repeated-epidemic infection times and
// seeded PageRank (approximate push). Profiles are 2-D log-binned histograms
// over set size x conductance.

#include <optional>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/rng.hpp"

namespace epinet {

struct NcpSample {
  int seed = -1;
  long long size = 0;    // smaller-side cardinality, 1 <= size <= n/2
  long long cut = 0;
  long long volume = 0;  // smaller-side volume
  double conductance = 1.0;
  std::vector<int> members;  // filled for PageRank sets, empty otherwise
};

// Per-node closeness score around a seed; s[seed] = 0 is the maximum and
// never-infected nodes share the minimum.
struct EpidemicRanking {
  int seed = -1;
  std::vector<double> score;
};

// Runs `trials` SEIR epidemics (gamma 0.05, no quarantine) from `seed` and
// scores s[v] = -sum_i min(infection step of v in trial i, l_i + 1), where
// l_i is trial i's end step and uninfected nodes contribute l_i + 1.
// Returns nullopt when more than `max_trivial` trials fail to infect anyone
// beyond the seed.
std::optional<EpidemicRanking> epidemic_ranking(const Graph& g, int seed, int trials, double beta,
                                                Rng& rng, int max_trivial = 5);

// Conductance of every prefix of a ranking (score descending, ties by
// ascending id); entry k-1 describes the first k nodes, k = 1 .. n-1.
// Denominator is the smaller-side volume.
struct SweepCurve {
  std::vector<int> order;  // all n nodes
  std::vector<long long> cut;
  std::vector<long long> volume;  // raw prefix volume
  std::vector<double> conductance;
  long long total_volume = 0;  // 2m
};
SweepCurve sweepcut(const Graph& g, const std::vector<double>& score);

// Index (= k-1) of the minimum-conductance prefix with size k in (lb, ub],
// ties to the smallest k; -1 when the window contains no prefix.
int pick_min_in_window(const SweepCurve& sweep, double lb, double ub);

// Draws `reps` windows per size regime (regime splits at 10^2, 10^3, 10^4,
// 10^5; window bounds log-uniform within the regime) and records the best
// prefix inside each window. Empty windows are skipped.
std::vector<NcpSample> subsample_profile(const Graph& g, const SweepCurve& sweep, int seed,
                                         int reps, Rng& rng);

// 2-D histogram over 50 log size bins [1, n/2] x 50 log conductance bins
// [1e-6, 1]; conductance is clamped into that range on insertion. Also keeps
// the per-size-column minimum conductance and the size where it occurred.
class NcpProfile {
 public:
  static constexpr int kSizeBins = 50;
  static constexpr int kCondBins = 50;
  static constexpr double kCondFloor = 1e-6;

  explicit NcpProfile(long long n);

  void add(long long size, double conductance);
  void add(const NcpSample& s) { add(s.size, s.conductance); }

  long long nodes() const { return n_; }
  long long total() const { return total_; }
  int size_bin(long long size) const;
  int cond_bin(double conductance) const;
  double size_bin_lo(int b) const;
  double size_bin_hi(int b) const;
  double cond_bin_lo(int b) const;
  double cond_bin_hi(int b) const;
  long long count_at(int size_b, int cond_b) const {
    return count_[static_cast<std::size_t>(size_b) * kCondBins + cond_b];
  }
  const std::vector<long long>& counts() const { return count_; }
  // Density grid with every nonempty size column scaled so its max is 1.
  std::vector<double> column_normalized() const;
  // Per-column envelope; infinity / 0 where the column is empty.
  double column_min_cond(int size_b) const { return min_cond_[size_b]; }
  long long column_size_at_min(int size_b) const { return size_at_min_[size_b]; }

 private:
  long long n_ = 0;
  double log_size_hi_ = 0;  // log10(max(2, n/2))
  long long total_ = 0;
  std::vector<long long> count_;
  std::vector<double> min_cond_;
  std::vector<long long> size_at_min_;
};

// Normalized area between conductance 1 and the profile's minimum-conductance
// envelope, in log10-log10 coordinates with sizes normalized by n/2:
// trapezoidal integral of -log10(cond) over log10(size / (n/2)), divided by
// the spanned log10 range. Throws if fewer than two size columns are filled.
double aancp(const NcpProfile& profile, long long n);

struct EpidemicNcpResult {
  NcpProfile profile;
  std::vector<NcpSample> samples;
};
// Draws `seeds` seed nodes uniformly with replacement, ranks/sweeps/subsamples
// each accepted seed, and bins everything. Throws if every seed is rejected.
EpidemicNcpResult epidemic_ncp(const Graph& g, int seeds, int trials_per_seed, Rng& rng);

// Approximate seeded PageRank by local push: returns x >= 0 with
// (I - alpha A D^-1) x = (1-alpha) e_seed up to a per-node residual below
// epsilon * degree(v); ||x||_1 <= 1.
std::vector<double> ppr_push(const Graph& g, int seed, double alpha, double epsilon);

struct PprNcpResult {
  NcpProfile profile;
  std::vector<NcpSample> sets;  // members stored, one record per (seed, epsilon)
};
// Per seed, runs ppr_push over a 12-step epsilon ladder in [1e-8, 1e-2],
// ranks by x/degree, sweeps the support, and keeps each ladder step's best
// prefix with its members. alpha = 0.995 when n > 45000, else 0.99.
PprNcpResult ppr_ncp(const Graph& g, int seeds, Rng& rng);

struct MissedSets {
  NcpProfile bins;             // occupancy of the stored sets
  std::vector<double> weight;  // per bin: susceptible fraction of member occurrences; -1 if empty
};
// Bins stored sets by (size, conductance) and weights each bin by the mean
// susceptibility of its member occurrences. `susceptible` holds one value in
// [0, 1] per node (1 = untouched by every epidemic).
MissedSets missed_sets(const std::vector<NcpSample>& sets,
                       const std::vector<double>& susceptible);

}  // namespace epinet
