#pragma once

#include <vector>

#include "beamcap/capacity.hpp"
#include "beamcap/model.hpp"
#include "beamcap/random.hpp"

namespace beamcap {

/// Probe cost at a candidate pool of the given size: min(pool/2, B). The
/// schedule recursion applied to the pool actually remaining, which is what
/// keeps the per-use output bias at the schedule's marginal even when sizes
/// randomize (the schedule values equal these costs whenever they are
/// integral, since then the realized pool never deviates).
Rational probe_cost(int pool_size, int peak_cost);

/// Integer realization of a possibly fractional probe size: floor(c) or
/// floor(c)+1, the larger with probability frac(c), so the mean is exactly c.
int realize_probe_size(const Rational& c, RandomSource& rng);

/// The feedback-driven probing policy: uniformly random probes over the
/// still-consistent candidate set until the first Y=1 traps the direction in
/// the explored subset, then coin-flipped half probes of the trapped set.
class ProbeTracker {
 public:
  explicit ProbeTracker(const ModelParams& params);

  ProbeVector next_probe(RandomSource& rng);
  void update(int y);

  const ModelParams& params() const { return params_; }
  const CostSchedule& schedule() const { return schedule_; }
  const std::vector<int>& candidates() const { return candidates_; }
  const std::vector<int>& explored() const { return explored_; }
  bool detected() const { return detected_; }
  int detection_time() const { return detection_time_; }  // 0 if undetected
  int use_index() const { return use_index_; }

 private:
  ModelParams params_;
  CostSchedule schedule_;
  std::vector<int> candidates_;  // sorted
  std::vector<int> explored_;    // sorted; last probed subset
  bool detected_ = false;
  int detection_time_ = 0;
  int use_index_ = 0;
  bool probe_pending_ = false;
};

inline ProbeTracker init_tracker(const ModelParams& params) { return ProbeTracker(params); }

/// Lower half (the first ceil(t/2) elements) and upper half of a sorted
/// trapped set. Shared split rule between the policy and the codec.
std::pair<std::vector<int>, std::vector<int>> split_halves(const std::vector<int>& sorted_set);

/// Detailed output of the exact evaluation of H(Y^L | S) for the policy:
/// per-use conditional entropies, the exact all-zero-history probability
/// before each use, and the exact conditional P(Y_j = 1 | zeros).
struct PolicyTree {
  RateReport report;
  std::vector<Rational> zero_history_mass;  // P(Y^{j-1} = 0^{j-1} | S), j = 1..L
  std::vector<Rational> zero_marginal;      // P(Y_j = 1 | 0^{j-1}, S), j = 1..L
};

PolicyTree exact_policy_tree(const ModelParams& params);

/// H(Y^L|S)/L for the policy, computed by recursing over the collapsed
/// history tree with exact rational bookkeeping — independent of the
/// closed-form capacity evaluation.
RateReport exact_policy_entropy(const ModelParams& params);

}  // namespace beamcap
