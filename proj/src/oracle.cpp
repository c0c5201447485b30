#include "beamcap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "beamcap/parallel.hpp"
#include "beamcap/strategy.hpp"

namespace beamcap {

DpSolution dp_optimal_rate(const ModelParams& params) {
  params.validate();
  const int m = params.num_beams;
  const int length = params.block_length;
  const int budget = params.peak_cost;

  DpSolution sol;
  sol.value.assign(static_cast<std::size_t>(length) + 2,
                   std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  sol.best_size.assign(static_cast<std::size_t>(length) + 2,
                       std::vector<int>(static_cast<std::size_t>(m) + 1, 0));

  for (int j = length; j >= 1; --j) {
    for (int u = 1; u <= m; ++u) {
      double best = -1.0;
      int best_a = 0;
      const int a_max = std::min(budget, u);
      for (int a = 0; a <= a_max; ++a) {
        const double q = static_cast<double>(a) / u;
        // Detection at use j pays one bit on each of the L - j remaining uses.
        const double cont = (u - a >= 1) ? sol.value[j + 1][u - a] : 0.0;
        const double val = binary_entropy(q) + q * static_cast<double>(length - j) +
                           (1.0 - q) * cont;
        if (val > best) {  // strict: ties resolve to the smaller size
          best = val;
          best_a = a;
        }
      }
      sol.value[j][u] = best;
      sol.best_size[j][u] = best_a;
    }
  }
  sol.total_value = sol.value[1][m];
  sol.rate = sol.total_value / static_cast<double>(length);
  return sol;
}

namespace {

double evaluate_assignment(const std::vector<int>& sizes, int m, int length) {
  double total = 0.0;
  double zero_prob = 1.0;
  int pool = m;
  for (int j = 0; j < length; ++j) {
    const double q = pool > 0 ? static_cast<double>(sizes[static_cast<std::size_t>(j)]) / pool : 0.0;
    total += zero_prob * (binary_entropy(q) + q * static_cast<double>(length - j - 1));
    zero_prob *= (1.0 - q);
    pool -= sizes[static_cast<std::size_t>(j)];
  }
  return total;
}

void enumerate_assignments(std::vector<int>& sizes, int j, int pool, int budget,
                           int m, int length, double& best) {
  if (j == length) {
    best = std::max(best, evaluate_assignment(sizes, m, length));
    return;
  }
  const int a_max = std::min(budget, pool);
  for (int a = 0; a <= a_max; ++a) {
    sizes[static_cast<std::size_t>(j)] = a;
    enumerate_assignments(sizes, j + 1, pool - a, budget, m, length, best);
  }
}

}  // namespace

double brute_force_small(const ModelParams& params) {
  params.validate();
  if (params.num_beams > 8 || params.block_length > 4)
    throw guard_error("brute_force_small admits M <= 8 and L <= 4 only");
  std::vector<int> sizes(static_cast<std::size_t>(params.block_length), 0);
  double best = 0.0;
  enumerate_assignments(sizes, 0, params.num_beams, params.peak_cost,
                        params.num_beams, params.block_length, best);
  return best / static_cast<double>(params.block_length);
}

namespace {

constexpr int kMcShards = 64;

struct CountTable {
  // signature -> count; signature = (detection use k << L) | post-detection bits
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted_counts;
};

std::uint64_t block_signature(const BlockTrace& trace, int length) {
  int k = 0;
  for (int j = 0; j < length; ++j)
    if (trace.outputs[static_cast<std::size_t>(j)]) {
      k = j + 1;
      break;
    }
  std::uint64_t bits = 0;
  if (k > 0)
    for (int j = k; j < length; ++j)
      bits = (bits << 1) | static_cast<std::uint64_t>(trace.outputs[static_cast<std::size_t>(j)]);
  return (static_cast<std::uint64_t>(k) << length) | bits;
}

// Per-use outcome of a signature: j is 1-based.
int signature_output(std::uint64_t sig, int length, int j) {
  const int k = static_cast<int>(sig >> length);
  if (k == 0 || j < k) return 0;
  if (j == k) return 1;
  const std::uint64_t bits = sig & ((1ULL << length) - 1);
  const int postlen = length - k;
  return static_cast<int>((bits >> (postlen - (j - k))) & 1ULL);
}

// Class id of the history before use j (1-based): 0 = all-zero, else the
// detection index. Detection-collapsed: post-detection bit patterns pool.
int signature_class_before(std::uint64_t sig, int length, int j) {
  const int k = static_cast<int>(sig >> length);
  if (k == 0 || k >= j) return 0;
  return k;
}

double plugin_entropy(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& counts,
                      int length, std::vector<double>* per_use = nullptr) {
  std::uint64_t total = 0;
  for (const auto& [sig, n] : counts) total += n;
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (int j = 1; j <= length; ++j) {
    // class -> (count, ones)
    std::vector<std::uint64_t> cls_n(static_cast<std::size_t>(length) + 1, 0);
    std::vector<std::uint64_t> cls_one(static_cast<std::size_t>(length) + 1, 0);
    for (const auto& [sig, n] : counts) {
      const int cls = signature_class_before(sig, length, j);
      cls_n[static_cast<std::size_t>(cls)] += n;
      if (signature_output(sig, length, j)) cls_one[static_cast<std::size_t>(cls)] += n;
    }
    double h = 0.0;
    for (std::size_t cls = 0; cls < cls_n.size(); ++cls) {
      if (cls_n[cls] == 0) continue;
      const double p_cls = static_cast<double>(cls_n[cls]) / static_cast<double>(total);
      const double p_one = static_cast<double>(cls_one[cls]) / static_cast<double>(cls_n[cls]);
      h += p_cls * binary_entropy(p_one);
    }
    if (per_use) per_use->push_back(h);
    sum += h;
  }
  return sum / static_cast<double>(length);
}

}  // namespace

RateReport mc_entropy_estimate(const ModelParams& params, std::uint64_t blocks,
                               std::uint64_t seed) {
  params.validate();
  if (params.block_length > 24)
    throw guard_error("mc_entropy_estimate admits L <= 24 only");
  if (blocks < 1000) throw guard_error("mc_entropy_estimate needs blocks >= 1000");

  const int length = params.block_length;

  // Fixed shard split: the estimate depends on (params, blocks, seed) only,
  // never on how many threads ran the shards.
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> shard_counts(kMcShards);
  auto run_shard = [&](int shard) {
    const std::uint64_t lo = blocks * static_cast<std::uint64_t>(shard) / kMcShards;
    const std::uint64_t hi = blocks * (static_cast<std::uint64_t>(shard) + 1) / kMcShards;
    SeededRandom rng(derive_seed(seed, static_cast<std::uint64_t>(shard)));
    std::vector<std::uint64_t> table;  // dense: signatures < (L+1) << L
    const bool dense = length <= 12;
    if (dense) table.assign((static_cast<std::size_t>(length) + 1) << length, 0);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sparse;
    for (std::uint64_t b = lo; b < hi; ++b) {
      const DirectionState state = sample_state(rng, params.num_beams);
      ProbeTracker tracker(params);
      const BlockTrace trace = run_block(params, state, tracker, rng);
      const std::uint64_t sig = block_signature(trace, length);
      if (dense) {
        ++table[sig];
      } else {
        sparse.push_back({sig, 1});
      }
    }
    auto& out = shard_counts[static_cast<std::size_t>(shard)];
    if (dense) {
      for (std::uint64_t sig = 0; sig < table.size(); ++sig)
        if (table[sig]) out.push_back({sig, table[sig]});
    } else {
      std::sort(sparse.begin(), sparse.end());
      for (const auto& [sig, n] : sparse) {
        if (!out.empty() && out.back().first == sig)
          out.back().second += n;
        else
          out.push_back({sig, n});
      }
    }
  };

  run_sharded(kMcShards, run_shard);

  // Order-independent merge: sum counts per signature, sorted.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
  for (const auto& sc : shard_counts)
    counts.insert(counts.end(), sc.begin(), sc.end());
  std::sort(counts.begin(), counts.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
  for (const auto& [sig, n] : counts) {
    if (!merged.empty() && merged.back().first == sig)
      merged.back().second += n;
    else
      merged.push_back({sig, n});
  }

  RateReport report;
  report.provenance = Provenance::monte_carlo;
  report.bits_per_use = plugin_entropy(merged, length, &report.per_use_terms);

  // Poisson bootstrap over collapsed-history types.
  constexpr int kReps = 200;
  std::mt19937_64 boot(derive_seed(seed, 0xB007ULL));
  std::vector<double> reps;
  reps.reserve(kReps);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> resampled(merged.size());
  for (int r = 0; r < kReps; ++r) {
    for (std::size_t i = 0; i < merged.size(); ++i) {
      std::poisson_distribution<std::uint64_t> pois(static_cast<double>(merged[i].second));
      resampled[i] = {merged[i].first, pois(boot)};
    }
    reps.push_back(plugin_entropy(resampled, length));
  }
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= kReps;
  double var = 0.0;
  for (double v : reps) var += (v - mean) * (v - mean);
  var /= (kReps - 1);
  report.half_width = 1.96 * std::sqrt(var);
  return report;
}

std::uint64_t trapping_soundness_violations(const ModelParams& params) {
  params.validate();
  if (params.num_beams > 8 || params.block_length > 4)
    throw guard_error("trapping_soundness_violations admits M <= 8 and L <= 4 only");

  std::vector<std::uint64_t> per_state(static_cast<std::size_t>(params.num_beams), 0);
  run_sharded(params.num_beams, [&](int shard) {
    const int m = shard + 1;
    const DirectionState state{m};
    std::uint64_t& violations = per_state[static_cast<std::size_t>(shard)];
    PathEnumerator enumerator;
    enumerator.enumerate(
        [&](RandomSource& rng) {
          ProbeTracker tracker(params);
          for (int j = 0; j < params.block_length; ++j) {
            const ProbeVector x = tracker.next_probe(rng);
            const int y = transmit(state, x);
            tracker.update(y);
            const auto& cand = tracker.candidates();
            if (!std::binary_search(cand.begin(), cand.end(), m)) ++violations;
          }
        },
        nullptr);
  });
  std::uint64_t total = 0;
  for (std::uint64_t v : per_state) total += v;
  return total;
}

}  // namespace beamcap
