#include "beamcap/strategy.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace beamcap {

Rational probe_cost(int pool_size, int peak_cost) {
  return rat_min(Rational(pool_size, 2), Rational(peak_cost));
}

int realize_probe_size(const Rational& c, RandomSource& rng) {
  if (c < 0) throw std::invalid_argument("probe size must be nonnegative");
  const BigInt fl = rat_floor(c);
  const Rational frac = c - Rational(fl);
  int base = fl.convert_to<int>();
  if (frac == 0) return base;
  return rng.bernoulli(frac) ? base + 1 : base;
}

ProbeTracker::ProbeTracker(const ModelParams& params)
    : params_(params), schedule_(cost_schedule(params)) {
  candidates_.resize(static_cast<std::size_t>(params.num_beams));
  std::iota(candidates_.begin(), candidates_.end(), 1);
}

std::pair<std::vector<int>, std::vector<int>> split_halves(const std::vector<int>& sorted_set) {
  const std::size_t lower_size = (sorted_set.size() + 1) / 2;
  std::vector<int> lower(sorted_set.begin(), sorted_set.begin() + static_cast<std::ptrdiff_t>(lower_size));
  std::vector<int> upper(sorted_set.begin() + static_cast<std::ptrdiff_t>(lower_size), sorted_set.end());
  return {std::move(lower), std::move(upper)};
}

ProbeVector ProbeTracker::next_probe(RandomSource& rng) {
  if (use_index_ >= params_.block_length)
    throw state_error("next_probe called after the end of the block");
  if (!detected_) {
    const int pool = static_cast<int>(candidates_.size());
    const int size = realize_probe_size(probe_cost(pool, params_.peak_cost), rng);
    // Uniform subset via partial Fisher-Yates on a copy of the candidate list.
    std::vector<int> shuffled = candidates_;
    for (int i = 0; i < size; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(pool - i)));
      std::swap(shuffled[static_cast<std::size_t>(i)], shuffled[j]);
    }
    explored_.assign(shuffled.begin(), shuffled.begin() + size);
    std::sort(explored_.begin(), explored_.end());
  } else {
    // Coin-flip between the two halves of the trapped set. For odd sizes the
    // halves differ by one element and the coin makes the output marginal
    // exactly 1/2.
    auto [lower, upper] = split_halves(candidates_);
    explored_ = rng.next_below(2) == 0 ? std::move(lower) : std::move(upper);
  }
  probe_pending_ = true;
  return ProbeVector::from_indices(params_.num_beams, explored_);
}

void ProbeTracker::update(int y) {
  if (!probe_pending_) throw state_error("update called without a pending probe");
  probe_pending_ = false;
  ++use_index_;
  if (!detected_) {
    if (y) {
      detected_ = true;
      detection_time_ = use_index_;
      candidates_ = explored_;
    } else {
      std::vector<int> remaining;
      remaining.reserve(candidates_.size());
      std::set_difference(candidates_.begin(), candidates_.end(), explored_.begin(),
                          explored_.end(), std::back_inserter(remaining));
      candidates_ = std::move(remaining);
    }
  } else {
    if (y) {
      candidates_ = explored_;
    } else {
      std::vector<int> remaining;
      remaining.reserve(candidates_.size());
      std::set_difference(candidates_.begin(), candidates_.end(), explored_.begin(),
                          explored_.end(), std::back_inserter(remaining));
      candidates_ = std::move(remaining);
    }
  }
}

PolicyTree exact_policy_tree(const ModelParams& params) {
  params.validate();
  const int length = params.block_length;
  const int budget = params.peak_cost;

  PolicyTree tree;
  tree.report.provenance = Provenance::exact_tree;
  tree.report.per_use_terms.reserve(static_cast<std::size_t>(length));
  tree.zero_history_mass.reserve(static_cast<std::size_t>(length));
  tree.zero_marginal.reserve(static_cast<std::size_t>(length));

  // Collapsed history tree. All-zero histories are summarized by the realized
  // pool size (a transmitter-private quantity the decoder's entropy terms
  // marginalize over); post-detection histories by the trapped-set size.
  std::map<int, Rational> pools;
  std::map<int, Rational> trapped;
  pools[params.num_beams] = 1;

  double sum = 0.0;
  for (int j = 0; j < length; ++j) {
    Rational zero_mass = 0;
    for (const auto& [u, w] : pools) zero_mass += w;
    Rational det_mass = 0;
    for (const auto& [t, w] : trapped) det_mass += w;

    // Marginal P(Y_j = 1 | all-zero history), mixing the private size and
    // subset randomization across reachable pools.
    Rational zero_p1 = 0;
    if (zero_mass > 0) {
      Rational acc = 0;
      for (const auto& [u, w] : pools) acc += w * probe_cost(u, budget) / u;
      zero_p1 = acc / zero_mass;
    }
    // Marginal P(Y_j = 1 | detected history): the half-coin rule gives 1/2
    // for every trapped size; derived here from the rule rather than assumed.
    Rational det_p1 = 0;
    if (det_mass > 0) {
      Rational acc = 0;
      for (const auto& [t, w] : trapped) {
        const int lower = (t + 1) / 2;
        const int upper = t - lower;
        acc += w * (Rational(lower, 2 * t) + Rational(upper, 2 * t));
      }
      det_p1 = acc / det_mass;
    }

    tree.zero_history_mass.push_back(zero_mass);
    tree.zero_marginal.push_back(zero_p1);
    const double term = to_double(zero_mass) * binary_entropy(to_double(zero_p1)) +
                        to_double(det_mass) * binary_entropy(to_double(det_p1));
    tree.report.per_use_terms.push_back(term);
    sum += term;

    // Transitions.
    std::map<int, Rational> next_pools;
    std::map<int, Rational> next_trapped;
    for (const auto& [u, w] : pools) {
      const Rational c = probe_cost(u, budget);
      const BigInt fl = rat_floor(c);
      const Rational frac = c - Rational(fl);
      const int base = fl.convert_to<int>();
      const std::pair<int, Rational> sizes[2] = {{base, 1 - frac}, {base + 1, frac}};
      for (const auto& [a, pa] : sizes) {
        if (pa == 0) continue;
        if (a > u) throw std::logic_error("probe size exceeds candidate pool");
        const Rational fire = w * pa * Rational(a, u);
        const Rational stay = w * pa * (1 - Rational(a, u));
        if (fire > 0) next_trapped[a] += fire;
        if (stay > 0) next_pools[u - a] += stay;
      }
    }
    for (const auto& [t, w] : trapped) {
      const int lower = (t + 1) / 2;
      const int upper = t - lower;
      // probe lower half (coin 1/2)
      next_trapped[lower] += w * Rational(1, 2) * Rational(lower, t);
      if (upper > 0) next_trapped[upper] += w * Rational(1, 2) * Rational(t - lower, t);
      // probe upper half (coin 1/2)
      if (upper > 0) next_trapped[upper] += w * Rational(1, 2) * Rational(upper, t);
      next_trapped[lower] += w * Rational(1, 2) * Rational(t - upper, t);
    }
    pools = std::move(next_pools);
    trapped = std::move(next_trapped);
  }
  tree.report.bits_per_use = sum / static_cast<double>(length);
  return tree;
}

RateReport exact_policy_entropy(const ModelParams& params) {
  return exact_policy_tree(params).report;
}

}  // namespace beamcap
