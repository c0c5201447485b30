#pragma once

#include <cstdint>
#include <vector>

#include "beamcap/capacity.hpp"
#include "beamcap/model.hpp"

namespace beamcap {

/// Finite-horizon value iteration over the uniform-subset policy class with
/// deterministic integer probe sizes. A lower bound on capacity that is tight
/// exactly when the cost schedule is integral.
struct DpSolution {
  double total_value = 0.0;  // V_1(M): optimal entropy over the whole block
  double rate = 0.0;         // total_value / L

  /// value[j][u] = optimal conditional entropy from use j with pool u,
  /// j in [1..L+1], u in [0..M]; best_size[j][u] the argmax (smallest on ties).
  std::vector<std::vector<double>> value;
  std::vector<std::vector<int>> best_size;

  double value_at(int j, int u) const { return value.at(j).at(u); }
  int a_star(int j, int u) const { return best_size.at(j).at(u); }
};

DpSolution dp_optimal_rate(const ModelParams& params);

/// Exhaustive maximization over every integer probe-size assignment along the
/// undetected chain; evaluates each complete assignment from scratch. Guarded
/// to M <= 8, L <= 4. Must equal dp_optimal_rate on its domain.
double brute_force_small(const ModelParams& params);

/// Plug-in estimate of H(Y^L|S)/L from `blocks` simulated blocks, collapsed
/// over the detection history classes, with a bootstrap confidence half-width.
/// Guards: L <= 24 and blocks >= 1000. Deterministic for a fixed seed.
RateReport mc_entropy_estimate(const ModelParams& params, std::uint64_t blocks,
                               std::uint64_t seed);

/// Exhaustively enumerates every (state, internal-choice) path of the policy
/// and counts feedback histories after which the true direction has left the
/// candidate set. Zero for a sound tracker. Guarded to M <= 8, L <= 4.
std::uint64_t trapping_soundness_violations(const ModelParams& params);

}  // namespace beamcap
