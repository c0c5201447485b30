#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beamcap/model.hpp"
#include "beamcap/rational.hpp"

namespace beamcap {

enum class Provenance { formula, exact_tree, dp, monte_carlo };

std::string to_string(Provenance p);

/// A rate in bits per channel use together with its per-use decomposition and
/// how it was obtained. half_width is populated by Monte Carlo estimates only.
struct RateReport {
  double bits_per_use = 0.0;
  std::vector<double> per_use_terms;
  Provenance provenance = Provenance::formula;
  std::optional<double> half_width;
};

/// Binary entropy in bits, with H(0) = H(1) = 0 by continuity.
double binary_entropy(double p);

/// The probe-size sequence c_1..c_L: c_j = min((M - sum_{k<j} c_k)/2, B),
/// kept as exact rationals so halving never drifts.
struct CostSchedule {
  ModelParams params;
  std::vector<Rational> values;

  double value_as_double(int j) const;  // 1-based
  bool integral() const;
};

CostSchedule cost_schedule(const ModelParams& params);

/// Closed-form capacity: per-use terms
///   (1 - sum_{k<j} c_k / M) * H(c_j / (M - sum_{k<j} c_k)) + sum_{k<j} c_k / M
/// evaluated from the exact schedule; entropy is the only float step.
RateReport capacity(const ModelParams& params);

/// One-use special case H(min(1/2, B/M)); must agree with capacity at L = 1.
double capacity_L1(int num_beams, int peak_cost);

}  // namespace beamcap
