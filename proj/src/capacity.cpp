#include "beamcap/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace beamcap {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::formula: return "formula";
    case Provenance::exact_tree: return "exact-tree";
    case Provenance::dp: return "dp";
    case Provenance::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double CostSchedule::value_as_double(int j) const {
  return to_double(values.at(static_cast<std::size_t>(j - 1)));
}

bool CostSchedule::integral() const {
  for (const Rational& c : values)
    if (!is_integral(c)) return false;
  return true;
}

CostSchedule cost_schedule(const ModelParams& params) {
  params.validate();
  CostSchedule s;
  s.params = params;
  s.values.reserve(static_cast<std::size_t>(params.block_length));
  Rational spent = 0;
  const Rational budget = params.peak_cost;
  for (int j = 0; j < params.block_length; ++j) {
    Rational c = rat_min((Rational(params.num_beams) - spent) / 2, budget);
    s.values.push_back(c);
    spent += c;
  }
  return s;
}

RateReport capacity(const ModelParams& params) {
  const CostSchedule sched = cost_schedule(params);
  RateReport report;
  report.provenance = Provenance::formula;
  report.per_use_terms.reserve(sched.values.size());
  Rational spent = 0;
  const Rational m = params.num_beams;
  double sum = 0.0;
  for (const Rational& c : sched.values) {
    const Rational pool = m - spent;            // > 0 always: halving spares half
    const double frac_explored = to_double(spent / m);
    const double term =
        (1.0 - frac_explored) * binary_entropy(to_double(c / pool)) + frac_explored;
    report.per_use_terms.push_back(term);
    sum += term;
    spent += c;
  }
  report.bits_per_use = sum / static_cast<double>(params.block_length);
  return report;
}

double capacity_L1(int num_beams, int peak_cost) {
  ModelParams(num_beams, 1, peak_cost).validate();
  const Rational ratio = rat_min(Rational(1, 2), Rational(peak_cost, num_beams));
  return binary_entropy(to_double(ratio));
}

}  // namespace beamcap
