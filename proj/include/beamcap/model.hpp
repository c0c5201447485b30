#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamcap/random.hpp"

namespace beamcap {

/// A policy emitted a probe whose Hamming cost exceeds the peak budget.
/// The constraint is per-symbol and unconditional, so this is a hard failure.
struct cost_violation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation was asked to run outside its guarded instance size.
struct guard_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A stateful object was driven out of its legal call sequence.
struct state_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Channel dimensions: M beam directions, blocks of L channel uses, and the
/// per-symbol peak Hamming cost B.
struct ModelParams {
  int num_beams = 1;     // M
  int block_length = 1;  // L
  int peak_cost = 0;     // B_peak

  ModelParams() = default;
  ModelParams(int m, int l, int b) : num_beams(m), block_length(l), peak_cost(b) {
    validate();
  }
  void validate() const {
    if (num_beams < 1) throw std::invalid_argument("num_beams must be >= 1");
    if (block_length < 1) throw std::invalid_argument("block_length must be >= 1");
    if (peak_cost < 0) throw std::invalid_argument("peak_cost must be >= 0");
  }
};

/// The hidden one-hot channel state: the index m in [1..M] of the active
/// direction. Fixed for a whole block.
struct DirectionState {
  int index = 1;  // 1-based

  std::vector<std::uint8_t> one_hot(int num_beams) const {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(num_beams), 0);
    v.at(static_cast<std::size_t>(index - 1)) = 1;
    return v;
  }
};

/// Binary input vector of dimension M; a policy may only emit probes with
/// Hamming cost <= B_peak.
struct ProbeVector {
  std::vector<std::uint8_t> bits;

  static ProbeVector zeros(int num_beams) {
    ProbeVector p;
    p.bits.assign(static_cast<std::size_t>(num_beams), 0);
    return p;
  }
  static ProbeVector from_indices(int num_beams, const std::vector<int>& ones) {
    ProbeVector p = zeros(num_beams);
    for (int i : ones) p.bits.at(static_cast<std::size_t>(i - 1)) = 1;
    return p;
  }
  int dimension() const { return static_cast<int>(bits.size()); }
};

/// Number of ones; the cost b(.) of the peak constraint.
int hamming_cost(const ProbeVector& x);

/// Noiseless channel law: 1 iff the probe covers the active direction.
int transmit(const DirectionState& state, const ProbeVector& x);

/// Uniform direction draw; reproducible for a fixed source.
DirectionState sample_state(RandomSource& rng, int num_beams);

/// One complete block: state, the L probes, the L feedback bits, and costs.
struct BlockTrace {
  DirectionState state;
  std::vector<ProbeVector> inputs;
  std::vector<int> outputs;
  std::vector<int> costs;
};

/// Feedback-history classification: either the all-zero history of length
/// `length`, or the class of histories whose first 1 sits at `first_one`.
struct HistoryClass {
  enum class Kind { all_zero, first_one_at };
  Kind kind = Kind::all_zero;
  int first_one = 0;  // meaningful for first_one_at, 1-based
  int length = 0;

  static HistoryClass classify(const std::vector<int>& history);
  bool operator==(const HistoryClass&) const = default;
};

template <typename P>
concept ProbePolicy = requires(P p, RandomSource& rng, int y) {
  { p.next_probe(rng) } -> std::convertible_to<ProbeVector>;
  p.update(y);
};

/// Runs one block: at each use j the policy (which has seen feedback up to
/// use j-1) produces a probe, the channel answers, and the bit is fed back.
template <ProbePolicy P>
BlockTrace run_block(const ModelParams& params, const DirectionState& state,
                     P& policy, RandomSource& rng) {
  params.validate();
  BlockTrace trace;
  trace.state = state;
  trace.inputs.reserve(static_cast<std::size_t>(params.block_length));
  trace.outputs.reserve(static_cast<std::size_t>(params.block_length));
  trace.costs.reserve(static_cast<std::size_t>(params.block_length));
  for (int j = 0; j < params.block_length; ++j) {
    ProbeVector x = policy.next_probe(rng);
    if (x.dimension() != params.num_beams)
      throw std::invalid_argument("probe dimension does not match num_beams");
    int cost = hamming_cost(x);
    if (cost > params.peak_cost)
      throw cost_violation_error("probe cost " + std::to_string(cost) +
                                 " exceeds peak cost " + std::to_string(params.peak_cost));
    int y = transmit(state, x);
    policy.update(y);
    trace.inputs.push_back(std::move(x));
    trace.outputs.push_back(y);
    trace.costs.push_back(cost);
  }
  return trace;
}

}  // namespace beamcap
