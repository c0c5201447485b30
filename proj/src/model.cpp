#include "beamcap/model.hpp"

namespace beamcap {

int hamming_cost(const ProbeVector& x) {
  int c = 0;
  for (std::uint8_t b : x.bits) c += b ? 1 : 0;
  return c;
}

int transmit(const DirectionState& state, const ProbeVector& x) {
  if (state.index < 1 || state.index > x.dimension())
    throw std::invalid_argument("probe dimension does not cover the state index");
  return x.bits[static_cast<std::size_t>(state.index - 1)] ? 1 : 0;
}

DirectionState sample_state(RandomSource& rng, int num_beams) {
  if (num_beams < 1) throw std::invalid_argument("num_beams must be >= 1");
  return DirectionState{static_cast<int>(rng.next_below(static_cast<std::uint64_t>(num_beams))) + 1};
}

HistoryClass HistoryClass::classify(const std::vector<int>& history) {
  HistoryClass hc;
  hc.length = static_cast<int>(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (history[i]) {
      hc.kind = Kind::first_one_at;
      hc.first_one = static_cast<int>(i) + 1;
      return hc;
    }
  }
  hc.kind = Kind::all_zero;
  hc.first_one = 0;
  return hc;
}

}  // namespace beamcap
