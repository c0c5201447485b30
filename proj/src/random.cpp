#include "beamcap/random.hpp"

#include <limits>
#include <stdexcept>

namespace beamcap {

bool RandomSource::bernoulli(const Rational& p) {
  if (p < 0 || p > 1) throw std::domain_error("bernoulli probability outside [0,1]");
  if (p == 0) return false;
  if (p == 1) return true;
  const BigInt& num = numerator(p);
  const BigInt& den = denominator(p);
  if (den <= std::numeric_limits<std::uint64_t>::max()) {
    return next_below(den.convert_to<std::uint64_t>()) < num;
  }
  // Denominator beyond 64 bits: two-level draw keeps the bias below 2^-64.
  const std::uint64_t grid = std::numeric_limits<std::uint64_t>::max();
  return next_below(grid) < static_cast<std::uint64_t>(to_double(p) * static_cast<double>(grid));
}

std::uint64_t SeededRandom::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below(0)");
  if (n == 1) return 0;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return v % n;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

namespace {

// Replays a scripted choice prefix, then takes outcome 0 for any further
// draw. Records (outcome, support size) for every draw so the enumerator can
// branch and weight paths exactly.
class ScriptedSource final : public RandomSource {
 public:
  explicit ScriptedSource(std::vector<std::uint64_t> prefix) : prefix_(std::move(prefix)) {}

  std::uint64_t next_below(std::uint64_t n) override {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    std::uint64_t outcome = pos_ < prefix_.size() ? prefix_[pos_] : 0;
    if (outcome >= n) throw std::logic_error("scripted choice out of range");
    ++pos_;
    trail_.push_back({outcome, n});
    return outcome;
  }

  struct Draw {
    std::uint64_t outcome;
    std::uint64_t support;
  };
  const std::vector<Draw>& trail() const { return trail_; }
  std::size_t prefix_size() const { return prefix_.size(); }

 private:
  std::vector<std::uint64_t> prefix_;
  std::size_t pos_ = 0;
  std::vector<Draw> trail_;
};

}  // namespace

std::uint64_t PathEnumerator::enumerate(
    const std::function<void(RandomSource&)>& body,
    const std::function<void(const Rational&)>& after_path) {
  std::uint64_t paths = 0;
  std::vector<std::vector<std::uint64_t>> stack;
  stack.push_back({});
  while (!stack.empty()) {
    std::vector<std::uint64_t> prefix = std::move(stack.back());
    stack.pop_back();
    ScriptedSource src(prefix);
    body(src);
    ++paths;

    Rational weight = 1;
    for (const auto& d : src.trail()) weight /= d.support;
    if (after_path) after_path(weight);

    // Branch on every draw past the scripted prefix: alternatives 1..n-1.
    const auto& trail = src.trail();
    for (std::size_t i = src.prefix_size(); i < trail.size(); ++i) {
      std::vector<std::uint64_t> branch(prefix);
      for (std::size_t k = prefix.size(); k < i; ++k) branch.push_back(trail[k].outcome);
      for (std::uint64_t alt = 1; alt < trail[i].support; ++alt) {
        branch.push_back(alt);
        stack.push_back(branch);
        branch.pop_back();
      }
    }
  }
  return paths;
}

}  // namespace beamcap
