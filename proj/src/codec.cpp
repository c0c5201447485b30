#include "beamcap/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "beamcap/parallel.hpp"
#include "beamcap/strategy.hpp"

namespace beamcap {

Message Message::from_value(int length, std::uint64_t value) {
  if (length < 0 || length > 63) throw std::invalid_argument("message length outside [0,63]");
  if (length < 64 && value >> length)
    throw std::invalid_argument("message value does not fit the length");
  return Message{length, value};
}

Message Message::from_bits(const std::vector<int>& bits) {
  std::uint64_t v = 0;
  for (int b : bits) v = (v << 1) | static_cast<std::uint64_t>(b ? 1 : 0);
  return from_value(static_cast<int>(bits.size()), v);
}

Message Message::random(int length, RandomSource& rng) {
  if (length == 0) return Message{0, 0};
  return from_value(length, rng.next_below(1ULL << length));
}

int Message::bit(int i) const {
  return static_cast<int>((value >> (length - 1 - i)) & 1ULL);
}

std::vector<int> Message::bits() const {
  std::vector<int> out(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) out[static_cast<std::size_t>(i)] = bit(i);
  return out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

std::vector<int> subset_unrank(int u, int a, const BigInt& index) {
  if (a < 0 || a > u) throw std::domain_error("subset size outside [0,u]");
  if (index < 0 || index >= binomial(u, a)) throw std::domain_error("subset index out of range");
  std::vector<int> subset;
  subset.reserve(static_cast<std::size_t>(a));
  BigInt v = index;
  int k = a;
  for (int p = 1; p <= u && k > 0; ++p) {
    const BigInt with_p = binomial(u - p, k - 1);  // subsets whose next element is p
    if (v < with_p) {
      subset.push_back(p);
      --k;
    } else {
      v -= with_p;
    }
  }
  return subset;
}

BigInt subset_rank(int u, int a, const std::vector<int>& subset) {
  if (static_cast<int>(subset.size()) != a) throw std::domain_error("subset size mismatch");
  BigInt rank = 0;
  int k = a;
  int prev = 0;
  for (int e : subset) {
    if (e <= prev || e > u) throw std::domain_error("subset must be sorted within [1..u]");
    for (int p = prev + 1; p < e; ++p) rank += binomial(u - p, k - 1);
    prev = e;
    --k;
  }
  return rank;
}

int codec_probe_size(int pool_size, int peak_cost) {
  if (peak_cost == 0) return 0;
  if (2 * peak_cost <= pool_size) return peak_cost;
  return std::min((pool_size + 1) / 2, peak_cost);
}

namespace {

// 64-bit binomials: C(n,k) for n <= 64 fits uint64 (max C(64,32) ~ 1.8e18).
struct Binom64 {
  std::array<std::array<std::uint64_t, 65>, 65> c{};
  Binom64() {
    for (int n = 0; n <= 64; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k)
        c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};
const Binom64 kBinom;

inline std::uint64_t binom64(int n, int k) {
  if (k < 0 || k > n) return 0;
  return kBinom.c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

constexpr std::uint64_t kPadSalt = 0xC0DEC0DE12345678ULL;

inline std::uint64_t pad_seed(const Message& msg) {
  return splitmix64(msg.value ^ (static_cast<std::uint64_t>(msg.length) << 56) ^ kPadSalt);
}

// Message bits, then a deterministic pseudorandom tail seeded by the message
// value. Both encoder and decoder evaluate candidates through this.
inline int stream_bit(const Message& msg, std::uint64_t i) {
  if (i < static_cast<std::uint64_t>(msg.length)) return msg.bit(static_cast<int>(i));
  const std::uint64_t pad_index = i - static_cast<std::uint64_t>(msg.length);
  const std::uint64_t word = splitmix64(pad_seed(msg) + pad_index / 64);
  return static_cast<int>((word >> (63 - pad_index % 64)) & 1ULL);
}

inline std::uint64_t low_mask(int nbits) {
  return (nbits >= 64 ? 0 : (1ULL << nbits)) - 1;
}

inline std::uint64_t stream_window(const Message& msg, std::uint64_t pos, int nbits) {
  const auto k = static_cast<std::uint64_t>(msg.length);
  if (pos + static_cast<std::uint64_t>(nbits) <= k) {
    // Entirely inside the message value.
    const int shift = msg.length - static_cast<int>(pos) - nbits;
    return (msg.value >> shift) & low_mask(nbits);
  }
  if (pos >= k) {
    // Entirely in the pad: at most two pad words.
    const std::uint64_t seed = pad_seed(msg);
    const std::uint64_t start = pos - k;
    const std::uint64_t wi = start / 64;
    const int off = static_cast<int>(start % 64);
    std::uint64_t v = splitmix64(seed + wi) << off;
    if (off + nbits > 64) v |= splitmix64(seed + wi + 1) >> (64 - off);
    return v >> (64 - nbits);
  }
  std::uint64_t v = 0;  // straddles the message/pad boundary (rare)
  for (int i = 0; i < nbits; ++i)
    v = (v << 1) | static_cast<std::uint64_t>(stream_bit(msg, pos + static_cast<std::uint64_t>(i)));
  return v;
}

constexpr int kMaxRejections = 10000;

// Reads windows until one lands below n. Returns the accepted value and
// advances pos past everything consumed.
std::uint64_t rejection_sample(const Message& msg, std::uint64_t& pos, std::uint64_t n) {
  const int nbits = std::bit_width(n - 1);
  for (int tries = 0; tries < kMaxRejections; ++tries) {
    const std::uint64_t v = stream_window(msg, pos, nbits);
    pos += static_cast<std::uint64_t>(nbits);
    if (v < n) return v;
  }
  throw integrity_error("rejection sampler failed to terminate");
}

// The k-th (0-based) set bit of mask, as a one-bit mask.
inline std::uint64_t nth_set_bit(std::uint64_t mask, int k) {
  while (k--) mask &= mask - 1;
  return mask & (~mask + 1);
}

// Subset of the set bits of pool_mask selected by lexicographic index v over
// the C(u,a) position-subsets, returned as a bitmask.
std::uint64_t unrank_subset_mask(std::uint64_t pool_mask, int u, int a, std::uint64_t v) {
  if (a == 0) return 0;
  if (a == 1) return nth_set_bit(pool_mask, static_cast<int>(v));
  if (a == 2) {
    int p = 0;
    while (v >= static_cast<std::uint64_t>(u - p - 1)) {
      v -= static_cast<std::uint64_t>(u - p - 1);
      ++p;
    }
    return nth_set_bit(pool_mask, p) | nth_set_bit(pool_mask, p + 1 + static_cast<int>(v));
  }
  std::uint64_t out = 0;
  int k = a;
  std::uint64_t rest = pool_mask;
  for (int p = 0; p < u && k > 0; ++p) {
    const int bit_pos = std::countr_zero(rest);
    rest &= rest - 1;
    const std::uint64_t with_p = binom64(u - p - 1, k - 1);
    if (v < with_p) {
      out |= 1ULL << bit_pos;
      --k;
    } else {
      v -= with_p;
    }
  }
  return out;
}

inline std::uint64_t trim_to_power_of_two(std::uint64_t mask) {
  int t = std::popcount(mask);
  const int keep = t <= 1 ? t : 1 << (std::bit_width(static_cast<unsigned>(t)) - 1);
  while (t > keep) {  // drop highest set bits
    mask &= ~(1ULL << (63 - std::countl_zero(mask)));
    --t;
  }
  return mask;
}

// Lowest ceil(t/2) set bits of the trapped mask.
inline std::uint64_t lower_half_mask(std::uint64_t trapped) {
  const int t = std::popcount(trapped);
  const int take = (t + 1) / 2;
  std::uint64_t out = 0;
  std::uint64_t rest = trapped;
  for (int i = 0; i < take; ++i) {
    out |= rest & (~rest + 1);
    rest &= rest - 1;
  }
  return out;
}

void check_codec_params(const ModelParams& params, int message_length) {
  params.validate();
  if (params.num_beams > 64) throw guard_error("codec admits M <= 64 only");
  if (message_length < 0 || message_length > 20)
    throw guard_error("codec admits message lengths 0..20 only");
}

}  // namespace

CodecEncoder::CodecEncoder(const ModelParams& params, const Message& message,
                           CodecScheme scheme)
    : params_(params), message_(message), scheme_(scheme) {
  check_codec_params(params, message.length);
  pool_.resize(static_cast<std::size_t>(params.num_beams));
  for (int i = 0; i < params.num_beams; ++i) pool_[static_cast<std::size_t>(i)] = i + 1;
}

ProbeVector CodecEncoder::next_probe(RandomSource&) {
  if (use_index_ >= params_.block_length)
    throw state_error("next_probe called after the end of the block");
  if (!detected_) {
    const int u = static_cast<int>(pool_.size());
    const int a = codec_probe_size(u, params_.peak_cost);
    const BigInt n_big = binomial(u, a);
    std::uint64_t index = 0;
    if (n_big > 1 && scheme_ == CodecScheme::full)
      index = rejection_sample(message_, cursor_, n_big.convert_to<std::uint64_t>());
    const std::vector<int> positions = subset_unrank(u, a, BigInt(index));
    explored_.clear();
    for (int p : positions) explored_.push_back(pool_[static_cast<std::size_t>(p - 1)]);
  } else {
    auto [lower, upper] = split_halves(trapped_);
    const int b = stream_bit(message_, cursor_++);
    explored_ = b ? std::move(upper) : std::move(lower);
  }
  probe_pending_ = true;
  return ProbeVector::from_indices(params_.num_beams, explored_);
}

void CodecEncoder::update(int y) {
  if (!probe_pending_) throw state_error("update called without a pending probe");
  probe_pending_ = false;
  ++use_index_;
  if (!detected_) {
    if (y) {
      detected_ = true;
      // Largest power-of-two subset keeps the halving bits exact; the rate
      // loss from dropped elements is accounted by the decoder, not hidden.
      const int t = static_cast<int>(explored_.size());
      const int keep = t <= 1 ? t : 1 << (std::bit_width(static_cast<unsigned>(t)) - 1);
      trapped_.assign(explored_.begin(), explored_.begin() + keep);
    } else {
      std::vector<int> remaining;
      std::set_difference(pool_.begin(), pool_.end(), explored_.begin(), explored_.end(),
                          std::back_inserter(remaining));
      pool_ = std::move(remaining);
    }
  } else {
    if (y) {
      trapped_ = explored_;
    } else {
      std::vector<int> remaining;
      std::set_difference(trapped_.begin(), trapped_.end(), explored_.begin(),
                          explored_.end(), std::back_inserter(remaining));
      trapped_ = std::move(remaining);
    }
  }
}

std::uint64_t CodecEncoder::consumed_true_bits() const {
  return std::min(cursor_, static_cast<std::uint64_t>(message_.length));
}

namespace {

struct Candidate {
  std::uint64_t pool = 0;
  std::uint64_t trapped = 0;
  std::uint64_t value = 0;
  std::uint32_t cursor = 0;
  bool detected = false;
};

// One decoding step of a single candidate. Returns false when the candidate
// is inconsistent with the observed output. subset_memo, when present, caches
// index -> subset mask for a pool shared by every candidate this use.
bool advance_candidate(Candidate& cand, int y, int m, const ModelParams& params,
                       int message_length, CodecScheme scheme,
                       const std::vector<std::uint64_t>* subset_memo = nullptr) {
  const Message msg{message_length, cand.value};
  if (!cand.detected) {
    const int u = std::popcount(cand.pool);
    const int a = codec_probe_size(u, params.peak_cost);
    const std::uint64_t n = binom64(u, a);
    std::uint64_t index = 0;
    if (n > 1 && scheme == CodecScheme::full) {
      std::uint64_t pos = cand.cursor;
      index = rejection_sample(msg, pos, n);
      cand.cursor = static_cast<std::uint32_t>(pos);
    }
    const std::uint64_t subset = subset_memo
                                     ? (*subset_memo)[index]
                                     : unrank_subset_mask(cand.pool, u, a, index);
    const int predicted = static_cast<int>((subset >> (m - 1)) & 1ULL);
    if (predicted != y) return false;
    if (y) {
      cand.detected = true;
      cand.trapped = trim_to_power_of_two(subset);
    } else {
      cand.pool &= ~subset;
    }
  } else {
    const int b = stream_bit(msg, cand.cursor++);
    const std::uint64_t lower = lower_half_mask(cand.trapped);
    const std::uint64_t probe = b ? (cand.trapped ^ lower) : lower;
    const int predicted = static_cast<int>((probe >> (m - 1)) & 1ULL);
    if (predicted != y) return false;
    cand.trapped = y ? probe : (cand.trapped ^ probe);
  }
  return true;
}

}  // namespace

DecodeResult decode_block(const std::vector<int>& outputs, const DirectionState& state,
                          const ModelParams& params, int message_length,
                          CodecScheme scheme) {
  check_codec_params(params, message_length);
  if (static_cast<int>(outputs.size()) != params.block_length)
    throw std::invalid_argument("output sequence length must equal block_length");
  if (state.index < 1 || state.index > params.num_beams)
    throw std::invalid_argument("state index outside [1..M]");

  const std::uint64_t total = 1ULL << message_length;
  const std::uint64_t full_pool =
      params.num_beams == 64 ? ~0ULL : (1ULL << params.num_beams) - 1;

  std::vector<Candidate> cands(total);
  for (std::uint64_t v = 0; v < total; ++v) {
    cands[v].pool = full_pool;
    cands[v].value = v;
  }

  DecodeResult result;
  result.resolved_at = total == 1 ? 0 : -1;
  std::size_t alive = cands.size();
  // At the first use every candidate still shares the initial pool, so the
  // index -> subset map can be computed once.
  std::vector<std::uint64_t> first_use_memo;
  {
    const int u = params.num_beams;
    const int a = codec_probe_size(u, params.peak_cost);
    const std::uint64_t n = binom64(u, a);
    if (n <= 4096) {
      first_use_memo.resize(n);
      for (std::uint64_t v = 0; v < n; ++v)
        first_use_memo[v] = unrank_subset_mask(full_pool, u, a, v);
    }
  }
  for (int j = 0; j < params.block_length && alive > 0; ++j) {
    const int y = outputs[static_cast<std::size_t>(j)];
    const std::vector<std::uint64_t>* memo =
        (j == 0 && !first_use_memo.empty()) ? &first_use_memo : nullptr;
    std::size_t write = 0;
    for (std::size_t i = 0; i < alive; ++i) {
      Candidate c = cands[i];
      if (advance_candidate(c, y, state.index, params, message_length, scheme, memo))
        cands[write++] = c;
    }
    alive = write;
    if (alive == 1 && result.resolved_at < 0) result.resolved_at = j + 1;
  }

  if (alive == 0) throw integrity_error("no message is consistent with the outputs");
  result.candidates = alive;
  if (alive == 1) {
    result.status = DecodeResult::Status::unique;
    result.decoded = Message::from_value(message_length, cands[0].value);
    if (result.resolved_at < 0) result.resolved_at = params.block_length;
  } else {
    result.status = DecodeResult::Status::ambiguous;
    result.resolved_at = 0;
  }
  return result;
}

ErrorRateReport simulate_error_rate(const ModelParams& params, int message_length,
                                    std::uint64_t blocks, std::uint64_t seed,
                                    CodecScheme scheme) {
  check_codec_params(params, message_length);

  struct ShardStats {
    std::uint64_t unique_correct = 0;
    std::uint64_t wrong_unique = 0;
    std::uint64_t delivered_bits = 0;
    std::uint64_t resolution_uses = 0;
    std::uint64_t denominator_uses = 0;
  };
  constexpr int kShards = 32;
  std::vector<ShardStats> stats(kShards);

  auto run_shard = [&](int shard) {
    const std::uint64_t lo = blocks * static_cast<std::uint64_t>(shard) / kShards;
    const std::uint64_t hi = blocks * (static_cast<std::uint64_t>(shard) + 1) / kShards;
    SeededRandom rng(derive_seed(seed, 0xC0DEC000ULL + static_cast<std::uint64_t>(shard)));
    ShardStats& s = stats[static_cast<std::size_t>(shard)];
    for (std::uint64_t b = lo; b < hi; ++b) {
      const DirectionState state = sample_state(rng, params.num_beams);
      const Message msg = Message::random(message_length, rng);
      CodecEncoder encoder(params, msg, scheme);
      const BlockTrace trace = run_block(params, state, encoder, rng);
      const DecodeResult decoded =
          decode_block(trace.outputs, state, params, message_length, scheme);
      if (decoded.status == DecodeResult::Status::unique) {
        if (*decoded.decoded == msg) {
          ++s.unique_correct;
          s.delivered_bits += static_cast<std::uint64_t>(message_length);
          s.resolution_uses += static_cast<std::uint64_t>(decoded.resolved_at);
          s.denominator_uses += static_cast<std::uint64_t>(decoded.resolved_at);
        } else {
          ++s.wrong_unique;
          s.denominator_uses += static_cast<std::uint64_t>(params.block_length);
        }
      } else {
        s.denominator_uses += static_cast<std::uint64_t>(params.block_length);
      }
    }
  };

  run_sharded(kShards, run_shard);

  ErrorRateReport report;
  report.blocks = blocks;
  std::uint64_t delivered = 0, denom = 0, resolution = 0;
  for (const auto& s : stats) {
    report.unique_correct += s.unique_correct;
    report.wrong_unique += s.wrong_unique;
    delivered += s.delivered_bits;
    denom += s.denominator_uses;
    resolution += s.resolution_uses;
  }
  report.error_rate =
      blocks == 0 ? 0.0
                  : 1.0 - static_cast<double>(report.unique_correct) / static_cast<double>(blocks);
  report.bits_per_use =
      denom == 0 ? 0.0 : static_cast<double>(delivered) / static_cast<double>(denom);
  report.mean_resolution_use =
      report.unique_correct == 0
          ? 0.0
          : static_cast<double>(resolution) / static_cast<double>(report.unique_correct);
  return report;
}

}  // namespace beamcap
