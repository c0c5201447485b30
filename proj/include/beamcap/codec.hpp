#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "beamcap/capacity.hpp"
#include "beamcap/model.hpp"
#include "beamcap/rational.hpp"

namespace beamcap {

/// Decoder saw an output sequence no message can explain. Impossible when the
/// trace was produced by the matching encoder.
struct integrity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A message of K bits with an integer value view in [0, 2^K).
struct Message {
  int length = 0;             // K
  std::uint64_t value = 0;

  static Message from_value(int length, std::uint64_t value);
  static Message from_bits(const std::vector<int>& bits);
  static Message random(int length, RandomSource& rng);

  int bit(int i) const;  // 0-based, most significant first
  std::vector<int> bits() const;
  bool operator==(const Message&) const = default;
};

BigInt binomial(int n, int k);

/// Combinatorial-number-system unranking: the index-th a-subset of [1..u] in
/// lexicographic order. Bijective; subset_rank inverts it.
std::vector<int> subset_unrank(int u, int a, const BigInt& index);
BigInt subset_rank(int u, int a, const std::vector<int>& subset);

enum class CodecScheme {
  full,                 // message bits ride both probe selection and halving
  post_detection_only,  // deterministic probing until detection, bits after
};

/// Deterministic probe size shared by encoder and decoder: the schedule
/// recursion at the realized pool with ceil rounding.
int codec_probe_size(int pool_size, int peak_cost);

/// Message-driven probing policy. Deterministic given the message: subset
/// choices come from the message bit stream (rejection-sampled over the
/// C(u,a) subsets), halving choices consume one bit per use, and the stream's
/// tail past the message is a pseudorandom pad seeded by the message value so
/// the decoder can replay any candidate exactly.
class CodecEncoder {
 public:
  CodecEncoder(const ModelParams& params, const Message& message, CodecScheme scheme);

  ProbeVector next_probe(RandomSource& rng);  // deterministic; rng unused
  void update(int y);

  std::uint64_t consumed_true_bits() const;
  bool padded() const { return cursor_ > static_cast<std::uint64_t>(message_.length); }
  bool detected() const { return detected_; }
  const std::vector<int>& trapped() const { return trapped_; }

 private:
  ModelParams params_;
  Message message_;
  CodecScheme scheme_;
  std::vector<int> pool_;
  std::vector<int> trapped_;
  std::vector<int> explored_;
  std::uint64_t cursor_ = 0;
  bool detected_ = false;
  int use_index_ = 0;
  bool probe_pending_ = false;
};

struct DecodeResult {
  enum class Status { unique, ambiguous, error };
  Status status = Status::error;
  std::optional<Message> decoded;
  std::uint64_t candidates = 0;  // messages consistent with the observations
  int resolved_at = 0;           // first use with a unique survivor; 0 if never
};

/// Replays every candidate message against the observed outputs under full
/// receiver state information. Guarded to K <= 20 and M <= 64.
DecodeResult decode_block(const std::vector<int>& outputs, const DirectionState& state,
                          const ModelParams& params, int message_length,
                          CodecScheme scheme);

struct ErrorRateReport {
  std::uint64_t blocks = 0;
  std::uint64_t unique_correct = 0;
  std::uint64_t wrong_unique = 0;   // unique decode of the wrong message
  double error_rate = 0.0;          // fraction not uniquely and correctly decoded
  double bits_per_use = 0.0;        // delivered message bits per use needed
  double mean_resolution_use = 0.0; // over uniquely decoded blocks
};

ErrorRateReport simulate_error_rate(const ModelParams& params, int message_length,
                                    std::uint64_t blocks, std::uint64_t seed,
                                    CodecScheme scheme = CodecScheme::full);

}  // namespace beamcap
