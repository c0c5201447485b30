#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beamcap/capacity.hpp"
#include "beamcap/model.hpp"

namespace beamcap {

constexpr std::uint64_t kDefaultSeed = 7;

/// Seed precedence: explicit value, else BEAMCAP_SEED from the environment,
/// else the built-in default.
std::uint64_t default_seed();

enum class SweepMode { formula, exact_tree, dp, monte_carlo, all };

std::string to_string(SweepMode m);
SweepMode sweep_mode_from_string(const std::string& s);

enum class OutputFormat { csv, json };

struct SweepConfig {
  std::vector<int> num_beams_list;   // M values
  std::vector<int> peak_cost_list;   // B values
  int length_lo = 1;                 // L range, inclusive
  int length_hi = 1;
  SweepMode mode = SweepMode::formula;
  std::uint64_t blocks = 100000;     // Monte Carlo only
  std::uint64_t seed = kDefaultSeed;
  int jobs = 0;                      // 0 = available parallelism
};

struct SweepRow {
  int num_beams = 0;
  int peak_cost = 0;
  int block_length = 0;
  std::string mode;
  std::optional<double> bits_per_use;
  std::optional<double> half_width;
  std::string error;  // guard violations; the run continues
};

/// One row per grid point per mode, in lexicographic (M, B, L, mode) order,
/// independent of the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

SweepConfig figure1_preset(int length_hi = 64);  // M=16, B in {2,3,4,5,8,9}
SweepConfig figure2_preset(int length_hi = 64);  // B=2, M in {4,8,16,32,64}

/// CSV: header M,B_peak,L,mode,bits_per_use,half_width; UTF-8; LF endings;
/// floats at 12 significant digits. Byte-identical across reruns with the
/// same config and seed.
std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_json(const std::vector<SweepRow>& rows);

std::string format_g12(double v);

struct CheckResult {
  std::string check;
  std::string point;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct CertifyConfig {
  std::vector<int> num_beams_list = {2, 4, 6, 8, 16};
  int length_hi = 6;
  std::uint64_t seed = kDefaultSeed;
  int jobs = 0;
  /// Test hook: added to the exact-tree entropy before comparison, so the
  /// harness can prove it pinpoints a corrupted value.
  double entropy_bias = 0.0;
};

struct CertifyReport {
  std::vector<CheckResult> checks;
  bool all_pass = true;
  const CheckResult* first_failure() const;
};

/// Runs the full invariant suite: formula/tree/DP/brute agreement, the C=1
/// thresholds, monotonicity over the figure presets, schedule feasibility,
/// and exhaustive trapping soundness.
CertifyReport certify(const CertifyConfig& config);

std::string to_json(const CertifyReport& report);

/// Writes a file atomically enough for our purposes; throws std::ios_base::failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace beamcap
