// Command-line front end: capacity evaluation, parameter sweeps, codec
// simulation, and the invariant certification suite.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamcap/codec.hpp"
#include "beamcap/experiments.hpp"
#include "beamcap/oracle.hpp"
#include "beamcap/strategy.hpp"

namespace {

using namespace beamcap;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct LengthRange {
  int lo = 1;
  int hi = 1;
};

LengthRange parse_length_range(const std::string& s) {
  LengthRange r;
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      r.lo = r.hi = std::stoi(s);
    } else {
      r.lo = std::stoi(s.substr(0, colon));
      r.hi = std::stoi(s.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--L", "expected N or LO:HI");
  }
  if (r.lo < 1 || r.hi < r.lo) throw CLI::ValidationError("--L", "need 1 <= LO <= HI");
  return r;
}

void emit(const std::string& contents, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << contents;
  } else {
    write_file(out_path, contents);
  }
}

int run_point_command(int m, int b, const std::string& length_spec, const std::string& mode,
                      std::uint64_t blocks, std::uint64_t seed, const std::string& out,
                      const std::string& format, int jobs) {
  SweepConfig config;
  config.num_beams_list = {m};
  config.peak_cost_list = {b};
  const LengthRange lr = parse_length_range(length_spec);
  config.length_lo = lr.lo;
  config.length_hi = lr.hi;
  config.mode = sweep_mode_from_string(mode);
  config.blocks = blocks;
  config.seed = seed;
  config.jobs = jobs;
  const std::vector<SweepRow> rows = run_sweep(config);
  emit(format == "json" ? to_json(rows) : to_csv(rows), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamcap: capacity and probing-policy toolkit for the binary beam-pointing channel"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  int m = 16;
  int b = 2;
  std::string length_spec = "1";
  std::string mode = "formula";
  std::string format = "csv";
  std::string out;
  std::uint64_t blocks = 100000;
  int jobs = 0;
  std::string m_list = "16";
  std::string b_list = "2";
  int message_length = 8;
  std::string scheme = "full";
  double corrupt_entropy = 0.0;

  auto* cap = app.add_subcommand("capacity", "Evaluate the capacity at one or more block lengths");
  cap->add_option("--M", m, "Number of beam directions")->default_val(16);
  cap->add_option("--B", b, "Peak Hamming cost per probe")->default_val(2);
  cap->add_option("--L", length_spec, "Block length N or range LO:HI")->default_val("1");
  cap->add_option("--mode", mode, "formula|exact-tree|dp|monte-carlo|all")->default_val("formula");
  cap->add_option("--blocks", blocks, "Monte Carlo block count")->default_val(100000);
  cap->add_option("--seed", seed, "Random seed (default from BEAMCAP_SEED or 7)");
  cap->add_option("--out", out, "Output path (default stdout)");
  cap->add_option("--format", format, "csv|json")->default_val("csv");
  cap->add_option("--jobs", jobs, "Worker count (0 = available parallelism)")->default_val(0);

  auto* sweep = app.add_subcommand("sweep", "Evaluate a full (M, B, L, mode) grid");
  sweep->add_option("--M", m_list, "Comma-separated M values")->default_val("16");
  sweep->add_option("--B", b_list, "Comma-separated B values")->default_val("2");
  sweep->add_option("--L", length_spec, "Block length N or range LO:HI")->default_val("1:64");
  sweep->add_option("--mode", mode, "formula|exact-tree|dp|monte-carlo|all")->default_val("formula");
  sweep->add_option("--blocks", blocks, "Monte Carlo block count")->default_val(100000);
  sweep->add_option("--seed", seed, "Random seed (default from BEAMCAP_SEED or 7)");
  sweep->add_option("--out", out, "Output path (default stdout)");
  sweep->add_option("--format", format, "csv|json")->default_val("csv");
  sweep->add_option("--jobs", jobs, "Worker count (0 = available parallelism)")->default_val(0);

  auto* fig1 = app.add_subcommand("figure1", "Capacity vs blocklength at M=16, B in {2,3,4,5,8,9}");
  fig1->add_option("--L", length_spec, "Block length range")->default_val("1:64");
  fig1->add_option("--out", out, "Output path (default stdout)");
  fig1->add_option("--format", format, "csv|json")->default_val("csv");
  fig1->add_option("--jobs", jobs, "Worker count")->default_val(0);

  auto* fig2 = app.add_subcommand("figure2", "Capacity vs blocklength at B=2, M in {4,8,16,32,64}");
  fig2->add_option("--L", length_spec, "Block length range")->default_val("1:64");
  fig2->add_option("--out", out, "Output path (default stdout)");
  fig2->add_option("--format", format, "csv|json")->default_val("csv");
  fig2->add_option("--jobs", jobs, "Worker count")->default_val(0);

  auto* sim = app.add_subcommand("simulate", "Run the message codec over simulated blocks");
  sim->add_option("--M", m, "Number of beam directions")->default_val(16);
  sim->add_option("--B", b, "Peak Hamming cost per probe")->default_val(2);
  sim->add_option("--L", length_spec, "Block length")->default_val("32");
  sim->add_option("--K", message_length, "Message length in bits (0..20)")->default_val(8);
  sim->add_option("--blocks", blocks, "Number of simulated blocks")->default_val(10000);
  sim->add_option("--seed", seed, "Random seed (default from BEAMCAP_SEED or 7)");
  sim->add_option("--scheme", scheme, "full|post-detection")->default_val("full");
  sim->add_option("--out", out, "Output path for the JSON report (default stdout)");

  auto* cert = app.add_subcommand("certify", "Run the invariant suite; exit 1 on any failure");
  cert->add_option("--L", length_spec, "Largest block length in the grid")->default_val("6");
  cert->add_option("--seed", seed, "Random seed (default from BEAMCAP_SEED or 7)");
  cert->add_option("--out", out, "Output path for the JSON report (default stdout)");
  cert->add_option("--jobs", jobs, "Worker count")->default_val(0);
  cert->add_option("--corrupt-entropy", corrupt_entropy, "Harness self-test: bias the tree entropy")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cap->parsed()) {
      return run_point_command(m, b, length_spec, mode, blocks, seed, out, format, jobs);
    }
    if (sweep->parsed()) {
      SweepConfig config;
      for (const std::string& tok : CLI::detail::split(m_list, ','))
        config.num_beams_list.push_back(std::stoi(tok));
      for (const std::string& tok : CLI::detail::split(b_list, ','))
        config.peak_cost_list.push_back(std::stoi(tok));
      const LengthRange lr = parse_length_range(length_spec);
      config.length_lo = lr.lo;
      config.length_hi = lr.hi;
      config.mode = sweep_mode_from_string(mode);
      config.blocks = blocks;
      config.seed = seed;
      config.jobs = jobs;
      const std::vector<SweepRow> rows = run_sweep(config);
      emit(format == "json" ? to_json(rows) : to_csv(rows), out);
      return kExitOk;
    }
    if (fig1->parsed() || fig2->parsed()) {
      const LengthRange lr = parse_length_range(length_spec);
      SweepConfig config = fig1->parsed() ? figure1_preset(lr.hi) : figure2_preset(lr.hi);
      config.length_lo = lr.lo;
      config.jobs = jobs;
      const std::vector<SweepRow> rows = run_sweep(config);
      emit(format == "json" ? to_json(rows) : to_csv(rows), out);
      return kExitOk;
    }
    if (sim->parsed()) {
      const LengthRange lr = parse_length_range(length_spec);
      if (lr.lo != lr.hi) throw CLI::ValidationError("--L", "simulate takes a single L");
      const CodecScheme cs = scheme == "post-detection" ? CodecScheme::post_detection_only
                                                        : CodecScheme::full;
      const ModelParams params(m, lr.lo, b);
      const ErrorRateReport rep = simulate_error_rate(params, message_length, blocks, seed, cs);
      nlohmann::json o;
      o["M"] = m;
      o["B_peak"] = b;
      o["L"] = lr.lo;
      o["K"] = message_length;
      o["scheme"] = scheme;
      o["blocks"] = rep.blocks;
      o["unique_correct"] = rep.unique_correct;
      o["wrong_unique"] = rep.wrong_unique;
      o["error_rate"] = rep.error_rate;
      o["bits_per_use"] = rep.bits_per_use;
      o["mean_resolution_use"] = rep.mean_resolution_use;
      o["capacity"] = capacity(params).bits_per_use;
      emit(o.dump(2) + "\n", out);
      return kExitOk;
    }
    if (cert->parsed()) {
      CertifyConfig config;
      const LengthRange lr = parse_length_range(length_spec);
      config.length_hi = lr.hi;
      config.seed = seed;
      config.jobs = jobs;
      config.entropy_bias = corrupt_entropy;
      const CertifyReport report = certify(config);
      emit(to_json(report), out);
      if (!report.all_pass) {
        const CheckResult* first = report.first_failure();
        std::cerr << "certify: FAILED at check '" << first->check << "' (" << first->point
                  << "): expected " << first->expected << ", got " << first->actual << "\n";
        return kExitCheckFailure;
      }
      std::cerr << "certify: all " << report.checks.size() << " checks passed\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitOk;
}
