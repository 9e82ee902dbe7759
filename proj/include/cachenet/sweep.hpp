#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cachenet/catalog.hpp"
#include "cachenet/config.hpp"
#include "cachenet/link.hpp"

namespace cachenet {

enum class EngineMode { Analytic, Simulate, Both };

const char* to_string(EngineMode mode);
std::optional<EngineMode> parse_engine_mode(const std::string& name);

// One figure-style sweep: a single swept parameter crossed with caching
// policies and retransmission budgets.
struct SweepSpec {
  std::string name = "custom";
  std::string parameter;  // upsilon | c1 | cache | f_count | nu | beta | n_retx
  std::vector<double> values;
  std::vector<std::pair<int, int>> cache_pairs;  // (c_mu, c_m) when parameter == "cache"
  std::vector<CachePolicy> policies;
  std::vector<int> n_list = {1};
  EngineMode engines = EngineMode::Both;
  std::vector<BoundSide> sides = {BoundSide::Lower, BoundSide::Upper};
  long trials = 20000;
  std::uint64_t seed = 1;
  std::uint64_t rc_seed = 7;  // RC placement seed, fixed across sweep points
  int workers = 0;
};

// The seven figure families; cache sizes and unspecified constants come from
// the supplied configuration.
std::optional<SweepSpec> preset_spec(const std::string& name);

// Throws std::invalid_argument for an ill-formed spec (empty or unsorted
// value list, unknown parameter) and NumericFailure for quadrature breakdown;
// on success writes one CSV per (policy, N) plus manifest.json into out_dir.
void run_sweep(const NetworkConfig& cfg, const SweepSpec& spec, const std::string& out_dir);

// Round-trip: re-run a sweep exactly as recorded in a manifest.
void run_sweep_from_manifest(const std::string& manifest_path, const std::string& out_dir);

struct ComparePoint {
  double swept_value = 0;
  CachePolicy policy = CachePolicy::MC;
  int n_retx = 1;
  double asp_lower = 0, asp_upper = 0, asp_sim = 0, asp_ci_lo = 0, asp_ci_hi = 0;
  double latency_lo = 0, latency_hi = 0, latency_sim = 0, latency_ci_lo = 0,
         latency_ci_hi = 0;
  double backhaul_analytic = 0, backhaul_sim = 0, backhaul_ci_lo = 0, backhaul_ci_hi = 0;
  bool contains_asp = false;
  bool contains_latency = false;
  bool contains_backhaul = false;
};

// Runs both engines over the sweep and reports whether each analytic bracket
// (widened by the Monte Carlo confidence interval) contains the estimate.
std::vector<ComparePoint> run_compare(const NetworkConfig& cfg, const SweepSpec& spec,
                                      const std::string& out_dir);

// Single-point helpers used by the CLI `analytic` and `simulate` subcommands.
void write_single_point_csv(const std::string& path, const NetworkConfig& cfg,
                            const std::string& policy, const std::vector<std::string>& rows);
std::string csv_header();
std::string format_double(double x);

}  // namespace cachenet
