#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cachenet/catalog.hpp"
#include "cachenet/config.hpp"
#include "cachenet/geometry.hpp"
#include "cachenet/rng.hpp"

namespace cachenet {

// One sampled network: BS locations, per-link LOS marks to the typical user
// at the origin, and per-BS cached-file indicators.
struct Realization {
  double window_half = 0;            // square window half-width (m)
  Eigen::MatrixX2d mm_xy;            // mmWave SBS positions
  Eigen::MatrixX2d mu_xy;            // microwave MBS positions
  Eigen::ArrayXd mm_dist;            // distances to the origin
  Eigen::ArrayXd mu_dist;
  std::vector<std::uint8_t> mm_los;  // LOS mark per mmWave link
  // cache indicator matrices, BS-major: cache[bs * f_count + file]
  std::vector<std::uint8_t> mm_cache;
  std::vector<std::uint8_t> mu_cache;
};

// Default simulation window: half-width 5 / sqrt(pi * lambda_mu), wide enough
// that the serving BS lies inside it except with negligible probability.
double default_window_half(const NetworkConfig& cfg);

// Draw order is fixed (counts, mm positions, mm LOS marks, mm cache bits,
// mu positions, mu cache bits) so that a seed pins the realization exactly.
Realization sample_realization(const NetworkConfig& cfg, const CacheProfile& profile,
                               double window_half, std::uint64_t seed);

struct AssociationOutcome {
  AssociationEvent event;
  Tier tier;
  bool los = false;    // meaningful for mmWave only
  int bs_index = -1;
  double distance = 0;
};

// Least biased path loss association; empty window yields nullopt (caller
// resamples). The winner's cache bit for file_index decides hit/miss.
std::optional<AssociationOutcome> associate(const Realization& realization,
                                            const NetworkConfig& cfg, int file_index);

// One draw of the tractable mmWave SINR model, conditioned on a serving link
// of the given event at distance r. The interference field is sampled from
// the thinned-PPP law used by the single-attempt analysis: the serving
// event's own cache class is void inside the serving disc, every other
// thinned process extends to the origin.
struct MmSinrSample {
  double sinr = 0;
  double signal_fade = 0;     // unit-mean exponential serving-path power
  bool zf_active = false;     // ZF precoding penalty Bernoulli
  double interference = 0;    // aggregate inter-cell interference power (W)
  double signal_coeff = 0;    // (P/U)(n_t n_r / eta) r^-alpha
};

MmSinrSample mm_sinr_sample(const NetworkConfig& cfg, const TierLoad& loads,
                            AssociationEvent event, double r, double p_m_i, RngStream& rng);

// Microwave per-user rate at distance r: channel hardening pins it at the
// mean-rate curve; the Gamma serving-gain draw is kept as a diagnostic.
struct MuRateSample {
  double rate = 0;
  double serving_gain = 0;  // ~ Gamma(nt_mu - U + 1, 1)
};

MuRateSample mu_rate_sample(const NetworkConfig& cfg, const TierLoad& loads, bool hit,
                            double r, double p_mu_i, RngStream& rng);

struct FrequencyEstimate {
  double mean = 0;
  double std_error = 0;
  long n = 0;
};

// Empirical single-attempt success frequency for one mmWave event with the
// serving distance held fixed; the Monte Carlo side of the bound bracket.
FrequencyEstimate mm_conditional_success_frequency(const NetworkConfig& cfg,
                                                   const TierLoad& loads,
                                                   AssociationEvent event, double R,
                                                   double nu_i, double p_m_i, long drops,
                                                   std::uint64_t seed);

struct TrialRecord {
  std::uint64_t trial_seed = 0;
  int file = 0;
  AssociationEvent event = AssociationEvent::MmHitLos;
  double distance = 0;
  int attempts = 0;
  bool delivered = false;
  double delay = 0;
};

struct SimReport {
  long trials = 0;
  long delivered = 0;
  long resampled = 0;  // empty-window redraws
  double asp = 0, asp_ci_lo = 0, asp_ci_hi = 0;
  double latency_mean = 0, latency_ci_lo = 0, latency_ci_hi = 0;
  double backhaul_load = 0, backhaul_ci_lo = 0, backhaul_ci_hi = 0;  // bits/s per m^2
  std::array<long, 6> event_counts{};
};

// Full Monte Carlo replay of the access protocol: association, per-attempt
// fading/interference redraws, backhaul admission for cache misses, delays.
// Deterministic for a given (cfg, popularity, profile, trials, seed)
// regardless of worker count; workers = 0 uses the hardware concurrency.
SimReport run_trials(const NetworkConfig& cfg, const Popularity& popularity,
                     const CacheProfile& profile, long trials, std::uint64_t seed,
                     int workers = 0, std::vector<TrialRecord>* dump = nullptr);

}  // namespace cachenet
