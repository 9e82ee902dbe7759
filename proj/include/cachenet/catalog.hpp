#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "cachenet/config.hpp"

namespace cachenet {

enum class Tier { MmWave, MuWave };

enum class CachePolicy { UC, MC, RC, NoCache };

const char* to_string(CachePolicy policy);
std::optional<CachePolicy> parse_policy(const std::string& name);

// Zipf request distribution over the catalog: nonnegative, nonincreasing,
// sums to one.
struct Popularity {
  Eigen::ArrayXd f;
};

Popularity zipf_popularity(int f_count, double upsilon);

// Per-tier caching probabilities p_{j_i}, one entry per file.
struct CacheProfile {
  Eigen::ArrayXd p_m;
  Eigen::ArrayXd p_mu;
  CachePolicy policy = CachePolicy::NoCache;
};

// UC: every file cached with probability C/F. MC: the C most popular files
// cached with probability one. RC: i.i.d. uniform draws scaled by
// min(1, 2C/F) so the expected total is min(C, F/2), clipped to [0,1] and
// rescaled if the realized total exceeds C (seed required). NoCache: zeros.
//
// RC recipe, reproducible from the seed: one RngStream(seed) drawing F
// uniforms for the mmWave tier followed by F uniforms for the microwave tier.
CacheProfile make_cache_profile(CachePolicy policy, int c_m, int c_mu, int f_count,
                                std::optional<std::uint64_t> rng_seed = std::nullopt);

// Per-BS backhaul capacity C_b = c1/(lambda_m + lambda_mu) + c2 (bits/s).
double backhaul_capacity(const NetworkConfig& cfg);

// Average cache hit probability sum_i f_i p_{tier,i}.
double hit_probability(const Popularity& popularity, const CacheProfile& profile, Tier tier);

}  // namespace cachenet
