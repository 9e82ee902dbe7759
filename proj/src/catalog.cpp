#include "cachenet/catalog.hpp"

#include <cmath>
#include <stdexcept>

#include "cachenet/rng.hpp"

namespace cachenet {

const char* to_string(CachePolicy policy) {
  switch (policy) {
    case CachePolicy::UC: return "UC";
    case CachePolicy::MC: return "MC";
    case CachePolicy::RC: return "RC";
    case CachePolicy::NoCache: return "NoCache";
  }
  return "?";
}

std::optional<CachePolicy> parse_policy(const std::string& name) {
  if (name == "UC" || name == "uc") return CachePolicy::UC;
  if (name == "MC" || name == "mc") return CachePolicy::MC;
  if (name == "RC" || name == "rc") return CachePolicy::RC;
  if (name == "NoCache" || name == "nocache" || name == "none") return CachePolicy::NoCache;
  return std::nullopt;
}

Popularity zipf_popularity(int f_count, double upsilon) {
  if (f_count < 1) throw std::invalid_argument("zipf_popularity: f_count must be >= 1");
  if (upsilon < 0) throw std::invalid_argument("zipf_popularity: upsilon must be >= 0");
  Eigen::ArrayXd f(f_count);
  for (int i = 0; i < f_count; ++i) f[i] = std::pow(static_cast<double>(i + 1), -upsilon);
  f /= f.sum();
  return Popularity{std::move(f)};
}

namespace {

Eigen::ArrayXd tier_probabilities(CachePolicy policy, int c, int f_count, RngStream* rng) {
  Eigen::ArrayXd p = Eigen::ArrayXd::Zero(f_count);
  switch (policy) {
    case CachePolicy::NoCache:
      break;
    case CachePolicy::UC:
      p.setConstant(static_cast<double>(c) / f_count);
      break;
    case CachePolicy::MC:
      for (int i = 0; i < c; ++i) p[i] = 1.0;
      break;
    case CachePolicy::RC: {
      const double scale = std::min(1.0, 2.0 * c / f_count);
      for (int i = 0; i < f_count; ++i) {
        p[i] = std::min(1.0, rng->u01() * scale);
      }
      const double total = p.sum();
      if (total > c && total > 0) p *= c / total;
      break;
    }
  }
  return p;
}

}  // namespace

CacheProfile make_cache_profile(CachePolicy policy, int c_m, int c_mu, int f_count,
                                std::optional<std::uint64_t> rng_seed) {
  if (f_count < 1) throw std::invalid_argument("make_cache_profile: f_count must be >= 1");
  if (c_m < 0 || c_m > f_count || c_mu < 0 || c_mu > f_count) {
    throw std::invalid_argument("make_cache_profile: cache sizes must lie in [0, f_count]");
  }
  if (policy == CachePolicy::RC && !rng_seed) {
    throw std::invalid_argument("make_cache_profile: RC requires an rng seed");
  }

  CacheProfile profile;
  profile.policy = policy;
  if (policy == CachePolicy::RC) {
    RngStream rng(*rng_seed);
    profile.p_m = tier_probabilities(policy, c_m, f_count, &rng);
    profile.p_mu = tier_probabilities(policy, c_mu, f_count, &rng);
  } else {
    profile.p_m = tier_probabilities(policy, c_m, f_count, nullptr);
    profile.p_mu = tier_probabilities(policy, c_mu, f_count, nullptr);
  }
  return profile;
}

double backhaul_capacity(const NetworkConfig& cfg) {
  const double density = cfg.lambda_m + cfg.lambda_mu;
  if (!(density > 0)) {
    throw std::invalid_argument("backhaul_capacity: lambda_m + lambda_mu must be > 0");
  }
  return cfg.c1 / density + cfg.c2;
}

double hit_probability(const Popularity& popularity, const CacheProfile& profile, Tier tier) {
  const Eigen::ArrayXd& p = tier == Tier::MmWave ? profile.p_m : profile.p_mu;
  if (popularity.f.size() != p.size()) {
    throw std::invalid_argument("hit_probability: popularity/profile length mismatch");
  }
  return (popularity.f * p).sum();
}

}  // namespace cachenet
