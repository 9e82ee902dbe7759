#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cachenet/catalog.hpp"
#include "cachenet/rng.hpp"

using namespace cachenet;

TEST_CASE("zipf degenerate and two-file cases") {
  CHECK(zipf_popularity(1, 0.8).f[0] == doctest::Approx(1.0).epsilon(1e-15));
  const auto two = zipf_popularity(2, 1.0);
  CHECK(two.f[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(two.f[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("zipf head mass against the direct summation oracle") {
  // oracle: H = sum_{j=1..20} j^-0.8, f_1 = 1/H, computed term by term
  double h = 0.0;
  for (int j = 1; j <= 20; ++j) h += std::pow(j, -0.8);
  CHECK(1.0 / h == doctest::Approx(0.21229198890532444).epsilon(1e-14));  // frozen
  const auto pop = zipf_popularity(20, 0.8);
  CHECK(pop.f[0] == doctest::Approx(1.0 / h).epsilon(1e-13));
}

TEST_CASE("zero skewness is uniform") {
  const auto pop = zipf_popularity(20, 0.0);
  for (int i = 0; i < 20; ++i) CHECK(pop.f[i] == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("normalization and monotonicity across the parameter range") {
  for (int f_count : {1, 10, 137, 10000}) {
    for (double upsilon : {0.0, 0.4, 1.0, 2.2, 3.0}) {
      const auto pop = zipf_popularity(f_count, upsilon);
      CHECK(std::fabs(pop.f.sum() - 1.0) <= 1e-12);
      for (int i = 1; i < f_count; ++i) CHECK(pop.f[i] <= pop.f[i - 1] + 1e-15);
      CHECK((pop.f >= 0).all());
    }
  }
}

TEST_CASE("zipf rejects an empty catalog") {
  CHECK_THROWS_AS(zipf_popularity(0, 0.8), std::invalid_argument);
}

TEST_CASE("MC caches exactly the head of the catalog") {
  const auto profile = make_cache_profile(CachePolicy::MC, 2, 3, 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(profile.p_m[i] == (i < 2 ? 1.0 : 0.0));
    CHECK(profile.p_mu[i] == (i < 3 ? 1.0 : 0.0));
  }
}

TEST_CASE("UC spreads the cache uniformly") {
  const auto profile = make_cache_profile(CachePolicy::UC, 10, 12, 20);
  for (int i = 0; i < 20; ++i) CHECK(profile.p_m[i] == doctest::Approx(0.5));
}

TEST_CASE("NoCache is all zeros") {
  const auto profile = make_cache_profile(CachePolicy::NoCache, 8, 10, 20);
  CHECK(profile.p_m.sum() == 0.0);
  CHECK(profile.p_mu.sum() == 0.0);
}

TEST_CASE("RC respects the cache budget and reruns from its seed") {
  const auto profile = make_cache_profile(CachePolicy::RC, 8, 10, 20, 7);
  CHECK(profile.p_m.sum() <= 8.0 + 1e-9);
  CHECK(profile.p_mu.sum() <= 10.0 + 1e-9);
  CHECK((profile.p_m >= 0).all());
  CHECK((profile.p_m <= 1).all());

  // re-execution oracle: the documented recipe, replayed here
  RngStream rng(7);
  Eigen::ArrayXd expect_m(20), expect_mu(20);
  const double scale_m = std::min(1.0, 2.0 * 8.0 / 20.0);
  for (int i = 0; i < 20; ++i) expect_m[i] = std::min(1.0, rng.u01() * scale_m);
  if (expect_m.sum() > 8.0) expect_m *= 8.0 / expect_m.sum();
  const double scale_mu = std::min(1.0, 2.0 * 10.0 / 20.0);
  for (int i = 0; i < 20; ++i) expect_mu[i] = std::min(1.0, rng.u01() * scale_mu);
  if (expect_mu.sum() > 10.0) expect_mu *= 10.0 / expect_mu.sum();
  for (int i = 0; i < 20; ++i) {
    CHECK(profile.p_m[i] == expect_m[i]);
    CHECK(profile.p_mu[i] == expect_mu[i]);
  }
}

TEST_CASE("RC expected budget usage over many seeds") {
  double total = 0.0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    total += make_cache_profile(CachePolicy::RC, 8, 10, 20, s).p_m.sum();
  }
  const double mean = total / seeds;
  CHECK(mean == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("cache profile preconditions") {
  CHECK_THROWS_AS(make_cache_profile(CachePolicy::MC, 25, 10, 20), std::invalid_argument);
  CHECK_THROWS_AS(make_cache_profile(CachePolicy::RC, 8, 10, 20), std::invalid_argument);
}

TEST_CASE("backhaul capacity from the density model") {
  NetworkConfig cfg = default_config();
  cfg.c1 = 60;
  cfg.c2 = 0;
  cfg.lambda_m = 1e-5;
  cfg.lambda_mu = 5e-6;
  CHECK(backhaul_capacity(cfg) == doctest::Approx(4.0e6).epsilon(1e-9));

  cfg.c1 = 0;
  cfg.c2 = 5e6;
  CHECK(backhaul_capacity(cfg) == 5e6);

  cfg.c1 = 60;
  cfg.c2 = 0;
  const double base = backhaul_capacity(cfg);
  cfg.lambda_m *= 2;
  cfg.lambda_mu *= 2;
  CHECK(backhaul_capacity(cfg) == doctest::Approx(base / 2).epsilon(1e-12));

  cfg.lambda_m = 0;
  cfg.lambda_mu = 0;
  CHECK_THROWS_AS(backhaul_capacity(cfg), std::invalid_argument);
}

TEST_CASE("hit probability endpoints and the two-term oracle") {
  const auto pop = zipf_popularity(20, 0.8);
  auto ones = make_cache_profile(CachePolicy::MC, 20, 20, 20);
  // c == f_count means every file cached in both tiers
  CHECK(hit_probability(pop, ones, Tier::MmWave) == doctest::Approx(1.0).epsilon(1e-12));
  const auto none = make_cache_profile(CachePolicy::NoCache, 0, 0, 20);
  CHECK(hit_probability(pop, none, Tier::MmWave) == 0.0);

  const auto mc = make_cache_profile(CachePolicy::MC, 2, 3, 20);
  double h = 0.0;
  for (int j = 1; j <= 20; ++j) h += std::pow(j, -0.8);
  const double oracle = (1.0 + std::pow(2.0, -0.8)) / h;  // f_1 + f_2
  CHECK(hit_probability(pop, mc, Tier::MmWave) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("hit probability is monotone in cache size and MC dominates UC") {
  for (double upsilon : {0.2, 0.8, 1.5}) {
    const auto pop = zipf_popularity(20, upsilon);
    double previous = 0.0;
    for (int c : {2, 5, 9, 15}) {
      const auto mc = make_cache_profile(CachePolicy::MC, c, c + 1, 20);
      const auto uc = make_cache_profile(CachePolicy::UC, c, c + 1, 20);
      const double hit_mc = hit_probability(pop, mc, Tier::MmWave);
      const double hit_uc = hit_probability(pop, uc, Tier::MmWave);
      CHECK(hit_mc >= hit_uc - 1e-12);
      CHECK(hit_mc >= previous - 1e-12);
      previous = hit_mc;
    }
  }
}

TEST_CASE("hit probability rejects mismatched lengths") {
  const auto pop = zipf_popularity(10, 0.8);
  const auto profile = make_cache_profile(CachePolicy::UC, 5, 6, 20);
  CHECK_THROWS_AS(hit_probability(pop, profile, Tier::MmWave), std::invalid_argument);
}
