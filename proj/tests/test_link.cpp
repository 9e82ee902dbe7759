#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cachenet/link.hpp"
#include "cachenet/rng.hpp"

using namespace cachenet;

namespace {

TierLoad default_loads(const NetworkConfig& cfg) {
  return tier_loads(cfg, association_probabilities(cfg, 0.5, 0.5));
}

// Table II pins the served-user counts at the RF-chain/antenna budget.
TierLoad pinned_loads() {
  TierLoad loads;
  loads.u_m = 10;
  loads.u_mu = 100;
  loads.u_other_m = 10;
  loads.u_other_mu = 100;
  loads.n_assoc_tagged_m = 10;
  loads.n_assoc_tagged_mu = 100;
  return loads;
}

}  // namespace

TEST_CASE("zero target rate leaves only the ZF penalty") {
  const NetworkConfig cfg = default_config();
  const double asp = mm_conditional_asp(AssociationEvent::MmHitLos, 50.0, 0.0, cfg,
                                        pinned_loads(), 0.5, BoundSide::Lower);
  CHECK(asp == doctest::Approx(0.5594245067186421).epsilon(1e-12));  // frozen (1-1/16)^9
  const double upper = mm_conditional_asp(AssociationEvent::MmHitLos, 50.0, 0.0, cfg,
                                          pinned_loads(), 0.5, BoundSide::Upper);
  CHECK(upper == doctest::Approx(asp).epsilon(1e-12));
}

TEST_CASE("extreme serving distance drives the ASP to zero") {
  const NetworkConfig cfg = default_config();
  const auto loads = default_loads(cfg);
  for (const auto event :
       {AssociationEvent::MmHitLos, AssociationEvent::MmHitNlos, AssociationEvent::MmMissLos,
        AssociationEvent::MmMissNlos}) {
    const double asp =
        mm_conditional_asp(event, 1e6, 1e6, cfg, loads, 0.5, BoundSide::Upper);
    CHECK(asp < 1e-6);
  }
}

TEST_CASE("lower bound never exceeds upper bound on a random grid") {
  const NetworkConfig cfg = default_config();
  const auto loads = default_loads(cfg);
  RngStream rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto event = kAllEvents[rng.next_u64() % 4];
    const double R = rng.uniform(10.0, 500.0);
    const double nu = std::pow(10.0, rng.uniform(5.0, 6.8));
    const double lo = mm_conditional_asp(event, R, nu, cfg, loads, 0.5, BoundSide::Lower);
    const double hi = mm_conditional_asp(event, R, nu, cfg, loads, 0.5, BoundSide::Upper);
    CHECK(lo <= hi + 1e-12);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
  }
}

TEST_CASE("conditional ASP decays with distance and with the target rate") {
  const NetworkConfig cfg = default_config();
  const auto loads = default_loads(cfg);
  for (const auto side : {BoundSide::Lower, BoundSide::Upper}) {
    for (const auto event : {AssociationEvent::MmHitLos, AssociationEvent::MmHitNlos,
                             AssociationEvent::MmMissLos, AssociationEvent::MmMissNlos}) {
      double previous = 2.0;
      for (double R : {20.0, 60.0, 150.0, 400.0, 900.0}) {
        const double asp = mm_conditional_asp(event, R, 1e6, cfg, loads, 0.5, side);
        CHECK(asp <= previous + 1e-9);
        previous = asp;
      }
      previous = 2.0;
      for (double nu : {1e5, 1e6, 5e6, 2e7}) {
        const double asp = mm_conditional_asp(event, 120.0, nu, cfg, loads, 0.5, side);
        CHECK(asp <= previous + 1e-9);
        previous = asp;
      }
    }
  }
}

TEST_CASE("backhaul ASP matches the three-user enumeration oracle") {
  NetworkConfig cfg = default_config();
  // budget of exactly one backhaul share: C_b/nu = 1.2
  cfg.c1 = 0.0;
  cfg.c2 = 1.2e6;
  TierLoad loads = pinned_loads();
  loads.u_m = 3;
  // oracle: sum over n of C(2,n) 0.5^2 min(1, 1/(n+1)) = 1/4 + 1/4 + 1/12
  const double oracle = 0.25 + 0.5 * 0.5 + 0.25 / 3.0;
  const double asp = backhaul_asp(Tier::MmWave, 1e6, cfg, loads, 0.5);
  CHECK(asp == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(asp == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("backhaul ASP saturation cases") {
  NetworkConfig cfg = default_config();
  cfg.c1 = 0.0;
  cfg.c2 = 50e6;  // N_b = 50 >= U
  const auto loads = pinned_loads();
  CHECK(backhaul_asp(Tier::MmWave, 1e6, cfg, loads, 0.2) == 1.0);

  cfg.c2 = 1.2e6;  // N_b = 1
  CHECK(backhaul_asp(Tier::MmWave, 1e6, cfg, loads, 1.0) == 1.0);
  CHECK(backhaul_asp(Tier::MmWave, 1e6, cfg, loads, 0.4) <= 1.0);

  cfg.c2 = 0.5e6;  // N_b = 0: nothing admitted
  cfg.c1 = 0.0;
  CHECK(backhaul_asp(Tier::MmWave, 1e6, cfg, loads, 0.5) == 0.0);
}

TEST_CASE("backhaul ASP is monotone in the hit probability and the capacity") {
  const NetworkConfig base = default_config();
  const auto loads = default_loads(base);
  double previous = -1.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double asp = backhaul_asp(Tier::MmWave, 1e6, base, loads, p);
    CHECK(asp >= previous - 1e-12);
    previous = asp;
  }
  previous = -1.0;
  NetworkConfig cfg = base;
  for (double c1 : {5.0, 20.0, 60.0, 150.0}) {
    cfg.c1 = c1;
    const double asp = backhaul_asp(Tier::MmWave, 1e6, cfg, loads, 0.5);
    CHECK(asp >= previous - 1e-12);
    previous = asp;
  }
}

TEST_CASE("massive MIMO constants at the no-excess-antenna corner") {
  NetworkConfig cfg = default_config();
  TierLoad loads = pinned_loads();  // u_mu = nt_mu = 100, shape parameter is 1
  const auto k = link_constants(cfg, loads, 1e6, 100.0, true, true, 1.0);
  const double pi = 3.141592653589793238462643383279502884;
  CHECK(k.c1_mimo == doctest::Approx(cfg.p_mu_tx / 100.0 * pi / 4.0).epsilon(1e-12));
  CHECK(k.c2_mimo == doctest::Approx(cfg.p_mu_tx / 100.0 * (1.0 - pi / 4.0)).epsilon(1e-10));
  CHECK(k.c3_dprime == 0.0);  // fully cached tier has no constant Campbell term
  CHECK(k.q_threshold ==
        doctest::Approx(std::pow(2.0, 1e6 * 10.0 / cfg.w_m) - 1.0).epsilon(1e-12));
}

TEST_CASE("microwave mean rate decreases with distance") {
  const NetworkConfig cfg = default_config();
  const auto loads = default_loads(cfg);
  double previous = std::numeric_limits<double>::infinity();
  for (double r = 1.0; r <= 1000.0; r *= 1.6) {
    const double rate = mu_mean_rate(true, r, cfg, loads, 0.5);
    CHECK(rate < previous);
    previous = rate;
  }
  CHECK_THROWS_AS(mu_mean_rate(true, 0.5, cfg, loads, 0.5), std::invalid_argument);
}

TEST_CASE("microwave conditional ASP endpoints") {
  const NetworkConfig cfg = default_config();
  const GeometricAssociation geom(cfg);
  const auto loads = default_loads(cfg);

  // unreachable rate: the mean rate at one metre is already below nu
  const double huge_rate = mu_mean_rate(true, 1.0, cfg, loads, 0.5) * 2.0;
  CHECK(mu_conditional_asp(true, huge_rate, geom, loads, 0.5, BoundSide::Lower) == 0.0);

  // trivially small rate: all mass on [1, inf)
  const double tiny = mu_conditional_asp(true, 1e-3, geom, loads, 0.5, BoundSide::Lower);
  CHECK(tiny >= 0.999);
  CHECK(tiny <= 1.0);

  const double lower = mu_conditional_asp(true, 1e6, geom, loads, 0.5, BoundSide::Lower);
  const double upper = mu_conditional_asp(true, 1e6, geom, loads, 0.5, BoundSide::Upper);
  CHECK(lower <= upper + 1e-12);
  // the floor/ceil gap is at most one unit interval of density mass
  const double r_star = mu_critical_radius(true, 1e6, cfg, loads, 0.5);
  CHECK(r_star > 1.0);
  double peak = 0.0;
  for (double r = std::floor(r_star); r <= std::ceil(r_star) + 1e-9; r += 0.05) {
    peak = std::max(peak, distance_pdf(AssociationEvent::MuHit, r, geom, 0.5, 0.5));
  }
  CHECK(upper - lower <= peak * 1.0 + 1e-9);
}

TEST_CASE("microwave bracket tightens with macro density") {
  NetworkConfig cfg = default_config();
  double previous_gap = std::numeric_limits<double>::infinity();
  for (double scale : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    cfg.lambda_mu = 5e-6 * scale;
    cfg.lambda_m = std::max(cfg.lambda_m, cfg.lambda_mu * 2);  // keep ordering valid
    const GeometricAssociation geom(cfg);
    const auto loads = tier_loads(cfg, association_probabilities(geom, 0.5, 0.5));
    const double lo = mu_conditional_asp(true, 1e6, geom, loads, 0.5, BoundSide::Lower);
    const double hi = mu_conditional_asp(true, 1e6, geom, loads, 0.5, BoundSide::Upper);
    const double gap = hi - lo;
    CHECK(gap <= previous_gap + 1e-3);
    previous_gap = gap;
  }
}

TEST_CASE("link constants carry the Laplace argument and backhaul budget") {
  const NetworkConfig cfg = default_config();
  const auto loads = pinned_loads();
  const auto k = link_constants(cfg, loads, 1e6, 100.0, true, true, 0.5);
  CHECK(k.s_lap < 0.0);
  CHECK(k.s_lap ==
        doctest::Approx(-k.q_threshold * std::pow(100.0, cfg.alpha_los) / k.g_gain)
            .epsilon(1e-12));
  CHECK(k.n_b == 4.0);  // C_b = 60/1.5e-5 = 4e6, nu = 1e6
  CHECK(k.r_star > 1.0);
}
