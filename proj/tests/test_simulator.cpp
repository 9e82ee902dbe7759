#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cachenet/link.hpp"
#include "cachenet/simulator.hpp"

using namespace cachenet;

namespace {

TierLoad default_loads(const NetworkConfig& cfg) {
  return tier_loads(cfg, association_probabilities(cfg, 0.5, 0.5));
}

}  // namespace

TEST_CASE("realization point counts follow the Poisson mean") {
  const NetworkConfig cfg = default_config();
  const auto profile = make_cache_profile(CachePolicy::UC, 8, 10, 20);
  const double h = default_window_half(cfg);
  const double mean = cfg.lambda_m * 4.0 * h * h;
  double total = 0.0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    total += static_cast<double>(sample_realization(cfg, profile, h, s).mm_dist.size());
  }
  const double avg = total / seeds;
  const double sigma = std::sqrt(mean / seeds);
  CHECK(std::fabs(avg - mean) <= 3.0 * sigma);
}

TEST_CASE("a seed pins the realization bit for bit") {
  const NetworkConfig cfg = default_config();
  const auto profile = make_cache_profile(CachePolicy::UC, 8, 10, 20);
  const auto a = sample_realization(cfg, profile, default_window_half(cfg), 99);
  const auto b = sample_realization(cfg, profile, default_window_half(cfg), 99);
  REQUIRE(a.mm_dist.size() == b.mm_dist.size());
  for (Eigen::Index i = 0; i < a.mm_dist.size(); ++i) CHECK(a.mm_dist[i] == b.mm_dist[i]);
  CHECK(a.mm_los == b.mm_los);
  CHECK(a.mm_cache == b.mm_cache);
  CHECK(a.mu_cache == b.mu_cache);
}

TEST_CASE("LOS marks near 100 m follow the blockage curve") {
  const NetworkConfig cfg = default_config();
  const auto profile = make_cache_profile(CachePolicy::UC, 8, 10, 20);
  long los = 0, total = 0;
  for (int s = 0; s < 3000; ++s) {
    const auto r = sample_realization(cfg, profile, default_window_half(cfg), 5000 + s);
    for (Eigen::Index i = 0; i < r.mm_dist.size(); ++i) {
      if (r.mm_dist[i] >= 95.0 && r.mm_dist[i] <= 105.0) {
        ++total;
        los += r.mm_los[static_cast<std::size_t>(i)];
      }
    }
  }
  REQUIRE(total > 200);
  const double frac = static_cast<double>(los) / total;
  const double expect = std::exp(-0.8);
  const double sigma = std::sqrt(expect * (1 - expect) / total);
  CHECK(std::fabs(frac - expect) <= 3.5 * sigma);
}

TEST_CASE("association picks the only LOS cache-hit small cell") {
  const NetworkConfig cfg = default_config();
  Realization r;
  r.window_half = 1000;
  r.mm_xy.resize(1, 2);
  r.mm_xy << 50.0, 0.0;
  r.mm_dist.resize(1);
  r.mm_dist << 50.0;
  r.mm_los = {1};
  r.mm_cache.assign(cfg.f_count, 1);
  r.mu_xy.resize(0, 2);
  r.mu_dist.resize(0);
  const auto out = associate(r, cfg, 0);
  REQUIRE(out.has_value());
  CHECK(out->event == AssociationEvent::MmHitLos);
  CHECK(out->distance == 50.0);
}

TEST_CASE("a vanishing small-cell bias hands every user to the macro tier") {
  NetworkConfig cfg = default_config();
  cfg.b_m = 1e-12;
  const auto profile = make_cache_profile(CachePolicy::UC, 8, 10, 20);
  int mu_wins = 0, decided = 0;
  for (int s = 0; s < 50; ++s) {
    const auto r = sample_realization(cfg, profile, default_window_half(cfg), 777 + s);
    if (r.mu_dist.size() == 0) continue;
    const auto out = associate(r, cfg, 0);
    REQUIRE(out.has_value());
    ++decided;
    mu_wins += out->tier == Tier::MuWave ? 1 : 0;
  }
  CHECK(decided > 0);
  CHECK(mu_wins == decided);
}

TEST_CASE("empty window yields no association") {
  const NetworkConfig cfg = default_config();
  Realization r;
  r.window_half = 10;
  r.mm_xy.resize(0, 2);
  r.mm_dist.resize(0);
  r.mu_xy.resize(0, 2);
  r.mu_dist.resize(0);
  CHECK(!associate(r, cfg, 0).has_value());
}

TEST_CASE("ZF penalty Bernoulli rate in the SINR sampler") {
  const NetworkConfig cfg = default_config();
  TierLoad loads = default_loads(cfg);
  loads.u_m = 10;
  RngStream rng(4);
  long on = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const auto s = mm_sinr_sample(cfg, loads, AssociationEvent::MmHitLos, 80.0, 0.5, rng);
    on += s.zf_active ? 1 : 0;
  }
  const double expect = std::pow(1.0 - 1.0 / 16.0, 9.0);
  const double sigma = std::sqrt(expect * (1 - expect) / draws);
  CHECK(std::fabs(static_cast<double>(on) / draws - expect) <= 3.5 * sigma);
}

TEST_CASE("no interferers reduces the SINR to the closed form") {
  NetworkConfig cfg = default_config();
  cfg.lambda_m = 1e-30;  // empty interference field
  const auto loads = default_loads(default_config());
  RngStream rng(11);
  const auto s = mm_sinr_sample(cfg, loads, AssociationEvent::MmHitLos, 120.0, 0.5, rng);
  CHECK(s.interference == 0.0);
  const double eta = cfg.eta_los;
  const double coeff = cfg.p_m_tx / loads.u_m * (cfg.nt_m * cfg.nr_m / eta) *
                       std::pow(120.0, -cfg.alpha_los);
  CHECK(s.signal_coeff == doctest::Approx(coeff).epsilon(1e-12));
  const double expect = s.zf_active ? coeff * s.signal_fade / cfg.sigma2_m : 0.0;
  CHECK(s.sinr == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("SINR is stochastically decreasing in the serving distance") {
  const NetworkConfig cfg = default_config();
  const auto loads = default_loads(cfg);
  auto median_sinr = [&](double r) {
    std::vector<double> v;
    RngStream rng(31);
    for (int i = 0; i < 1001; ++i) {
      v.push_back(mm_sinr_sample(cfg, loads, AssociationEvent::MmHitLos, r, 0.5, rng).sinr);
    }
    std::nth_element(v.begin(), v.begin() + 500, v.end());
    return v[500];
  };
  CHECK(median_sinr(50.0) > median_sinr(200.0));
}

TEST_CASE("microwave rate sample equals the mean-rate curve") {
  const NetworkConfig cfg = default_config();
  const auto loads = default_loads(cfg);
  RngStream rng(8);
  const auto s = mu_rate_sample(cfg, loads, true, 100.0, 0.5, rng);
  CHECK(s.rate == mu_mean_rate(true, 100.0, cfg, loads, 0.5));
  CHECK(mu_rate_sample(cfg, loads, true, 1.0, 0.5, rng).rate >
        mu_rate_sample(cfg, loads, true, 100.0, 0.5, rng).rate);

  double total = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    total += mu_rate_sample(cfg, loads, true, 100.0, 0.5, rng).serving_gain;
  }
  const double shape = cfg.nt_mu - loads.u_mu + 1.0;
  const double sigma = std::sqrt(shape / draws);
  CHECK(std::fabs(total / draws - shape) <= 3.5 * sigma);
}

TEST_CASE("full caching and zero target rate delivers everything") {
  NetworkConfig cfg = default_config();
  cfg.nu = Eigen::ArrayXd::Zero(cfg.f_count);  // rate >= 0 always holds
  cfg.n_retx = 1;
  cfg.c_m = 19;
  cfg.c_mu = 20;
  const auto pop = zipf_popularity(cfg.f_count, cfg.upsilon);
  const auto profile = make_cache_profile(CachePolicy::MC, 20, 20, 20);
  const auto report = run_trials(cfg, pop, profile, 2000, 5);
  CHECK(report.asp == 1.0);
  CHECK(report.delivered == report.trials);
}

TEST_CASE("delivery improves with retransmission budget") {
  NetworkConfig cfg = default_config();
  const auto pop = zipf_popularity(cfg.f_count, cfg.upsilon);
  const auto profile = make_cache_profile(CachePolicy::MC, cfg.c_m, cfg.c_mu, cfg.f_count);
  double previous = -1.0;
  for (int n : {1, 3, 5}) {
    cfg.n_retx = n;
    const auto report = run_trials(cfg, pop, profile, 20000, 17, 0);
    CHECK(report.asp >= previous - 0.01);  // allow Monte Carlo noise
    previous = report.asp;
  }
}

TEST_CASE("reports are identical across worker counts") {
  NetworkConfig cfg = default_config();
  cfg.n_retx = 3;
  const auto pop = zipf_popularity(cfg.f_count, cfg.upsilon);
  const auto profile = make_cache_profile(CachePolicy::MC, cfg.c_m, cfg.c_mu, cfg.f_count);
  std::vector<TrialRecord> dump1, dump4;
  const auto a = run_trials(cfg, pop, profile, 6000, 42, 1, &dump1);
  const auto b = run_trials(cfg, pop, profile, 6000, 42, 4, &dump4);
  CHECK(a.asp == b.asp);
  CHECK(a.latency_mean == b.latency_mean);
  CHECK(a.backhaul_load == b.backhaul_load);
  CHECK(a.event_counts == b.event_counts);
  REQUIRE(dump1.size() == dump4.size());
  for (std::size_t i = 0; i < dump1.size(); ++i) {
    CHECK(dump1[i].file == dump4[i].file);
    CHECK(dump1[i].event == dump4[i].event);
    CHECK(dump1[i].distance == dump4[i].distance);
    CHECK(dump1[i].delay == dump4[i].delay);
  }
}

TEST_CASE("event frequencies match the analytic association probabilities") {
  const NetworkConfig cfg = default_config();
  const auto pop = zipf_popularity(cfg.f_count, 0.0);  // uniform requests
  const auto profile = make_cache_profile(CachePolicy::UC, 10, 10, 20);  // p = 0.5 everywhere
  const long trials = 20000;
  const auto report = run_trials(cfg, pop, profile, trials, 2718);
  const auto assoc = association_probabilities(cfg, 0.5, 0.5);
  for (const auto event : kAllEvents) {
    const double expect = assoc[event];
    const double freq =
        static_cast<double>(report.event_counts[static_cast<int>(event)]) / trials;
    const double sigma = std::sqrt(std::max(expect * (1 - expect), 1e-9) / trials);
    CHECK(std::fabs(freq - expect) <= 4.0 * sigma);
  }
}
