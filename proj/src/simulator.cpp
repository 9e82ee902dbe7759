#include "cachenet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cachenet/link.hpp"
#include "cachenet/qos.hpp"

namespace cachenet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double biased_path_loss(double bias, double dist, double alpha) {
  if (dist <= 0) return std::numeric_limits<double>::infinity();
  return bias * std::pow(dist, -alpha);
}

// Inversion sampling of Binomial(n, p); walk time is O(1 + np).
long binomial_inversion(RngStream& rng, long n, double p) {
  if (n <= 0 || p <= 0) return 0;
  if (p >= 1) return n;
  const double q_ratio = p / (1.0 - p);
  double pmf = std::pow(1.0 - p, static_cast<double>(n));
  if (pmf == 0.0) return rng.binomial(n, p);  // extreme corner, draw directly
  double cdf = pmf;
  const double u = rng.u01();
  long k = 0;
  while (u > cdf && k < n) {
    pmf *= q_ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    cdf += pmf;
    ++k;
  }
  return k;
}

struct LeanGeometry {
  std::vector<double> mm_x, mm_y, mm_dist;
  std::vector<std::uint8_t> mm_los;
  std::vector<double> mu_x, mu_y, mu_dist;
};

// Draw order: counts (mm, mu), mm positions, mm LOS marks, mu positions.
void sample_lean_geometry(const NetworkConfig& cfg, double h, RngStream& rng,
                          LeanGeometry& g) {
  const double area = 4.0 * h * h;
  const long n_m = rng.poisson(cfg.lambda_m * area);
  const long n_mu = rng.poisson(cfg.lambda_mu * area);
  g.mm_x.resize(n_m);
  g.mm_y.resize(n_m);
  g.mm_dist.resize(n_m);
  g.mm_los.resize(n_m);
  g.mu_x.resize(n_mu);
  g.mu_y.resize(n_mu);
  g.mu_dist.resize(n_mu);
  for (long i = 0; i < n_m; ++i) {
    g.mm_x[i] = rng.uniform(-h, h);
    g.mm_y[i] = rng.uniform(-h, h);
    g.mm_dist[i] = std::hypot(g.mm_x[i], g.mm_y[i]);
  }
  for (long i = 0; i < n_m; ++i) {
    g.mm_los[i] = rng.bernoulli(std::exp(-cfg.beta * g.mm_dist[i])) ? 1 : 0;
  }
  for (long i = 0; i < n_mu; ++i) {
    g.mu_x[i] = rng.uniform(-h, h);
    g.mu_y[i] = rng.uniform(-h, h);
    g.mu_dist[i] = std::hypot(g.mu_x[i], g.mu_y[i]);
  }
}

struct LeanWinner {
  Tier tier;
  bool los;
  int index;
  double dist;
};

std::optional<LeanWinner> lean_associate(const NetworkConfig& cfg, const LeanGeometry& g) {
  double best = -1.0;
  LeanWinner w{Tier::MmWave, false, -1, 0.0};
  for (std::size_t i = 0; i < g.mm_dist.size(); ++i) {
    const bool los = g.mm_los[i] != 0;
    const double pl =
        biased_path_loss(cfg.b_m, g.mm_dist[i], los ? cfg.alpha_los : cfg.alpha_nlos);
    if (pl > best) {
      best = pl;
      w = {Tier::MmWave, los, static_cast<int>(i), g.mm_dist[i]};
    }
  }
  for (std::size_t i = 0; i < g.mu_dist.size(); ++i) {
    const double pl = biased_path_loss(cfg.b_mu, g.mu_dist[i], cfg.alpha_mu);
    if (pl > best) {
      best = pl;
      w = {Tier::MuWave, false, static_cast<int>(i), g.mu_dist[i]};
    }
  }
  if (w.index < 0) return std::nullopt;
  return w;
}

// Conditioned mmWave interference/SINR sampler for one association event at
// serving distance R. Mirrors the analytic single-attempt model: the
// serving cache class of the serving state is void inside the disc of radius
// R, all other thinned processes reach the origin; per-interferer beam gains
// follow the four-level sidelobe table with ON/OFF grid alignment
// probabilities 1/nr (arrival) and 1/nt (departure).
struct MmAttemptSampler {
  double p_m;          // P_m
  double sigma2;
  double nt, nr;
  double rho_term_phi;   // factor applied to a phi-misaligned path
  double rho_term_theta; // factor applied to a theta-misaligned stream
  double p_phi, p_theta;
  double beta;
  double lambda_m;
  double alpha_los, alpha_nlos;
  long eta_los, eta_nlos;
  long u_b;            // streams per interfering BS
  double u_m;          // tagged-cell load
  bool serving_los;
  bool serving_hit;
  double serving_R;
  double p_hit_class;  // caching probability of the requested file, mm tier
  double radius;       // interference sampling radius
  double mean_count;
  double q_threshold;
  double g_serving;
  double r_alpha;
  double p_zf;

  static MmAttemptSampler make(const NetworkConfig& cfg, const TierLoad& loads,
                               AssociationEvent event, double R, double nu_i, double p_m_i) {
    if (!is_mm(event)) throw std::invalid_argument("mm attempt sampler: not a mmWave event");
    if (!(R > 0)) throw std::invalid_argument("mm attempt sampler: R must be > 0");
    MmAttemptSampler s;
    s.p_m = cfg.p_m_tx;
    s.sigma2 = cfg.sigma2_m;
    s.nt = cfg.nt_m;
    s.nr = cfg.nr_m;
    s.rho_term_phi = cfg.rho_bs;
    s.rho_term_theta = cfg.rho_ue;
    s.p_phi = 1.0 / cfg.nr_m;
    s.p_theta = 1.0 / cfg.nt_m;
    s.beta = cfg.beta;
    s.lambda_m = cfg.lambda_m;
    s.alpha_los = cfg.alpha_los;
    s.alpha_nlos = cfg.alpha_nlos;
    s.eta_los = cfg.eta_los;
    s.eta_nlos = cfg.eta_nlos;
    s.u_b = std::max(1L, std::lround(loads.u_other_m));
    s.u_m = loads.u_m;
    s.serving_los = is_los(event);
    s.serving_hit = is_hit(event);
    s.serving_R = R;
    s.p_hit_class = p_m_i;
    s.radius = std::max({3000.0, 6.0 / std::sqrt(kPi * cfg.lambda_m), 1.5 * R + 100.0});
    s.mean_count = cfg.lambda_m * kPi * s.radius * s.radius;
    const double eta_s = s.serving_los ? cfg.eta_los : cfg.eta_nlos;
    const double alpha_s = s.serving_los ? cfg.alpha_los : cfg.alpha_nlos;
    s.q_threshold = std::expm1(std::log(2.0) * nu_i * loads.u_m / cfg.w_m);
    s.g_serving = cfg.p_m_tx / loads.u_m * (cfg.nt_m * cfg.nr_m) / eta_s;
    s.r_alpha = std::pow(R, alpha_s);
    s.p_zf = std::pow(1.0 - 1.0 / cfg.nr_m, loads.u_m - 1.0);
    return s;
  }

  // Sum over streams of |sum_k X_k gamma_{k,t}|^2 for one interferer.
  double beam_power(long eta, RngStream& rng) const {
    const long pairs = eta * u_b;
    const long m_theta = binomial_inversion(rng, pairs, p_theta);
    const double rho_t2 = rho_term_theta * rho_term_theta;
    if (m_theta == 0) {
      // No departure-aligned stream: every stream sees the same composite
      // coefficient, so the Gaussian path sum collapses to one exponential.
      const long n_phi = binomial_inversion(rng, eta, p_phi);
      const double var = static_cast<double>(n_phi) +
                         rho_term_phi * rho_term_phi * static_cast<double>(eta - n_phi);
      return static_cast<double>(u_b) * rho_t2 * var * rng.exponential();
    }
    // Exact slow path: materialize per-path gains and alignment marks.
    double re[16], im[16], a[16];
    for (long k = 0; k < eta; ++k) {
      double z0, z1;
      rng.normal_pair(z0, z1);
      re[k] = z0 * 0.7071067811865476;  // CN(0,1) path amplitude
      im[k] = z1 * 0.7071067811865476;
      a[k] = rng.bernoulli(p_phi) ? 1.0 : rho_term_phi;
    }
    // m_theta distinct aligned (path, stream) pairs, uniform over the grid.
    long aligned[32];
    for (long j = 0; j < m_theta && j < 32; ++j) {
      while (true) {
        const long pick = static_cast<long>(rng.u01() * pairs);
        const long idx = std::min(pick, pairs - 1);
        bool dup = false;
        for (long q = 0; q < j; ++q) dup |= aligned[q] == idx;
        if (!dup) {
          aligned[j] = idx;
          break;
        }
      }
    }
    double base_re = 0, base_im = 0;
    for (long k = 0; k < eta; ++k) {
      base_re += re[k] * a[k];
      base_im += im[k] * a[k];
    }
    double total = 0.0;
    long streams_with_alignment = 0;
    for (long t = 0; t < u_b; ++t) {
      double s_re = rho_term_theta * base_re;
      double s_im = rho_term_theta * base_im;
      bool any = false;
      for (long j = 0; j < m_theta && j < 32; ++j) {
        if (aligned[j] % u_b != t) continue;
        const long k = aligned[j] / u_b;
        s_re += (1.0 - rho_term_theta) * re[k] * a[k];
        s_im += (1.0 - rho_term_theta) * im[k] * a[k];
        any = true;
      }
      if (any) {
        total += s_re * s_re + s_im * s_im;
        ++streams_with_alignment;
      }
    }
    total += static_cast<double>(u_b - streams_with_alignment) * rho_t2 *
             (base_re * base_re + base_im * base_im);
    return total;
  }

  double sample_interference(RngStream& rng) const {
    const long count = rng.poisson(mean_count);
    double total = 0.0;
    for (long i = 0; i < count; ++i) {
      const double r = radius * std::sqrt(rng.u01());
      const bool los = rng.bernoulli(std::exp(-beta * r));
      const bool hit = rng.bernoulli(p_hit_class);
      if (los == serving_los && hit == serving_hit && r < serving_R) continue;  // void disc
      const long eta = los ? eta_los : eta_nlos;
      const double alpha = los ? alpha_los : alpha_nlos;
      const double power_coeff =
          p_m / static_cast<double>(u_b) * (nt * nr / static_cast<double>(eta)) *
          std::pow(r, -alpha);
      total += power_coeff * beam_power(eta, rng);
    }
    return total;
  }

  MmSinrSample sample(RngStream& rng) const {
    MmSinrSample out;
    out.signal_coeff = g_serving / r_alpha;
    out.zf_active = rng.bernoulli(p_zf);
    out.signal_fade = rng.exponential();
    out.interference = sample_interference(rng);
    const double signal = out.zf_active ? out.signal_coeff * out.signal_fade : 0.0;
    out.sinr = signal / (out.interference + sigma2);
    return out;
  }

  // Success of one attempt; skips the interference draw when the ZF penalty
  // or the noise-only threshold already decides the outcome.
  bool attempt(RngStream& rng) const {
    if (!rng.bernoulli(p_zf)) return false;
    const double fade = rng.exponential();
    const double noise_need = q_threshold * sigma2 * r_alpha / g_serving;
    if (fade < noise_need) return false;
    const double interference = sample_interference(rng);
    return fade >= q_threshold * (sigma2 + interference) * r_alpha / g_serving;
  }
};

}  // namespace

double default_window_half(const NetworkConfig& cfg) {
  return 5.0 / std::sqrt(kPi * cfg.lambda_mu);
}

Realization sample_realization(const NetworkConfig& cfg, const CacheProfile& profile,
                               double window_half, std::uint64_t seed) {
  if (!(window_half > 0)) throw std::invalid_argument("sample_realization: window_half > 0");
  if (profile.p_m.size() != cfg.f_count) {
    throw std::invalid_argument("sample_realization: profile length mismatch");
  }
  RngStream rng(seed);
  LeanGeometry g;
  sample_lean_geometry(cfg, window_half, rng, g);

  Realization r;
  r.window_half = window_half;
  const long n_m = static_cast<long>(g.mm_dist.size());
  const long n_mu = static_cast<long>(g.mu_dist.size());
  r.mm_xy.resize(n_m, 2);
  r.mm_dist.resize(n_m);
  r.mm_los.assign(g.mm_los.begin(), g.mm_los.end());
  for (long i = 0; i < n_m; ++i) {
    r.mm_xy(i, 0) = g.mm_x[i];
    r.mm_xy(i, 1) = g.mm_y[i];
    r.mm_dist[i] = g.mm_dist[i];
  }
  r.mm_cache.resize(static_cast<std::size_t>(n_m) * cfg.f_count);
  for (long b = 0; b < n_m; ++b) {
    for (int f = 0; f < cfg.f_count; ++f) {
      r.mm_cache[b * cfg.f_count + f] = rng.bernoulli(profile.p_m[f]) ? 1 : 0;
    }
  }
  r.mu_xy.resize(n_mu, 2);
  r.mu_dist.resize(n_mu);
  for (long i = 0; i < n_mu; ++i) {
    r.mu_xy(i, 0) = g.mu_x[i];
    r.mu_xy(i, 1) = g.mu_y[i];
    r.mu_dist[i] = g.mu_dist[i];
  }
  r.mu_cache.resize(static_cast<std::size_t>(n_mu) * cfg.f_count);
  for (long b = 0; b < n_mu; ++b) {
    for (int f = 0; f < cfg.f_count; ++f) {
      r.mu_cache[b * cfg.f_count + f] = rng.bernoulli(profile.p_mu[f]) ? 1 : 0;
    }
  }
  return r;
}

std::optional<AssociationOutcome> associate(const Realization& realization,
                                            const NetworkConfig& cfg, int file_index) {
  if (file_index < 0 || file_index >= cfg.f_count) {
    throw std::invalid_argument("associate: file_index out of range");
  }
  double best = -1.0;
  AssociationOutcome out;
  out.bs_index = -1;
  for (Eigen::Index i = 0; i < realization.mm_dist.size(); ++i) {
    const bool los = realization.mm_los[static_cast<std::size_t>(i)] != 0;
    const double pl = biased_path_loss(cfg.b_m, realization.mm_dist[i],
                                       los ? cfg.alpha_los : cfg.alpha_nlos);
    if (pl > best) {
      best = pl;
      out.tier = Tier::MmWave;
      out.los = los;
      out.bs_index = static_cast<int>(i);
      out.distance = realization.mm_dist[i];
    }
  }
  for (Eigen::Index i = 0; i < realization.mu_dist.size(); ++i) {
    const double pl = biased_path_loss(cfg.b_mu, realization.mu_dist[i], cfg.alpha_mu);
    if (pl > best) {
      best = pl;
      out.tier = Tier::MuWave;
      out.los = false;
      out.bs_index = static_cast<int>(i);
      out.distance = realization.mu_dist[i];
    }
  }
  if (out.bs_index < 0) return std::nullopt;

  const bool hit = out.tier == Tier::MmWave
                       ? realization.mm_cache[static_cast<std::size_t>(out.bs_index) *
                                                  cfg.f_count +
                                              file_index] != 0
                       : realization.mu_cache[static_cast<std::size_t>(out.bs_index) *
                                                  cfg.f_count +
                                              file_index] != 0;
  if (out.tier == Tier::MmWave) {
    out.event = hit ? (out.los ? AssociationEvent::MmHitLos : AssociationEvent::MmHitNlos)
                    : (out.los ? AssociationEvent::MmMissLos : AssociationEvent::MmMissNlos);
  } else {
    out.event = hit ? AssociationEvent::MuHit : AssociationEvent::MuMiss;
  }
  return out;
}

MmSinrSample mm_sinr_sample(const NetworkConfig& cfg, const TierLoad& loads,
                            AssociationEvent event, double r, double p_m_i, RngStream& rng) {
  const auto sampler = MmAttemptSampler::make(cfg, loads, event, r, cfg.nu[0], p_m_i);
  return sampler.sample(rng);
}

MuRateSample mu_rate_sample(const NetworkConfig& cfg, const TierLoad& loads, bool hit,
                            double r, double p_mu_i, RngStream& rng) {
  MuRateSample out;
  out.serving_gain = rng.gamma(cfg.nt_mu - loads.u_mu + 1.0);
  out.rate = mu_mean_rate(hit, std::max(r, 1.0), cfg, loads, p_mu_i);
  return out;
}

FrequencyEstimate mm_conditional_success_frequency(const NetworkConfig& cfg,
                                                   const TierLoad& loads,
                                                   AssociationEvent event, double R,
                                                   double nu_i, double p_m_i, long drops,
                                                   std::uint64_t seed) {
  if (drops < 1) throw std::invalid_argument("mm_conditional_success_frequency: drops >= 1");
  const auto sampler = MmAttemptSampler::make(cfg, loads, event, R, nu_i, p_m_i);
  long successes = 0;
  for (long d = 0; d < drops; ++d) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(d));
    if (sampler.attempt(rng)) ++successes;
  }
  FrequencyEstimate est;
  est.n = drops;
  est.mean = static_cast<double>(successes) / drops;
  est.std_error = std::sqrt(std::max(est.mean * (1.0 - est.mean), 1e-12) / drops);
  return est;
}

namespace {

struct ChunkAccumulator {
  long delivered = 0;
  long resampled = 0;
  double delay_sum = 0, delay_sq = 0;
  double backhaul_sum = 0, backhaul_sq = 0;
  std::array<long, 6> event_counts{};
};

struct TrialPlan {
  const NetworkConfig& cfg;
  const CacheProfile& profile;
  std::vector<double> pop_cdf;
  TierLoad loads;
  double window_half;
  double p_hit_m, p_hit_mu;
  long u_int_m, u_int_mu;
  std::vector<long> n_b;        // per file
  std::vector<double> t0_hit;   // per file, access only
  std::vector<double> t0_miss_m, t0_miss_mu;
  int n_retx;
};

void run_one_trial(const TrialPlan& plan, std::uint64_t seed, long trial,
                   ChunkAccumulator& acc, std::vector<TrialRecord>* dump) {
  const NetworkConfig& cfg = plan.cfg;
  RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(trial));

  const double u = rng.u01();
  const int file = static_cast<int>(
      std::lower_bound(plan.pop_cdf.begin(), plan.pop_cdf.end(), u) - plan.pop_cdf.begin());
  const int f = std::min(file, cfg.f_count - 1);

  thread_local LeanGeometry geometry;
  std::optional<LeanWinner> winner;
  for (int tries = 0; tries < 1000; ++tries) {
    sample_lean_geometry(cfg, plan.window_half, rng, geometry);
    winner = lean_associate(cfg, geometry);
    if (winner) break;
    ++acc.resampled;
  }
  if (!winner) throw std::runtime_error("run_trials: window persistently empty");

  // The winner's cache bit is independent of the geometry, so it can be
  // drawn after association instead of materializing the whole cache matrix.
  const double p_class =
      winner->tier == Tier::MmWave ? plan.profile.p_m[f] : plan.profile.p_mu[f];
  const bool hit = rng.bernoulli(p_class);

  AssociationEvent event;
  if (winner->tier == Tier::MmWave) {
    event = hit ? (winner->los ? AssociationEvent::MmHitLos : AssociationEvent::MmHitNlos)
                : (winner->los ? AssociationEvent::MmMissLos : AssociationEvent::MmMissNlos);
  } else {
    event = hit ? AssociationEvent::MuHit : AssociationEvent::MuMiss;
  }

  const double nu_i = cfg.nu[f];
  const Tier tier = winner->tier;
  const long u_int = tier == Tier::MmWave ? plan.u_int_m : plan.u_int_mu;
  const double p_hit_tier = tier == Tier::MmWave ? plan.p_hit_m : plan.p_hit_mu;
  const long n_b = plan.n_b[f];

  bool mu_access_ok = false;
  std::optional<MmAttemptSampler> mm;
  if (tier == Tier::MuWave) {
    const double rate =
        mu_mean_rate(hit, std::max(winner->dist, 1.0), cfg, plan.loads, plan.profile.p_mu[f]);
    mu_access_ok = rate >= nu_i;
  } else {
    mm = MmAttemptSampler::make(cfg, plan.loads, event, winner->dist, nu_i,
                                plan.profile.p_m[f]);
  }

  bool delivered = false;
  int attempts = 0;
  for (int a = 0; a < plan.n_retx && !delivered; ++a) {
    ++attempts;
    const bool access_ok = tier == Tier::MuWave ? mu_access_ok : mm->attempt(rng);
    bool admit_ok = true;
    if (!hit) {
      // Backhaul admission: the typical user competes with the cell's other
      // cache-miss users for the N_b backhaul shares.
      const long miss_users = binomial_inversion(rng, u_int - 1, 1.0 - p_hit_tier);
      const double p_admit =
          std::min(1.0, static_cast<double>(n_b) / static_cast<double>(miss_users + 1));
      admit_ok = rng.bernoulli(p_admit);
    }
    delivered = access_ok && admit_ok;
  }

  const double t0 = hit ? plan.t0_hit[f]
                        : (tier == Tier::MmWave ? plan.t0_miss_m[f] : plan.t0_miss_mu[f]);
  const double delay = attempts * t0;
  const double backhaul = hit ? 0.0 : nu_i;

  acc.delivered += delivered ? 1 : 0;
  acc.delay_sum += delay;
  acc.delay_sq += delay * delay;
  acc.backhaul_sum += backhaul;
  acc.backhaul_sq += backhaul * backhaul;
  acc.event_counts[static_cast<int>(event)] += 1;

  if (dump) {
    TrialRecord rec;
    rec.trial_seed = seed;
    rec.file = f;
    rec.event = event;
    rec.distance = winner->dist;
    rec.attempts = attempts;
    rec.delivered = delivered;
    rec.delay = delay;
    (*dump)[static_cast<std::size_t>(trial)] = rec;
  }
}

}  // namespace

SimReport run_trials(const NetworkConfig& cfg, const Popularity& popularity,
                     const CacheProfile& profile, long trials, std::uint64_t seed,
                     int workers, std::vector<TrialRecord>* dump) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (popularity.f.size() != cfg.f_count || profile.p_m.size() != cfg.f_count) {
    throw std::invalid_argument("run_trials: popularity/profile length mismatch");
  }

  TrialPlan plan{cfg, profile, {}, {}, 0, 0, 0, 0, 0, {}, {}, {}, {}, cfg.n_retx};
  plan.window_half = default_window_half(cfg);
  const GeometricAssociation geom(cfg);
  plan.loads = tier_loads(cfg, association_probabilities(geom, 0.5, 0.5));
  plan.pop_cdf.resize(cfg.f_count);
  double cum = 0;
  for (int i = 0; i < cfg.f_count; ++i) {
    cum += popularity.f[i];
    plan.pop_cdf[i] = cum;
  }
  plan.pop_cdf.back() = 1.0;
  plan.p_hit_m = (popularity.f * profile.p_m).sum();
  plan.p_hit_mu = (popularity.f * profile.p_mu).sum();
  plan.u_int_m = std::max(1L, std::lround(plan.loads.u_m));
  plan.u_int_mu = std::max(1L, std::lround(plan.loads.u_mu));
  const double capacity = backhaul_capacity(cfg);
  plan.n_b.resize(cfg.f_count);
  plan.t0_hit.resize(cfg.f_count);
  plan.t0_miss_m.resize(cfg.f_count);
  plan.t0_miss_mu.resize(cfg.f_count);
  for (int i = 0; i < cfg.f_count; ++i) {
    plan.n_b[i] = static_cast<long>(std::floor(capacity / cfg.nu[i] + 1e-9));
    plan.t0_hit[i] = cfg.s_file / cfg.nu[i];
    plan.t0_miss_m[i] = plan.t0_hit[i] + backhaul_delay(Tier::MmWave, cfg, cfg.nu[i]);
    plan.t0_miss_mu[i] = plan.t0_hit[i] + backhaul_delay(Tier::MuWave, cfg, cfg.nu[i]);
  }

  if (dump) dump->assign(static_cast<std::size_t>(trials), TrialRecord{});

  constexpr long kChunk = 512;
  const long n_chunks = (trials + kChunk - 1) / kChunk;
  std::vector<ChunkAccumulator> chunks(static_cast<std::size_t>(n_chunks));

  long n_workers =
      workers > 0 ? workers : static_cast<long>(std::thread::hardware_concurrency());
  n_workers = std::max(1L, std::min(n_workers, n_chunks));

  std::atomic<long> next_chunk{0};
  auto worker = [&]() {
    while (true) {
      const long c = next_chunk.fetch_add(1);
      if (c >= n_chunks) break;
      ChunkAccumulator acc;
      const long begin = c * kChunk;
      const long end = std::min(trials, begin + kChunk);
      for (long t = begin; t < end; ++t) run_one_trial(plan, seed, t, acc, dump);
      chunks[static_cast<std::size_t>(c)] = acc;
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Fixed-order merge keeps the report byte-identical across worker counts.
  ChunkAccumulator total;
  for (const auto& c : chunks) {
    total.delivered += c.delivered;
    total.resampled += c.resampled;
    total.delay_sum += c.delay_sum;
    total.delay_sq += c.delay_sq;
    total.backhaul_sum += c.backhaul_sum;
    total.backhaul_sq += c.backhaul_sq;
    for (int e = 0; e < 6; ++e) total.event_counts[e] += c.event_counts[e];
  }

  SimReport report;
  report.trials = trials;
  report.delivered = total.delivered;
  report.resampled = total.resampled;
  report.event_counts = total.event_counts;
  const double n = static_cast<double>(trials);
  report.asp = total.delivered / n;
  const double asp_se = std::sqrt(std::max(report.asp * (1.0 - report.asp), 0.0) / n);
  report.asp_ci_lo = report.asp - 1.96 * asp_se;
  report.asp_ci_hi = report.asp + 1.96 * asp_se;
  report.latency_mean = total.delay_sum / n;
  const double delay_var =
      std::max(0.0, (total.delay_sq - total.delay_sum * total.delay_sum / n) / std::max(1.0, n - 1));
  const double delay_se = std::sqrt(delay_var / n);
  report.latency_ci_lo = report.latency_mean - 1.96 * delay_se;
  report.latency_ci_hi = report.latency_mean + 1.96 * delay_se;
  const double bh_mean = total.backhaul_sum / n;
  const double bh_var =
      std::max(0.0, (total.backhaul_sq - total.backhaul_sum * total.backhaul_sum / n) /
                        std::max(1.0, n - 1));
  const double bh_se = std::sqrt(bh_var / n);
  report.backhaul_load = cfg.lambda_u * bh_mean;
  report.backhaul_ci_lo = cfg.lambda_u * (bh_mean - 1.96 * bh_se);
  report.backhaul_ci_hi = cfg.lambda_u * (bh_mean + 1.96 * bh_se);
  return report;
}

}  // namespace cachenet
