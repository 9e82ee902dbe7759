#include "cachenet/qos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cachenet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fields that the cached geometry and ASP tables depend on.
bool same_link_geometry(const NetworkConfig& a, const NetworkConfig& b) {
  return a.lambda_mu == b.lambda_mu && a.lambda_m == b.lambda_m && a.lambda_u == b.lambda_u &&
         a.p_mu_tx == b.p_mu_tx && a.p_m_tx == b.p_m_tx && a.nt_mu == b.nt_mu &&
         a.nt_m == b.nt_m && a.nr_m == b.nr_m && a.n_rf == b.n_rf && a.w_mu == b.w_mu &&
         a.w_m == b.w_m && a.beta == b.beta && a.alpha_los == b.alpha_los &&
         a.alpha_nlos == b.alpha_nlos && a.alpha_mu == b.alpha_mu && a.b_mu == b.b_mu &&
         a.b_m == b.b_m && a.rho_ue == b.rho_ue && a.rho_bs == b.rho_bs &&
         a.eta_los == b.eta_los && a.eta_nlos == b.eta_nlos && a.sigma2_m == b.sigma2_m &&
         a.sigma2_mu == b.sigma2_mu;
}

}  // namespace

double retx_success(double p_single, int n_attempts) {
  if (n_attempts < 1) throw std::invalid_argument("retx_success: N must be >= 1");
  const double p = std::clamp(p_single, 0.0, 1.0);
  return -std::expm1(n_attempts * std::log1p(-p));
}

double expected_attempts(double p_single, int n_attempts) {
  if (n_attempts < 1) throw std::invalid_argument("expected_attempts: N must be >= 1");
  const double p = std::clamp(p_single, 0.0, 1.0);
  if (n_attempts <= 64) {
    double q = 1.0, sum = 0.0;
    for (int k = 0; k < n_attempts; ++k) {
      sum += q;
      q *= 1.0 - p;
    }
    return sum;
  }
  if (p < 1e-12) return n_attempts;
  return retx_success(p, n_attempts) / p;
}

double t0_access(double mean_rate, double s_file) {
  if (!(s_file > 0)) throw std::invalid_argument("t0_access: s_file must be > 0");
  if (!(mean_rate > 0)) return kInf;  // infinite-delay marker
  return s_file / mean_rate;
}

double backhaul_delay(Tier tier, const NetworkConfig& cfg, double nu_i) {
  if (!(cfg.lambda_g > 0)) throw std::invalid_argument("backhaul_delay: lambda_g must be > 0");
  if (!(cfg.relay_r > 0)) throw std::invalid_argument("backhaul_delay: relay_r must be > 0");
  if (!(nu_i > 0)) throw std::invalid_argument("backhaul_delay: nu_i must be > 0");
  const double lambda_j = tier == Tier::MmWave ? cfg.lambda_m : cfg.lambda_mu;
  const double hops = lambda_j / cfg.lambda_g * cfg.k1 +
                      (1.0 / (cfg.relay_r * std::sqrt(2.0 * cfg.lambda_g)) - 1.0) * cfg.k2;
  return cfg.s_file / nu_i + hops * (cfg.a_proc + cfg.s_file * cfg.omega_proc);
}

double backhaul_load_density(const NetworkConfig& cfg, const Popularity& popularity,
                             const CacheProfile& profile, double p_am) {
  if (popularity.f.size() != cfg.f_count || profile.p_m.size() != cfg.f_count) {
    throw std::invalid_argument("backhaul_load_density: length mismatch");
  }
  double load = 0.0;
  for (int i = 0; i < cfg.f_count; ++i) {
    load += popularity.f[i] * cfg.nu[i] * cfg.lambda_u *
            ((1.0 - profile.p_m[i]) * p_am + (1.0 - profile.p_mu[i]) * (1.0 - p_am));
  }
  return load;
}

AnalyticEngine::AnalyticEngine(const NetworkConfig& cfg, QuadratureSpec spec) : spec_(spec) {
  rebuild(cfg);
}

void AnalyticEngine::rebuild(const NetworkConfig& cfg) {
  base_ = cfg;
  geom_ = std::make_unique<GeometricAssociation>(cfg, spec_);
  loads_ = tier_loads(cfg, association_probabilities(*geom_, 0.5, 0.5));
  mm_tables_.clear();
  mu_cache_.clear();
}

double AnalyticEngine::Table::eval(double r) const {
  const double lr = std::log(std::max(r, 1e-300));
  if (lr <= log_r.front()) return value.front();
  if (lr >= log_r.back()) return value.back();
  const auto it = std::upper_bound(log_r.begin(), log_r.end(), lr);
  const std::size_t j = static_cast<std::size_t>(it - log_r.begin());
  const double w = (lr - log_r[j - 1]) / (log_r[j] - log_r[j - 1]);
  return value[j - 1] * (1.0 - w) + value[j] * w;
}

const AnalyticEngine::Table& AnalyticEngine::mm_table(AssociationEvent event, double nu_i,
                                                      double p_m_i, BoundSide side) {
  const auto key = std::make_tuple(static_cast<int>(event), nu_i, p_m_i,
                                   static_cast<int>(side));
  auto it = mm_tables_.find(key);
  if (it != mm_tables_.end()) return it->second;

  const double r_hi =
      is_los(event) ? geom_->support_radius_mm_los() : geom_->support_radius_mm_nlos();
  const double r_lo = std::max(r_hi * 1e-5, 1e-3);
  constexpr int kPoints = 384;
  Table table;
  table.log_r.resize(kPoints);
  table.value.resize(kPoints);
  const double l0 = std::log(r_lo), l1 = std::log(r_hi);
  for (int i = 0; i < kPoints; ++i) {
    const double lr = l0 + (l1 - l0) * i / (kPoints - 1);
    table.log_r[i] = lr;
    table.value[i] =
        mm_conditional_asp(event, std::exp(lr), nu_i, base_, loads_, p_m_i, side, spec_);
  }
  return mm_tables_.emplace(key, std::move(table)).first->second;
}

double AnalyticEngine::mm_single_attempt(AssociationEvent event, double R, double nu_i,
                                         double p_m_i, BoundSide side) {
  return mm_table(event, nu_i, p_m_i, side).eval(R);
}

double AnalyticEngine::mu_single_attempt(bool hit, double nu_i, double p_mu_i,
                                         BoundSide side) {
  const auto key = std::make_tuple(hit ? 1 : 0, nu_i, p_mu_i, static_cast<int>(side));
  auto it = mu_cache_.find(key);
  if (it != mu_cache_.end()) return it->second;
  const double value =
      mu_conditional_asp(hit, nu_i, *geom_, loads_, p_mu_i, side, spec_);
  mu_cache_.emplace(key, value);
  return value;
}

QosReport AnalyticEngine::evaluate(const NetworkConfig& cfg, const Popularity& popularity,
                                   const CacheProfile& profile, BoundSide side) {
  if (!same_link_geometry(cfg, base_)) rebuild(cfg);
  if (popularity.f.size() != cfg.f_count || profile.p_m.size() != cfg.f_count) {
    throw std::invalid_argument("analytic evaluate: popularity/profile length mismatch");
  }
  const int n = cfg.n_retx;
  if (n < 1) throw std::invalid_argument("analytic evaluate: n_retx must be >= 1");

  QosReport report;
  report.side = side;

  const double p_hit_m = (popularity.f * profile.p_m).sum();
  const double p_hit_mu = (popularity.f * profile.p_mu).sum();

  // Outer quadrature tolerance; the integrands ride on interpolation tables,
  // so there is no point in pushing far below the table accuracy.
  QuadratureSpec outer = spec_;
  outer.rel_tol = std::max(outer.rel_tol, 1e-7);
  outer.abs_tol = std::max(outer.abs_tol, 1e-11);

  // Per-distinct (p_m, p_mu, nu) event metrics, reused across files.
  struct EventMetrics {
    std::array<double, 6> asp{};
    std::array<double, 6> attempts{};
  };
  std::map<std::tuple<double, double, double>, EventMetrics> dedup;

  double asp_total = 0.0;
  double latency_total = 0.0;
  std::array<double, 6> weight_total{};
  std::array<double, 6> asp_weighted{};

  for (int i = 0; i < cfg.f_count; ++i) {
    const double p_m_i = profile.p_m[i];
    const double p_mu_i = profile.p_mu[i];
    const double nu_i = cfg.nu[i];
    const auto key = std::make_tuple(p_m_i, p_mu_i, nu_i);

    auto found = dedup.find(key);
    if (found == dedup.end()) {
      EventMetrics metrics;
      const double pb_m = backhaul_asp(Tier::MmWave, nu_i, cfg, loads_, p_hit_m);
      const double pb_mu = backhaul_asp(Tier::MuWave, nu_i, cfg, loads_, p_hit_mu);

      for (const AssociationEvent event : kAllEvents) {
        const int e = static_cast<int>(event);
        if (!is_mm(event)) {
          const double single = mu_single_attempt(is_hit(event), nu_i, p_mu_i, side);
          const double p_eff = is_hit(event) ? single : single * pb_mu;
          metrics.asp[e] = retx_success(p_eff, n);
          metrics.attempts[e] = expected_attempts(p_eff, n);
          continue;
        }
        const double weight = (is_hit(event) ? p_m_i : 1.0 - p_m_i);
        if (weight <= 0.0) continue;  // degenerate event, weighted out below
        const Table& table = mm_table(event, nu_i, p_m_i, side);
        const double backhaul = is_hit(event) ? 1.0 : pb_m;
        const double r_hi =
            is_los(event) ? geom_->support_radius_mm_los() : geom_->support_radius_mm_nlos();
        const double prob =
            is_los(event) ? geom_->prob_mm_los() : geom_->prob_mm_nlos();
        auto kernel = [this, event](double r) {
          return is_los(event) ? geom_->kernel_mm_los(r) : geom_->kernel_mm_nlos(r);
        };
        const double succ =
            integrate(
                [&](double r) {
                  const double p_eff = std::clamp(table.eval(r) * backhaul, 0.0, 1.0);
                  return retx_success(p_eff, n) * kernel(r);
                },
                0.0, r_hi, outer)
                .value;
        const double att =
            integrate(
                [&](double r) {
                  const double p_eff = std::clamp(table.eval(r) * backhaul, 0.0, 1.0);
                  return expected_attempts(p_eff, n) * kernel(r);
                },
                0.0, r_hi, outer)
                .value;
        metrics.asp[e] = std::clamp(succ / prob, 0.0, 1.0);
        metrics.attempts[e] = std::clamp(att / prob, 1.0, static_cast<double>(n));
      }
      found = dedup.emplace(key, metrics).first;
    }

    const EventMetrics& metrics = found->second;
    const auto assoc = association_probabilities(*geom_, p_m_i, p_mu_i);
    const double f_i = popularity.f[i];
    for (const AssociationEvent event : kAllEvents) {
      const int e = static_cast<int>(event);
      const double w = assoc[event];
      if (w <= 0.0) continue;
      const bool miss = !is_hit(event);
      const Tier tier = is_mm(event) ? Tier::MmWave : Tier::MuWave;
      const double t0 = cfg.s_file / nu_i + (miss ? backhaul_delay(tier, cfg, nu_i) : 0.0);
      asp_total += f_i * w * metrics.asp[e];
      latency_total += f_i * w * metrics.attempts[e] * t0;
      weight_total[e] += f_i * w;
      asp_weighted[e] += f_i * w * metrics.asp[e];
    }
  }

  report.asp_retx = asp_total;
  report.latency_mean = latency_total;
  report.backhaul_load = backhaul_load_density(cfg, popularity, profile, geom_->p_am());
  report.event_weight = weight_total;
  for (int e = 0; e < 6; ++e) {
    report.event_asp[e] = weight_total[e] > 0 ? asp_weighted[e] / weight_total[e] : 0.0;
  }
  return report;
}

double retransmission_asp(const NetworkConfig& cfg, const Popularity& popularity,
                          const CacheProfile& profile, BoundSide side) {
  AnalyticEngine engine(cfg);
  return engine.evaluate(cfg, popularity, profile, side).asp_retx;
}

double average_latency(const NetworkConfig& cfg, const Popularity& popularity,
                       const CacheProfile& profile, BoundSide side) {
  AnalyticEngine engine(cfg);
  return engine.evaluate(cfg, popularity, profile, side).latency_mean;
}

QosReport analytic_qos(const NetworkConfig& cfg, const Popularity& popularity,
                       const CacheProfile& profile, BoundSide side) {
  AnalyticEngine engine(cfg);
  return engine.evaluate(cfg, popularity, profile, side);
}

}  // namespace cachenet
