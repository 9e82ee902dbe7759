#include "cachenet/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cachenet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();

// One minus the per-interferer Laplace factor, 1 - (1 + c r^-alpha)^-eta.
double one_minus_laplace(double c, double alpha, double eta, double r) {
  if (r <= 0) return 1.0;
  const double x = c * std::pow(r, -alpha);
  if (x == 0.0) return 0.0;
  if (!std::isfinite(x)) return 1.0;
  return -std::expm1(-eta * std::log1p(x));
}

// int_a^b [1 - (1 + c r^-alpha)^-eta] 2 pi lambda r dr, b possibly infinite.
// The tail beyond the saturation radius c^{1/alpha} is integrated in u = 1/r,
// which turns the r^{1-alpha} decay into a bounded integrand; requires
// alpha > 2 for convergence, which holds for NLOS by config validation. The
// divergent alpha <= 2 case (fully LOS interference field) returns +inf,
// driving the success probability to zero.
double power_exponent(double c, double alpha, double eta, double lambda, double a, double b,
                      const QuadratureSpec& spec) {
  if (c <= 0) return 0.0;
  const double scale = 2.0 * kPi * lambda;
  if (std::isfinite(b)) {
    if (b <= a) return 0.0;
    return scale * integrate(
                       [&](double r) { return one_minus_laplace(c, alpha, eta, r) * r; }, a, b,
                       spec)
                       .value;
  }
  if (alpha <= 2.0) return kInf;
  const double r_split = std::max(a, std::pow(c, 1.0 / alpha));
  double head = 0.0;
  if (r_split > a) {
    head = integrate([&](double r) { return one_minus_laplace(c, alpha, eta, r) * r; }, a,
                     r_split, spec)
               .value;
  }
  const double tail = integrate(
                          [&](double u) {
                            if (u <= 0) return 0.0;
                            const double w = one_minus_laplace(c, alpha, eta, 1.0 / u);
                            if (w == 0.0) return 0.0;
                            return w / (u * u * u);
                          },
                          0.0, 1.0 / r_split, spec)
                          .value;
  return scale * (head + tail);
}

// Same integral with an extra e^{-beta r} weight (beta > 0).
double exp_weighted_exponent(double c, double alpha, double eta, double beta, double lambda,
                             double a, double b, const QuadratureSpec& spec) {
  if (c <= 0 || beta <= 0) return 0.0;
  const double hi = std::isfinite(b) ? b : std::max(a, 0.0) + 80.0 / beta;
  if (hi <= a) return 0.0;
  return 2.0 * kPi * lambda *
         integrate(
             [&](double r) {
               return one_minus_laplace(c, alpha, eta, r) * r * std::exp(-beta * r);
             },
             a, hi, spec)
             .value;
}

// PGFL exponent of one thinned interferer state over [a, b]:
// int [1 - (1 + c r^-alpha)^-eta] 2 pi lambda_m p_state(r) r dr.
double state_exponent(bool los, double c, double alpha, double eta, const NetworkConfig& cfg,
                      double a, double b, const QuadratureSpec& spec) {
  if (c <= 0) return 0.0;
  if (los) {
    if (cfg.beta == 0.0) return power_exponent(c, alpha, eta, cfg.lambda_m, a, b, spec);
    return exp_weighted_exponent(c, alpha, eta, cfg.beta, cfg.lambda_m, a, b, spec);
  }
  if (cfg.beta == 0.0) return 0.0;  // no NLOS links without blockage
  if (std::isfinite(b)) {
    if (b <= a) return 0.0;
    return 2.0 * kPi * cfg.lambda_m *
           integrate(
               [&](double r) {
                 return one_minus_laplace(c, alpha, eta, r) * r * (-std::expm1(-cfg.beta * r));
               },
               a, b, spec)
               .value;
  }
  const double full = power_exponent(c, alpha, eta, cfg.lambda_m, a, b, spec);
  if (!std::isfinite(full)) return full;
  return full - exp_weighted_exponent(c, alpha, eta, cfg.beta, cfg.lambda_m, a, b, spec);
}

double sinr_threshold(double nu_i, double users, double bandwidth) {
  return std::expm1(std::log(2.0) * nu_i * users / bandwidth);
}

double zf_penalty(const NetworkConfig& cfg, const TierLoad& loads) {
  return std::pow(1.0 - 1.0 / cfg.nr_m, loads.u_m - 1.0);
}

}  // namespace

const char* to_string(BoundSide side) { return side == BoundSide::Lower ? "lower" : "upper"; }

double mm_conditional_asp(AssociationEvent event, double R, double nu_i,
                          const NetworkConfig& cfg, const TierLoad& loads, double p_m_i,
                          BoundSide side, const QuadratureSpec& spec) {
  if (!is_mm(event)) throw std::invalid_argument("mm_conditional_asp: not a mmWave event");
  if (!(R > 0)) throw std::invalid_argument("mm_conditional_asp: R must be > 0");
  if (loads.u_m < 1) throw std::invalid_argument("mm_conditional_asp: u_m must be >= 1");
  if (nu_i < 0) throw std::invalid_argument("mm_conditional_asp: nu_i must be >= 0");
  if (p_m_i < 0 || p_m_i > 1) throw std::invalid_argument("mm_conditional_asp: p_m_i in [0,1]");

  const bool los = is_los(event);
  const double alpha_s = los ? cfg.alpha_los : cfg.alpha_nlos;
  const double alpha_x = los ? cfg.alpha_nlos : cfg.alpha_los;
  const double eta_s = los ? cfg.eta_los : cfg.eta_nlos;
  const double eta_x = los ? cfg.eta_nlos : cfg.eta_los;

  const double q = sinr_threshold(nu_i, loads.u_m, cfg.w_m);
  const double gain = cfg.p_m_tx / loads.u_m * (cfg.nt_m * cfg.nr_m) / eta_s;
  const double t = q * std::pow(R, alpha_s) / gain;  // = -s_lap

  const double kappa =
      side == BoundSide::Upper ? std::pow(cfg.rho_bs * cfg.rho_ue, 2.0) : 1.0;
  const double eta_eff_s = side == BoundSide::Upper ? 1.0 : eta_s;
  const double eta_eff_x = side == BoundSide::Upper ? 1.0 : eta_x;
  const double c = t * cfg.p_m_tx * cfg.nt_m * cfg.nr_m * kappa;

  double exponent = 0.0;
  if (is_hit(event)) {
    // Only the same-state hit-thinned process is void inside the serving disc.
    exponent += p_m_i * state_exponent(los, c, alpha_s, eta_eff_s, cfg, R, kInf, spec);
    exponent +=
        (1.0 - p_m_i) * state_exponent(los, c, alpha_s, eta_eff_s, cfg, 0.0, kInf, spec);
  } else {
    exponent += p_m_i * state_exponent(los, c, alpha_s, eta_eff_s, cfg, 0.0, R, spec);
    exponent += state_exponent(los, c, alpha_s, eta_eff_s, cfg, R, kInf, spec);
  }
  exponent += state_exponent(!los, c, alpha_x, eta_eff_x, cfg, 0.0, kInf, spec);

  const double noise_exponent = t * cfg.sigma2_m;
  const double value = zf_penalty(cfg, loads) * std::exp(-noise_exponent - exponent);
  return std::clamp(value, 0.0, 1.0);
}

double mu_mean_rate(bool hit, double r, const NetworkConfig& cfg, const TierLoad& loads,
                    double p_mu_i) {
  if (!(r >= 1.0)) throw std::invalid_argument("mu_mean_rate: r must be >= 1");
  if (loads.u_mu < 1) throw std::invalid_argument("mu_mean_rate: u_mu must be >= 1");
  if (cfg.nt_mu < loads.u_mu) throw std::invalid_argument("mu_mean_rate: nt_mu < u_mu");

  const double users = loads.u_mu;
  const double shape = cfg.nt_mu - users + 1.0;  // serving gain ~ Gamma(shape, 1)
  const double c1 =
      cfg.p_mu_tx / users * std::exp(2.0 * (std::lgamma(shape + 0.5) - std::lgamma(shape)));
  const double c2 = cfg.p_mu_tx / users * shape - c1;
  const double campbell = cfg.p_mu_tx * 2.0 * kPi * cfg.lambda_mu / (cfg.alpha_mu - 2.0);
  const double c3_serving = campbell * (hit ? p_mu_i : 1.0 - p_mu_i);
  const double c3_constant = campbell * (hit ? 1.0 - p_mu_i : p_mu_i);

  const double ra = std::pow(r, -cfg.alpha_mu);
  const double sinr =
      c1 * ra / (c2 * ra + c3_serving * std::pow(r, 2.0 - cfg.alpha_mu) + c3_constant +
                 cfg.sigma2_mu);
  return cfg.w_mu / users * std::log2(1.0 + sinr);
}

double mu_critical_radius(bool hit, double nu_i, const NetworkConfig& cfg,
                          const TierLoad& loads, double p_mu_i, const QuadratureSpec& spec) {
  if (!(nu_i >= 0)) throw std::invalid_argument("mu_critical_radius: nu_i must be >= 0");
  const double hi = spec.truncation_radius;
  if (mu_mean_rate(hit, 1.0, cfg, loads, p_mu_i) < nu_i) return 0.0;
  if (mu_mean_rate(hit, hi, cfg, loads, p_mu_i) >= nu_i) return kInf;
  // The mean rate is monotone decreasing in r, so the bracket is valid.
  return find_root_bisect(
      [&](double r) { return mu_mean_rate(hit, r, cfg, loads, p_mu_i) - nu_i; }, 1.0, hi,
      1e-6);
}

double mu_conditional_asp(bool hit, double nu_i, const GeometricAssociation& geom,
                          const TierLoad& loads, double p_mu_i, BoundSide side,
                          const QuadratureSpec& spec) {
  const NetworkConfig& cfg = geom.config();
  const double r_star = mu_critical_radius(hit, nu_i, cfg, loads, p_mu_i, spec);
  if (r_star == 0.0) return 0.0;
  double limit;
  if (std::isinf(r_star)) {
    limit = std::max(geom.support_radius_mu(), 2.0);
  } else {
    // Epsilon guard so that a floating-point r_star sitting on an integer is
    // not knocked down a whole metre.
    limit = side == BoundSide::Lower ? std::floor(r_star + 1e-9) : std::ceil(r_star - 1e-9);
    limit = std::min(limit, geom.support_radius_mu());
  }
  if (limit <= 1.0) return 0.0;
  const double mass =
      integrate([&geom](double r) { return geom.kernel_mu(r); }, 1.0, limit, spec).value;
  return std::clamp(mass / geom.prob_mu(), 0.0, 1.0);
}

double mu_conditional_asp(bool hit, double nu_i, const NetworkConfig& cfg,
                          const TierLoad& loads, double p_mu_i, BoundSide side,
                          const QuadratureSpec& spec) {
  return mu_conditional_asp(hit, nu_i, GeometricAssociation(cfg, spec), loads, p_mu_i, side,
                            spec);
}

double backhaul_asp(Tier tier, double nu_i, const NetworkConfig& cfg, const TierLoad& loads,
                    double p_hit) {
  if (p_hit < 0 || p_hit > 1) throw std::invalid_argument("backhaul_asp: p_hit in [0,1]");
  if (!(nu_i > 0)) throw std::invalid_argument("backhaul_asp: nu_i must be > 0");
  const double users = tier == Tier::MmWave ? loads.u_m : loads.u_mu;
  if (users < 1) throw std::invalid_argument("backhaul_asp: tier load must be >= 1");
  const long u = std::max(1L, std::lround(users));
  const double capacity = backhaul_capacity(cfg);
  // Epsilon guard: C_b/nu lands exactly on integers for round configurations.
  const long n_b = static_cast<long>(std::floor(capacity / nu_i + 1e-9));
  if (n_b >= u) return 1.0;
  if (n_b < 0) return 0.0;

  double sum = 0.0;
  for (long n = 0; n < u; ++n) {
    const double log_comb =
        std::lgamma(u) - std::lgamma(n + 1.0) - std::lgamma(u - n + 0.0);
    const double weight = std::exp(log_comb) * std::pow(p_hit, double(u - 1 - n)) *
                          std::pow(1.0 - p_hit, double(n));
    sum += weight * std::min(1.0, static_cast<double>(n_b) / (n + 1.0));
  }
  return std::clamp(sum, 0.0, 1.0);
}

LinkConstants link_constants(const NetworkConfig& cfg, const TierLoad& loads, double nu_i,
                             double serving_distance, bool los, bool mu_hit, double p_mu_i,
                             const QuadratureSpec& spec) {
  LinkConstants k;
  const double eta_s = los ? cfg.eta_los : cfg.eta_nlos;
  const double alpha_s = los ? cfg.alpha_los : cfg.alpha_nlos;
  k.q_threshold = sinr_threshold(nu_i, loads.u_m, cfg.w_m);
  k.g_gain = cfg.p_m_tx / loads.u_m * (cfg.nt_m * cfg.nr_m) / eta_s;
  k.s_lap = -k.q_threshold * std::pow(serving_distance, alpha_s) / k.g_gain;

  const double users = loads.u_mu;
  const double shape = cfg.nt_mu - users + 1.0;
  k.c1_mimo =
      cfg.p_mu_tx / users * std::exp(2.0 * (std::lgamma(shape + 0.5) - std::lgamma(shape)));
  k.c2_mimo = cfg.p_mu_tx / users * shape - k.c1_mimo;
  const double campbell = cfg.p_mu_tx * 2.0 * kPi * cfg.lambda_mu / (cfg.alpha_mu - 2.0);
  k.c3_prime = campbell * (mu_hit ? p_mu_i : 1.0 - p_mu_i);
  k.c3_dprime = campbell * (mu_hit ? 1.0 - p_mu_i : p_mu_i);

  k.n_b = std::floor(backhaul_capacity(cfg) / nu_i + 1e-9);
  k.r_star = mu_critical_radius(mu_hit, nu_i, cfg, loads, p_mu_i, spec);
  return k;
}

}  // namespace cachenet
