#include "cachenet/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "cachenet/errors.hpp"

namespace cachenet {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kDegenerateEventProb = 1e-12;
}  // namespace

const char* to_string(AssociationEvent e) {
  switch (e) {
    case AssociationEvent::MmHitLos: return "MmHitLos";
    case AssociationEvent::MmHitNlos: return "MmHitNlos";
    case AssociationEvent::MmMissLos: return "MmMissLos";
    case AssociationEvent::MmMissNlos: return "MmMissNlos";
    case AssociationEvent::MuHit: return "MuHit";
    case AssociationEvent::MuMiss: return "MuMiss";
  }
  return "?";
}

std::pair<double, double> blockage_probs(double r, double beta) {
  if (r < 0 || beta < 0) throw std::invalid_argument("blockage_probs: negative input");
  const double p_los = std::exp(-beta * r);
  return {p_los, 1.0 - p_los};
}

double aux_Z(double R, double beta) {
  if (R < 0 || beta < 0) throw std::invalid_argument("aux_Z: negative input");
  if (beta == 0.0) return 0.5 * R * R;
  const double x = beta * R;
  if (x < 1e-3) {
    // series of int_0^R r e^{-beta r} dr, accurate to ~x^5 relative
    return R * R * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0 + x * x * x * x / 144.0);
  }
  return (-std::expm1(-x) - x * std::exp(-x)) / (beta * beta);
}

double aux_Zhat(double R, double beta) {
  return 0.5 * R * R - aux_Z(R, beta);
}

namespace {

struct Kernels {
  const NetworkConfig& c;

  // serving LOS mmWave BS at R: biased path loss B_m R^{-alpha_L}
  double mm_los(double R) const {
    if (!(R > 0)) return 0.0;
    const double mu_radius_sq =
        std::pow(c.b_mu * std::pow(R, c.alpha_los) / c.b_m, 2.0 / c.alpha_mu);
    const double cross = std::pow(R, c.alpha_los / c.alpha_nlos);
    const double voids = -kPi * c.lambda_mu * mu_radius_sq -
                         2.0 * kPi * c.lambda_m * aux_Z(R, c.beta) -
                         2.0 * kPi * c.lambda_m * aux_Zhat(cross, c.beta);
    const double density = 2.0 * kPi * c.lambda_m * R * std::exp(-c.beta * R);
    if (density == 0.0) return 0.0;
    return std::exp(voids) * density;
  }

  double mm_nlos(double R) const {
    if (!(R > 0)) return 0.0;
    const double mu_radius_sq =
        std::pow(c.b_mu * std::pow(R, c.alpha_nlos) / c.b_m, 2.0 / c.alpha_mu);
    const double cross = std::pow(R, c.alpha_nlos / c.alpha_los);
    const double voids = -kPi * c.lambda_mu * mu_radius_sq -
                         2.0 * kPi * c.lambda_m * aux_Z(cross, c.beta) -
                         2.0 * kPi * c.lambda_m * aux_Zhat(R, c.beta);
    const double density = 2.0 * kPi * c.lambda_m * R * (-std::expm1(-c.beta * R));
    if (density == 0.0) return 0.0;
    return std::exp(voids) * density;
  }

  double mu(double R) const {
    if (!(R > 0)) return 0.0;
    const double mm_los_radius = std::pow(c.b_m * std::pow(R, c.alpha_mu) / c.b_mu,
                                          1.0 / c.alpha_los);
    const double mm_nlos_radius = std::pow(c.b_m * std::pow(R, c.alpha_mu) / c.b_mu,
                                           1.0 / c.alpha_nlos);
    const double voids = -kPi * c.lambda_mu * R * R -
                         2.0 * kPi * c.lambda_m * aux_Z(mm_los_radius, c.beta) -
                         2.0 * kPi * c.lambda_m * aux_Zhat(mm_nlos_radius, c.beta);
    return std::exp(voids) * 2.0 * kPi * c.lambda_mu * R;
  }
};

// Radius beyond which f is negligible relative to its peak; doubling scan.
template <class F>
double support_radius(const F& f, double start) {
  double peak = 0.0;
  for (double r = start * 1e-3; r <= start * 8; r *= 1.3) peak = std::max(peak, f(r));
  if (peak <= 0) return start;
  double hi = start;
  while (hi < 1e9 && f(hi) > peak * 1e-14) hi *= 2.0;
  return hi;
}

}  // namespace

GeometricAssociation::GeometricAssociation(const NetworkConfig& cfg, QuadratureSpec spec)
    : cfg_(cfg), spec_(spec) {
  const Kernels k{cfg_};
  // Characteristic spacing of the sparser tier bounds the serving distance scale.
  const double scale = 1.0 / std::sqrt(kPi * std::min(cfg_.lambda_mu, cfg_.lambda_m));
  r_hi_los_ = support_radius([&k](double r) { return k.mm_los(r); }, scale);
  r_hi_nlos_ = support_radius([&k](double r) { return k.mm_nlos(r); }, scale);
  r_hi_mu_ = support_radius([&k](double r) { return k.mu(r); }, scale);

  prob_los_ = integrate([&k](double r) { return k.mm_los(r); }, 0.0, r_hi_los_, spec_).value;
  prob_nlos_ = integrate([&k](double r) { return k.mm_nlos(r); }, 0.0, r_hi_nlos_, spec_).value;
  prob_mu_ = integrate([&k](double r) { return k.mu(r); }, 0.0, r_hi_mu_, spec_).value;
}

double GeometricAssociation::kernel_mm_los(double D) const { return Kernels{cfg_}.mm_los(D); }
double GeometricAssociation::kernel_mm_nlos(double D) const { return Kernels{cfg_}.mm_nlos(D); }
double GeometricAssociation::kernel_mu(double D) const { return Kernels{cfg_}.mu(D); }

AssociationProbabilities association_probabilities(const GeometricAssociation& geom,
                                                   double p_m_i, double p_mu_i) {
  if (p_m_i < 0 || p_m_i > 1 || p_mu_i < 0 || p_mu_i > 1) {
    throw std::invalid_argument("association_probabilities: caching probabilities in [0,1]");
  }
  AssociationProbabilities a;
  const double pl = geom.prob_mm_los();
  const double pn = geom.prob_mm_nlos();
  const double pmu = geom.prob_mu();
  a.p[0] = p_m_i * pl;
  a.p[1] = p_m_i * pn;
  a.p[2] = (1.0 - p_m_i) * pl;
  a.p[3] = (1.0 - p_m_i) * pn;
  a.p[4] = p_mu_i * pmu;
  a.p[5] = (1.0 - p_mu_i) * pmu;
  a.p_am = pl + pn;
  a.p_amu = pmu;
  return a;
}

AssociationProbabilities association_probabilities(const NetworkConfig& cfg, double p_m_i,
                                                   double p_mu_i) {
  return association_probabilities(GeometricAssociation(cfg), p_m_i, p_mu_i);
}

double distance_pdf(AssociationEvent event, double D, const GeometricAssociation& geom,
                    double p_m_i, double p_mu_i) {
  if (D < 0) throw std::invalid_argument("distance_pdf: D must be >= 0");
  const auto assoc = association_probabilities(geom, p_m_i, p_mu_i);
  if (assoc[event] <= kDegenerateEventProb) {
    throw DegenerateEventError(std::string("distance_pdf: event ") + to_string(event) +
                               " has negligible probability");
  }
  // The caching factor cancels between the joint density and the event
  // probability, leaving the state-level kernel over its state probability.
  switch (event) {
    case AssociationEvent::MmHitLos:
    case AssociationEvent::MmMissLos:
      return geom.kernel_mm_los(D) / geom.prob_mm_los();
    case AssociationEvent::MmHitNlos:
    case AssociationEvent::MmMissNlos:
      return geom.kernel_mm_nlos(D) / geom.prob_mm_nlos();
    case AssociationEvent::MuHit:
    case AssociationEvent::MuMiss:
      return geom.kernel_mu(D) / geom.prob_mu();
  }
  return 0.0;
}

double distance_pdf(AssociationEvent event, double D, const NetworkConfig& cfg, double p_m_i,
                    double p_mu_i) {
  return distance_pdf(event, D, GeometricAssociation(cfg), p_m_i, p_mu_i);
}

TierLoad tier_loads(const NetworkConfig& cfg, const AssociationProbabilities& assoc) {
  TierLoad load;
  load.n_assoc_tagged_m = 1.0 + 1.28 * cfg.lambda_u * assoc.p_am / cfg.lambda_m;
  load.n_assoc_tagged_mu = 1.0 + 1.28 * cfg.lambda_u * assoc.p_amu / cfg.lambda_mu;
  load.n_assoc_other_m = cfg.lambda_u * assoc.p_am / cfg.lambda_m;
  load.n_assoc_other_mu = cfg.lambda_u * assoc.p_amu / cfg.lambda_mu;
  load.u_m = std::min(static_cast<double>(cfg.n_rf), load.n_assoc_tagged_m);
  load.u_mu = std::min(static_cast<double>(cfg.nt_mu), load.n_assoc_tagged_mu);
  load.u_other_m = std::min(static_cast<double>(cfg.n_rf), load.n_assoc_other_m);
  load.u_other_mu = std::min(static_cast<double>(cfg.nt_mu), load.n_assoc_other_mu);
  return load;
}

}  // namespace cachenet
