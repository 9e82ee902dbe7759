#pragma once

#include "cachenet/catalog.hpp"
#include "cachenet/config.hpp"
#include "cachenet/geometry.hpp"
#include "cachenet/numerics.hpp"

namespace cachenet {

// Which side of the single-attempt ASP sandwich to evaluate.
// Lower: Cauchy-Schwarz form (per-state path-count exponent, no sidelobe
// factor). Upper: single-exponent form with the (rho_bs * rho_ue)^2 sidelobe
// penalty on every interferer.
enum class BoundSide { Lower, Upper };

const char* to_string(BoundSide side);

// Derived per-evaluation scalars, mostly useful for inspection and tests.
struct LinkConstants {
  double q_threshold = 0;  // SINR threshold 2^{nu U/W} - 1
  double g_gain = 0;       // composite mmWave serving gain (P/U)(n_t n_r / eta)
  double s_lap = 0;        // Laplace argument -q/(g R^-alpha)
  double c1_mimo = 0;      // massive-MIMO mean signal coefficient
  double c2_mimo = 0;      // channel-hardening variance gap
  double c3_prime = 0;     // Campbell term tied to the serving-class process
  double c3_dprime = 0;    // distance-free Campbell term of the opposite class
  double n_b = 0;          // backhaul user budget floor(C_b / nu)
  double r_star = 0;       // microwave critical radius (0: none; inf: everywhere)
};

LinkConstants link_constants(const NetworkConfig& cfg, const TierLoad& loads, double nu_i,
                             double serving_distance, bool los, bool mu_hit, double p_mu_i,
                             const QuadratureSpec& spec = {});

// Single-attempt conditional ASP of a mmWave serving link at distance R for
// one of the four mmWave events: ZF penalty x noise exponential x
// PGFL interference factors with the event's exclusion geometry.
double mm_conditional_asp(AssociationEvent event, double R, double nu_i,
                          const NetworkConfig& cfg, const TierLoad& loads, double p_m_i,
                          BoundSide side, const QuadratureSpec& spec = {});

// Lemma-4 mean achievable rate of a microwave user at distance r >= 1 m.
double mu_mean_rate(bool hit, double r, const NetworkConfig& cfg, const TierLoad& loads,
                    double p_mu_i);

// Distance r* at which the microwave mean rate crosses nu_i: 0 when the rate
// at r = 1 is already below nu_i, +infinity when it stays above everywhere.
double mu_critical_radius(bool hit, double nu_i, const NetworkConfig& cfg,
                          const TierLoad& loads, double p_mu_i,
                          const QuadratureSpec& spec = {});

// Distance-averaged single-attempt ASP of the microwave tier: probability
// mass of the serving distance below floor(r*) (Lower) or ceil(r*) (Upper).
double mu_conditional_asp(bool hit, double nu_i, const GeometricAssociation& geom,
                          const TierLoad& loads, double p_mu_i, BoundSide side,
                          const QuadratureSpec& spec = {});
double mu_conditional_asp(bool hit, double nu_i, const NetworkConfig& cfg,
                          const TierLoad& loads, double p_mu_i, BoundSide side,
                          const QuadratureSpec& spec = {});

// Backhaul ASP: probability that the typical cache-miss user is granted one
// of the N_b = floor(C_b/nu) backhaul shares against Binomial(U-1, 1-p_hit)
// competing cache-miss users.
double backhaul_asp(Tier tier, double nu_i, const NetworkConfig& cfg, const TierLoad& loads,
                    double p_hit);

}  // namespace cachenet
