#pragma once

#include <array>
#include <utility>

#include "cachenet/config.hpp"
#include "cachenet/numerics.hpp"

namespace cachenet {

// The six content-access/association scenarios: serving tier, mmWave link
// state, and cache hit/miss of the requested file at the serving BS.
enum class AssociationEvent {
  MmHitLos = 0,
  MmHitNlos = 1,
  MmMissLos = 2,
  MmMissNlos = 3,
  MuHit = 4,
  MuMiss = 5,
};

inline constexpr std::array<AssociationEvent, 6> kAllEvents = {
    AssociationEvent::MmHitLos,  AssociationEvent::MmHitNlos, AssociationEvent::MmMissLos,
    AssociationEvent::MmMissNlos, AssociationEvent::MuHit,     AssociationEvent::MuMiss,
};

const char* to_string(AssociationEvent e);
inline bool is_mm(AssociationEvent e) { return static_cast<int>(e) < 4; }
inline bool is_hit(AssociationEvent e) {
  return e == AssociationEvent::MmHitLos || e == AssociationEvent::MmHitNlos ||
         e == AssociationEvent::MuHit;
}
inline bool is_los(AssociationEvent e) {
  return e == AssociationEvent::MmHitLos || e == AssociationEvent::MmMissLos;
}

// LOS/NLOS split of a link of length r under the exponential blockage model.
std::pair<double, double> blockage_probs(double r, double beta);

// Z(R) = int_0^R r e^{-beta r} dr and Zhat(R) = R^2/2 - Z(R), the LOS- and
// NLOS-weighted disc areas appearing in every void probability. beta = 0 is
// the fully-LOS limit Z = R^2/2, Zhat = 0.
double aux_Z(double R, double beta);
double aux_Zhat(double R, double beta);

// Geometry-only association kernels, shared by all six events: the caching
// probability enters every event multiplicatively, so only three state-level
// kernels need to be integrated per configuration.
class GeometricAssociation {
 public:
  explicit GeometricAssociation(const NetworkConfig& cfg, QuadratureSpec spec = {});

  // Unnormalized joint densities of {serving BS is tier/state at distance D}.
  double kernel_mm_los(double D) const;
  double kernel_mm_nlos(double D) const;
  double kernel_mu(double D) const;

  // State-level association probabilities; they sum to one.
  double prob_mm_los() const { return prob_los_; }
  double prob_mm_nlos() const { return prob_nlos_; }
  double prob_mu() const { return prob_mu_; }
  double p_am() const { return prob_los_ + prob_nlos_; }
  double p_amu() const { return prob_mu_; }

  // Distance beyond which each kernel is numerically negligible.
  double support_radius_mm_los() const { return r_hi_los_; }
  double support_radius_mm_nlos() const { return r_hi_nlos_; }
  double support_radius_mu() const { return r_hi_mu_; }

  const NetworkConfig& config() const { return cfg_; }
  const QuadratureSpec& quadrature() const { return spec_; }

 private:
  NetworkConfig cfg_;
  QuadratureSpec spec_;
  double prob_los_ = 0, prob_nlos_ = 0, prob_mu_ = 0;
  double r_hi_los_ = 0, r_hi_nlos_ = 0, r_hi_mu_ = 0;
};

// Per-file probabilities of the six association events, plus tier aggregates.
struct AssociationProbabilities {
  std::array<double, 6> p{};  // indexed by AssociationEvent
  double p_am = 0;            // mmWave tier total (cache-independent)
  double p_amu = 0;           // microwave tier total

  double operator[](AssociationEvent e) const { return p[static_cast<int>(e)]; }
};

AssociationProbabilities association_probabilities(const GeometricAssociation& geom,
                                                   double p_m_i, double p_mu_i);
AssociationProbabilities association_probabilities(const NetworkConfig& cfg, double p_m_i,
                                                   double p_mu_i);

// Lemma-3 conditional serving-distance density for one event (1/m).
// Throws DegenerateEventError when the event probability is below 1e-12.
double distance_pdf(AssociationEvent event, double D, const GeometricAssociation& geom,
                    double p_m_i, double p_mu_i);
double distance_pdf(AssociationEvent event, double D, const NetworkConfig& cfg, double p_m_i,
                    double p_mu_i);

// Mean user loads per BS; tagged cells carry the +1 typical user and the 1.28
// Poisson-Voronoi area factor, and served counts are capped by the RF chain /
// antenna budget.
struct TierLoad {
  double n_assoc_tagged_m = 0;
  double n_assoc_tagged_mu = 0;
  double n_assoc_other_m = 0;
  double n_assoc_other_mu = 0;
  double u_m = 0;        // users served by the tagged mmWave BS
  double u_mu = 0;       // users served by the tagged microwave BS
  double u_other_m = 0;  // users served by an interfering mmWave BS
  double u_other_mu = 0;
};

TierLoad tier_loads(const NetworkConfig& cfg, const AssociationProbabilities& assoc);

}  // namespace cachenet
