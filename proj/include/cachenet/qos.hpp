#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "cachenet/catalog.hpp"
#include "cachenet/config.hpp"
#include "cachenet/geometry.hpp"
#include "cachenet/link.hpp"

namespace cachenet {

// Popularity- and association-averaged QoS metrics for one caching profile.
struct QosReport {
  double asp_retx = 0;        // retransmission ASP of file delivery
  double latency_mean = 0;    // seconds
  double backhaul_load = 0;   // bits/s per m^2
  BoundSide side = BoundSide::Lower;
  // Popularity-weighted event mixture: weight[e] sums to one over events,
  // event_asp[e] is the conditional retransmission ASP of event e.
  std::array<double, 6> event_weight{};
  std::array<double, 6> event_asp{};
};

// Truncated-retransmission helpers: success within N attempts and the
// expected number of attempts spent (capped at N, exact at p = 0).
double retx_success(double p_single, int n_attempts);
double expected_attempts(double p_single, int n_attempts);

// Access-link transmission time for one attempt.
double t0_access(double mean_rate, double s_file);

// Backhaul transmission plus gateway/relay processing time for one attempt.
double backhaul_delay(Tier tier, const NetworkConfig& cfg, double nu_i);

// Backhaul load per unit area under the unconstrained-backhaul convention.
double backhaul_load_density(const NetworkConfig& cfg, const Popularity& popularity,
                             const CacheProfile& profile, double p_am);

// Evaluates the analytic metric set for a configuration, caching the
// association geometry and the per-event conditional ASP tables so that
// sweeps over skewness, cache size, backhaul capacity or N reuse them.
// A cfg whose geometry- or link-level fields changed resets the cache.
class AnalyticEngine {
 public:
  explicit AnalyticEngine(const NetworkConfig& cfg, QuadratureSpec spec = {});

  QosReport evaluate(const NetworkConfig& cfg, const Popularity& popularity,
                     const CacheProfile& profile, BoundSide side);

  const GeometricAssociation& geometry() const { return *geom_; }
  const TierLoad& loads() const { return loads_; }

  // Single-attempt conditional ASP of a mmWave event at distance R, read from
  // the interpolation table (building it on first use).
  double mm_single_attempt(AssociationEvent event, double R, double nu_i, double p_m_i,
                           BoundSide side);

 private:
  struct Table {
    std::vector<double> log_r;
    std::vector<double> value;
    double eval(double r) const;
  };

  void rebuild(const NetworkConfig& cfg);
  const Table& mm_table(AssociationEvent event, double nu_i, double p_m_i, BoundSide side);
  double mu_single_attempt(bool hit, double nu_i, double p_mu_i, BoundSide side);

  QuadratureSpec spec_;
  NetworkConfig base_;
  std::unique_ptr<GeometricAssociation> geom_;
  TierLoad loads_;
  std::map<std::tuple<int, double, double, int>, Table> mm_tables_;
  std::map<std::tuple<int, double, double, int>, double> mu_cache_;
};

// One-shot convenience wrappers (N comes from cfg.n_retx).
double retransmission_asp(const NetworkConfig& cfg, const Popularity& popularity,
                          const CacheProfile& profile, BoundSide side);
double average_latency(const NetworkConfig& cfg, const Popularity& popularity,
                       const CacheProfile& profile, BoundSide side);
QosReport analytic_qos(const NetworkConfig& cfg, const Popularity& popularity,
                       const CacheProfile& profile, BoundSide side);

}  // namespace cachenet
