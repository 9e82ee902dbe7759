#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cachenet {

// All physical-layer, topology, caching and delay constants.
// Powers and noise are stored in linear SI units (watts); dBm inputs are
// converted once at parse time.
struct NetworkConfig {
  // node densities (nodes/m^2)
  double lambda_mu = 5e-6;  // microwave macro BSs
  double lambda_m = 1e-5;   // mmWave small BSs
  double lambda_u = 8e-5;   // users
  double lambda_g = 5e-7;   // gateways

  // transmit powers (watts; config keys p_*_tx_dbm accept dBm)
  double p_mu_tx = 39.810717055349734;  // 46 dBm
  double p_m_tx = 1.0;                  // 30 dBm

  // antenna and RF-chain counts
  int nt_mu = 100;
  int nt_m = 256;
  int nr_mu = 1;
  int nr_m = 16;
  int n_rf = 10;

  // bandwidths (Hz)
  double w_mu = 2e8;
  double w_m = 1e9;

  // content catalog
  int f_count = 20;
  Eigen::ArrayXd nu = Eigen::ArrayXd::Constant(20, 1e6);  // per-file target rates (bits/s)
  double upsilon = 0.8;                                   // Zipf skewness
  int c_mu = 10;  // macro cache size (files)
  int c_m = 8;    // small-cell cache size (files)

  // backhaul capacity coefficients: C_b = c1/(lambda_m + lambda_mu) + c2
  double c1 = 60.0;
  double c2 = 0.0;

  int n_retx = 1;  // retransmission attempts N

  // blockage and path loss
  double beta = 0.008;      // blockage density (1/m)
  double alpha_los = 2.0;
  double alpha_nlos = 4.0;
  double alpha_mu = 3.5;

  // association bias factors
  double b_mu = 1.0;
  double b_m = 0.5;

  // beam misalignment sidelobe penalties, in (0,1)
  double rho_ue = 0.5;
  double rho_bs = 0.5;

  // multipath counts
  int eta_los = 3;
  int eta_nlos = 5;

  // backhaul processing model
  double relay_r = 200.0;   // relay distance (m)
  double k1 = 10.0;
  double k2 = 1.0;
  double a_proc = 1e-5;
  double omega_proc = 1e-8;

  double s_file = 1e6;  // file size (bits)

  // noise powers (watts); defaulted from -174 dBm/Hz thermal density per band
  double sigma2_m = 3.9810717055349695e-12;
  double sigma2_mu = 7.962143411069939e-13;
};

// Table II-style defaults (the struct initializers above).
NetworkConfig default_config();

// Parses a flat "key = value" document. Values use JSON syntax (numbers,
// arrays, booleans); '#' starts a comment. Unknown keys are rejected.
// Keys p_mu_tx_dbm / p_m_tx_dbm accept dBm and are converted; p_mu_tx /
// p_m_tx accept watts directly (the echoed form). A scalar `nu` is broadcast
// to all f_count files.
NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config_file(const std::string& path);

// Applies environment overrides CACHENET_<key>=<value> on top of cfg.
// Returns the list of keys that were overridden.
std::vector<std::string> apply_env_overrides(NetworkConfig& cfg,
                                             const std::string& prefix = "CACHENET_");

// Returns one diagnostic per violated model assumption; empty means valid.
std::vector<std::string> validate(const NetworkConfig& cfg);

// Re-parseable "key = value" echo of the fully resolved config (linear units).
std::string echo_config(const NetworkConfig& cfg);

double dbm_to_watts(double dbm);

}  // namespace cachenet
