#include "cachenet/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cachenet {

namespace {

using nlohmann::json;

struct FieldBinding {
  std::function<void(NetworkConfig&, const json&)> set;
  std::function<json(const NetworkConfig&)> get;  // null get: input-only alias
};

json to_number_array(const Eigen::ArrayXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::ArrayXd parse_rate_vector(const json& j, int f_count) {
  if (j.is_number()) return Eigen::ArrayXd::Constant(f_count, j.get<double>());
  if (!j.is_array()) throw std::invalid_argument("nu: expected number or array");
  Eigen::ArrayXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument("nu: array entries must be numbers");
    v[i++] = x.get<double>();
  }
  return v;
}

const std::map<std::string, FieldBinding>& bindings() {
  auto dbl = [](double NetworkConfig::*m) {
    return FieldBinding{
        [m](NetworkConfig& c, const json& j) { c.*m = j.get<double>(); },
        [m](const NetworkConfig& c) { return json(c.*m); }};
  };
  auto integer = [](int NetworkConfig::*m) {
    return FieldBinding{
        [m](NetworkConfig& c, const json& j) {
          const double x = j.get<double>();
          if (x != std::floor(x)) throw std::invalid_argument("expected an integer");
          c.*m = static_cast<int>(x);
        },
        [m](const NetworkConfig& c) { return json(c.*m); }};
  };
  static const std::map<std::string, FieldBinding> map = {
      {"lambda_mu", dbl(&NetworkConfig::lambda_mu)},
      {"lambda_m", dbl(&NetworkConfig::lambda_m)},
      {"lambda_u", dbl(&NetworkConfig::lambda_u)},
      {"lambda_g", dbl(&NetworkConfig::lambda_g)},
      {"p_mu_tx", dbl(&NetworkConfig::p_mu_tx)},
      {"p_m_tx", dbl(&NetworkConfig::p_m_tx)},
      {"p_mu_tx_dbm",
       {[](NetworkConfig& c, const json& j) { c.p_mu_tx = dbm_to_watts(j.get<double>()); },
        nullptr}},
      {"p_m_tx_dbm",
       {[](NetworkConfig& c, const json& j) { c.p_m_tx = dbm_to_watts(j.get<double>()); },
        nullptr}},
      {"nt_mu", integer(&NetworkConfig::nt_mu)},
      {"nt_m", integer(&NetworkConfig::nt_m)},
      {"nr_mu", integer(&NetworkConfig::nr_mu)},
      {"nr_m", integer(&NetworkConfig::nr_m)},
      {"n_rf", integer(&NetworkConfig::n_rf)},
      {"w_mu", dbl(&NetworkConfig::w_mu)},
      {"w_m", dbl(&NetworkConfig::w_m)},
      {"f_count", integer(&NetworkConfig::f_count)},
      {"nu",
       {[](NetworkConfig& c, const json& j) { c.nu = parse_rate_vector(j, c.f_count); },
        [](const NetworkConfig& c) { return to_number_array(c.nu); }}},
      {"upsilon", dbl(&NetworkConfig::upsilon)},
      {"c_mu", integer(&NetworkConfig::c_mu)},
      {"c_m", integer(&NetworkConfig::c_m)},
      {"c1", dbl(&NetworkConfig::c1)},
      {"c2", dbl(&NetworkConfig::c2)},
      {"n_retx", integer(&NetworkConfig::n_retx)},
      {"beta", dbl(&NetworkConfig::beta)},
      {"alpha_los", dbl(&NetworkConfig::alpha_los)},
      {"alpha_nlos", dbl(&NetworkConfig::alpha_nlos)},
      {"alpha_mu", dbl(&NetworkConfig::alpha_mu)},
      {"b_mu", dbl(&NetworkConfig::b_mu)},
      {"b_m", dbl(&NetworkConfig::b_m)},
      {"rho_ue", dbl(&NetworkConfig::rho_ue)},
      {"rho_bs", dbl(&NetworkConfig::rho_bs)},
      {"eta_los", integer(&NetworkConfig::eta_los)},
      {"eta_nlos", integer(&NetworkConfig::eta_nlos)},
      {"relay_r", dbl(&NetworkConfig::relay_r)},
      {"k1", dbl(&NetworkConfig::k1)},
      {"k2", dbl(&NetworkConfig::k2)},
      {"a_proc", dbl(&NetworkConfig::a_proc)},
      {"omega_proc", dbl(&NetworkConfig::omega_proc)},
      {"s_file", dbl(&NetworkConfig::s_file)},
      {"sigma2_m", dbl(&NetworkConfig::sigma2_m)},
      {"sigma2_mu", dbl(&NetworkConfig::sigma2_mu)},
  };
  return map;
}

// Echo order: stable, grouped like the config header.
const std::vector<std::string>& echo_order() {
  static const std::vector<std::string> order = {
      "lambda_mu", "lambda_m", "lambda_u", "lambda_g",
      "p_mu_tx", "p_m_tx",
      "nt_mu", "nt_m", "nr_mu", "nr_m", "n_rf",
      "w_mu", "w_m",
      "f_count", "nu", "upsilon", "c_mu", "c_m",
      "c1", "c2", "n_retx",
      "beta", "alpha_los", "alpha_nlos", "alpha_mu",
      "b_mu", "b_m", "rho_ue", "rho_bs", "eta_los", "eta_nlos",
      "relay_r", "k1", "k2", "a_proc", "omega_proc",
      "s_file", "sigma2_m", "sigma2_mu",
  };
  return order;
}

struct KeyValue {
  std::string key;
  json value;
  int line;
};

std::vector<KeyValue> tokenize(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    KeyValue kv;
    kv.key = trim(line.substr(0, eq));
    kv.line = line_no;
    const std::string raw = trim(line.substr(eq + 1));
    try {
      kv.value = json::parse(raw);
    } catch (const json::exception&) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": field '" +
                                  kv.key + "': value is not valid JSON: " + raw);
    }
    out.push_back(std::move(kv));
  }
  return out;
}

void apply(NetworkConfig& cfg, const KeyValue& kv) {
  const auto& map = bindings();
  const auto it = map.find(kv.key);
  if (it == map.end()) {
    throw std::invalid_argument("config line " + std::to_string(kv.line) + ": unknown key '" +
                                kv.key + "'");
  }
  try {
    it->second.set(cfg, kv.value);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config line " + std::to_string(kv.line) + ": field '" +
                                kv.key + "': " + e.what());
  }
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

NetworkConfig default_config() { return NetworkConfig{}; }

NetworkConfig parse_config(const std::string& text) {
  NetworkConfig cfg = default_config();
  auto kvs = tokenize(text);
  // f_count first so that scalar nu values broadcast to the right length.
  for (const auto& kv : kvs) {
    if (kv.key == "f_count") apply(cfg, kv);
  }
  if (cfg.nu.size() != cfg.f_count) {
    cfg.nu = Eigen::ArrayXd::Constant(cfg.f_count, cfg.nu.size() ? cfg.nu[0] : 1e6);
  }
  for (const auto& kv : kvs) {
    if (kv.key != "f_count") apply(cfg, kv);
  }
  if (cfg.nu.size() != cfg.f_count) {
    throw std::invalid_argument("config: nu has " + std::to_string(cfg.nu.size()) +
                                " entries but f_count = " + std::to_string(cfg.f_count));
  }
  return cfg;
}

NetworkConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::string> apply_env_overrides(NetworkConfig& cfg, const std::string& prefix) {
  std::vector<std::string> overridden;
  for (const auto& [key, binding] : bindings()) {
    const std::string var = prefix + key;
    const char* value = std::getenv(var.c_str());
    if (!value) continue;
    KeyValue kv;
    kv.key = key;
    kv.line = 0;
    try {
      kv.value = json::parse(value);
    } catch (const json::exception&) {
      throw std::invalid_argument("environment override " + var +
                                  ": value is not valid JSON: " + std::string(value));
    }
    apply(cfg, kv);
    overridden.push_back(key);
  }
  if (cfg.nu.size() != cfg.f_count && cfg.nu.size() == 1) {
    cfg.nu = Eigen::ArrayXd::Constant(cfg.f_count, cfg.nu[0]);
  }
  return overridden;
}

std::vector<std::string> validate(const NetworkConfig& c) {
  std::vector<std::string> d;
  auto require = [&d](bool ok, const std::string& msg) {
    if (!ok) d.push_back(msg);
  };
  require(c.lambda_mu > 0, "lambda_mu must be > 0");
  require(c.lambda_m > 0, "lambda_m must be > 0");
  require(c.lambda_u > 0, "lambda_u must be > 0");
  require(c.lambda_g > 0, "lambda_g must be > 0");
  require(c.lambda_u > c.lambda_m && c.lambda_m > c.lambda_mu,
          "density ordering lambda_u > lambda_m > lambda_mu violated");
  require(c.p_mu_tx > 0, "p_mu_tx must be > 0");
  require(c.p_m_tx > 0, "p_m_tx must be > 0");
  require(c.nt_mu >= 1 && c.nt_m >= 1 && c.nr_mu >= 1 && c.nr_m >= 1,
          "antenna counts must be >= 1");
  require(c.nr_m >= 2, "nr_m must be >= 2 (ZF penalty requires multi-antenna mmWave UEs)");
  require(c.n_rf >= 1, "n_rf must be >= 1");
  require(c.w_mu > 0 && c.w_m > 0, "bandwidths must be > 0");
  require(c.f_count >= 1, "f_count must be >= 1");
  require(c.nu.size() == c.f_count, "nu must have f_count entries");
  require((c.nu > 0).all(), "per-file target rates nu must be > 0");
  require(c.upsilon >= 0, "upsilon must be >= 0");
  require(c.c_m >= 0 && c.c_m <= c.f_count, "c_m must lie in [0, f_count]");
  require(c.c_mu >= 0 && c.c_mu <= c.f_count, "c_mu must lie in [0, f_count]");
  require(c.c_m < c.c_mu, "cache sizes must satisfy c_m < c_mu");
  require(c.c1 >= 0 && c.c2 >= 0, "backhaul coefficients c1, c2 must be >= 0");
  require(c.n_retx >= 1, "n_retx must be >= 1");
  require(c.beta >= 0, "beta must be >= 0");
  require(c.alpha_los >= 2, "alpha_los must be >= 2");
  require(c.alpha_nlos > 2, "alpha_nlos must be > 2 (NLOS interference tail integral)");
  require(c.alpha_nlos >= c.alpha_los, "alpha_nlos must be >= alpha_los");
  require(c.alpha_mu > 2,
          "alpha_mu must be > 2 (the mean-interference Campbell integral diverges otherwise)");
  require(c.b_mu > 0 && c.b_m > 0, "bias factors must be > 0");
  require(c.rho_ue > 0 && c.rho_ue < 1, "rho_ue must lie in (0,1)");
  require(c.rho_bs > 0 && c.rho_bs < 1, "rho_bs must lie in (0,1)");
  require(c.eta_los >= 1, "eta_los must be >= 1");
  require(c.eta_nlos > c.eta_los, "path counts must satisfy eta_los < eta_nlos");
  require(c.relay_r > 0, "relay_r must be > 0");
  require(c.k1 >= 0 && c.k2 >= 0 && c.a_proc >= 0 && c.omega_proc >= 0,
          "backhaul processing constants must be >= 0");
  require(c.s_file > 0, "s_file must be > 0");
  require(c.sigma2_m > 0 && c.sigma2_mu > 0, "noise powers must be > 0");
  return d;
}

std::string echo_config(const NetworkConfig& cfg) {
  std::ostringstream out;
  const auto& map = bindings();
  for (const auto& key : echo_order()) {
    const auto& binding = map.at(key);
    out << key << " = " << binding.get(cfg).dump() << "\n";
  }
  return out.str();
}

}  // namespace cachenet
