#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cachenet/config.hpp"
#include "cachenet/errors.hpp"
#include "cachenet/qos.hpp"
#include "cachenet/simulator.hpp"
#include "cachenet/sweep.hpp"

namespace {

using namespace cachenet;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  long trials = 20000;
  std::uint64_t seed = 1;
  std::uint64_t rc_seed = 7;
  int workers = 0;
  std::string engines = "both";
  std::string bound = "both";
};

NetworkConfig load_config(const std::string& path) {
  NetworkConfig cfg = path.empty() ? default_config() : load_config_file(path);
  apply_env_overrides(cfg);
  return cfg;
}

std::vector<BoundSide> sides_from(const std::string& bound) {
  if (bound == "lower") return {BoundSide::Lower};
  if (bound == "upper") return {BoundSide::Upper};
  if (bound == "both") return {BoundSide::Lower, BoundSide::Upper};
  throw std::invalid_argument("--bound must be lower, upper or both");
}

std::vector<CachePolicy> policies_from(const std::vector<std::string>& names) {
  std::vector<CachePolicy> policies;
  for (const auto& name : names) {
    const auto policy = parse_policy(name);
    if (!policy) throw std::invalid_argument("unknown policy '" + name + "'");
    policies.push_back(*policy);
  }
  if (policies.empty()) throw std::invalid_argument("no policies given");
  return policies;
}

int cmd_validate(const std::string& config_path) {
  NetworkConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto diagnostics = validate(cfg);
  for (const auto& d : diagnostics) std::cout << "invalid: " << d << "\n";
  if (diagnostics.empty()) std::cout << "config ok\n";
  return diagnostics.empty() ? kExitOk : kExitFailure;
}

int cmd_analytic(const CommonOptions& opt, const std::string& policy_name) {
  const NetworkConfig cfg = load_config(opt.config_path);
  const auto policy = parse_policy(policy_name);
  if (!policy) throw std::invalid_argument("unknown policy '" + policy_name + "'");
  const Popularity pop = zipf_popularity(cfg.f_count, cfg.upsilon);
  const CacheProfile profile =
      make_cache_profile(*policy, cfg.c_m, cfg.c_mu, cfg.f_count, opt.rc_seed);

  AnalyticEngine engine(cfg);
  std::vector<std::string> rows;
  for (const BoundSide side : sides_from(opt.bound)) {
    const QosReport q = engine.evaluate(cfg, pop, profile, side);
    std::ostringstream row;
    row << "0," << to_string(*policy) << ",analytic," << to_string(side) << ','
        << format_double(q.asp_retx) << ',' << format_double(q.asp_retx) << ','
        << format_double(q.asp_retx) << ',' << format_double(q.latency_mean) << ','
        << format_double(q.latency_mean) << ',' << format_double(q.latency_mean) << ','
        << format_double(q.backhaul_load) << ",0," << opt.seed;
    rows.push_back(row.str());
    std::cout << to_string(side) << ": asp=" << q.asp_retx << " latency=" << q.latency_mean
              << "s backhaul=" << q.backhaul_load << " bits/s/m^2\n";
  }
  std::filesystem::create_directories(opt.out_dir);
  write_single_point_csv(opt.out_dir + "/analytic_" + to_string(*policy) + ".csv", cfg,
                         to_string(*policy), rows);
  return kExitOk;
}

int cmd_simulate(const CommonOptions& opt, const std::string& policy_name,
                 const std::string& dump_path) {
  const NetworkConfig cfg = load_config(opt.config_path);
  const auto policy = parse_policy(policy_name);
  if (!policy) throw std::invalid_argument("unknown policy '" + policy_name + "'");
  const Popularity pop = zipf_popularity(cfg.f_count, cfg.upsilon);
  const CacheProfile profile =
      make_cache_profile(*policy, cfg.c_m, cfg.c_mu, cfg.f_count, opt.rc_seed);

  std::vector<TrialRecord> dump;
  const SimReport report = run_trials(cfg, pop, profile, opt.trials, opt.seed, opt.workers,
                                      dump_path.empty() ? nullptr : &dump);

  std::ostringstream row;
  row << "0," << to_string(*policy) << ",simulate,none," << format_double(report.asp) << ','
      << format_double(report.asp_ci_lo) << ',' << format_double(report.asp_ci_hi) << ','
      << format_double(report.latency_mean) << ',' << format_double(report.latency_ci_lo)
      << ',' << format_double(report.latency_ci_hi) << ','
      << format_double(report.backhaul_load) << ',' << report.trials << ',' << opt.seed;
  std::filesystem::create_directories(opt.out_dir);
  write_single_point_csv(opt.out_dir + "/simulate_" + to_string(*policy) + ".csv", cfg,
                         to_string(*policy), {row.str()});
  std::cout << "asp=" << report.asp << " [" << report.asp_ci_lo << ", " << report.asp_ci_hi
            << "] latency=" << report.latency_mean << "s backhaul=" << report.backhaul_load
            << " bits/s/m^2 resampled=" << report.resampled << "\n";

  if (!dump_path.empty()) {
    std::ofstream out(dump_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dump_path);
    out << "seed,file,event,distance,attempts,delivered,delay\n";
    for (const auto& rec : dump) {
      out << opt.seed << ',' << rec.file << ',' << to_string(rec.event) << ','
          << format_double(rec.distance) << ',' << rec.attempts << ','
          << (rec.delivered ? 1 : 0) << ',' << format_double(rec.delay) << "\n";
    }
  }
  return kExitOk;
}

SweepSpec build_sweep_spec(const CommonOptions& opt, const std::string& preset,
                           const std::string& parameter, const std::vector<double>& values,
                           const std::vector<std::string>& cache_pairs,
                           const std::vector<std::string>& policy_names,
                           const std::vector<int>& n_list) {
  SweepSpec spec;
  if (!preset.empty()) {
    const auto p = preset_spec(preset);
    if (!p) throw std::invalid_argument("unknown preset '" + preset + "'");
    spec = *p;
  } else {
    spec.parameter = parameter;
    spec.values = values;
    for (const auto& pair : cache_pairs) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("cache pair must be c_mu:c_m, got '" + pair + "'");
      }
      spec.cache_pairs.emplace_back(std::stoi(pair.substr(0, colon)),
                                    std::stoi(pair.substr(colon + 1)));
    }
    if (!policy_names.empty()) spec.policies = policies_from(policy_names);
    if (!n_list.empty()) spec.n_list = n_list;
  }
  if (!policy_names.empty()) spec.policies = policies_from(policy_names);
  if (!n_list.empty()) spec.n_list = n_list;
  const auto engines = parse_engine_mode(opt.engines);
  if (!engines) throw std::invalid_argument("--engines must be analytic, simulate or both");
  spec.engines = *engines;
  spec.sides = sides_from(opt.bound);
  spec.trials = opt.trials;
  spec.seed = opt.seed;
  spec.rc_seed = opt.rc_seed;
  spec.workers = opt.workers;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-engine evaluation of cache-enabled hybrid mmWave/microwave networks"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string policy = "MC";
  std::string preset;
  std::string parameter;
  std::string dump_path;
  std::string manifest_path;
  std::vector<double> values;
  std::vector<std::string> cache_pairs;
  std::vector<std::string> policy_names;
  std::vector<int> n_list;

  auto add_common = [&](CLI::App* cmd, bool with_engines) {
    cmd->add_option("--config", opt.config_path, "config file (key = value lines)");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", opt.seed, "simulation seed");
    cmd->add_option("--rc-seed", opt.rc_seed, "random-caching placement seed");
    cmd->add_option("--workers", opt.workers, "worker threads (0 = hardware)");
    cmd->add_option("--bound", opt.bound, "bound sides: lower, upper or both");
    if (with_engines) cmd->add_option("--engines", opt.engines, "analytic, simulate or both");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a config against the model assumptions");
  validate_cmd->add_option("--config", opt.config_path, "config file");

  CLI::App* analytic_cmd = app.add_subcommand("analytic", "evaluate the analytic engine at one point");
  add_common(analytic_cmd, false);
  analytic_cmd->add_option("--policy", policy, "caching policy (MC, UC, RC, NoCache)");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run the Monte Carlo engine at one point");
  add_common(simulate_cmd, false);
  simulate_cmd->add_option("--policy", policy, "caching policy (MC, UC, RC, NoCache)");
  simulate_cmd->add_option("--dump-trials", dump_path, "write one CSV row per trial");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep a parameter and export figure-ready CSVs");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--preset", preset, "fig1..fig7");
  sweep_cmd->add_option("--param", parameter, "upsilon, c1, cache, f_count, nu, beta, n_retx");
  sweep_cmd->add_option("--values", values, "swept values (sorted)");
  sweep_cmd->add_option("--cache-pairs", cache_pairs, "cache pairs as c_mu:c_m");
  sweep_cmd->add_option("--policies", policy_names, "policies to run");
  sweep_cmd->add_option("--n", n_list, "retransmission budgets");
  sweep_cmd->add_option("--from-manifest", manifest_path, "re-run a recorded sweep");

  CLI::App* compare_cmd = app.add_subcommand("compare", "run both engines and check bracket containment");
  add_common(compare_cmd, false);
  compare_cmd->add_option("--preset", preset, "fig1..fig7");
  compare_cmd->add_option("--param", parameter, "swept parameter");
  compare_cmd->add_option("--values", values, "swept values (sorted)");
  compare_cmd->add_option("--cache-pairs", cache_pairs, "cache pairs as c_mu:c_m");
  compare_cmd->add_option("--policies", policy_names, "policies to run");
  compare_cmd->add_option("--n", n_list, "retransmission budgets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(opt.config_path);
    if (analytic_cmd->parsed()) return cmd_analytic(opt, policy);
    if (simulate_cmd->parsed()) return cmd_simulate(opt, policy, dump_path);
    if (sweep_cmd->parsed()) {
      if (!manifest_path.empty()) {
        run_sweep_from_manifest(manifest_path, opt.out_dir);
        return kExitOk;
      }
      const NetworkConfig cfg = load_config(opt.config_path);
      run_sweep(cfg, build_sweep_spec(opt, preset, parameter, values, cache_pairs,
                                      policy_names, n_list),
                opt.out_dir);
      return kExitOk;
    }
    if (compare_cmd->parsed()) {
      const NetworkConfig cfg = load_config(opt.config_path);
      const auto points = run_compare(
          cfg,
          build_sweep_spec(opt, preset, parameter, values, cache_pairs, policy_names, n_list),
          opt.out_dir);
      long contained = 0;
      for (const auto& p : points) contained += p.contains_asp ? 1 : 0;
      std::cout << contained << "/" << points.size() << " points inside the ASP bracket\n";
      return kExitOk;
    }
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
