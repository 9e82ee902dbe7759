#include "cachenet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "cachenet/qos.hpp"
#include "cachenet/rng.hpp"
#include "cachenet/simulator.hpp"

namespace cachenet {

namespace {

using nlohmann::ordered_json;

std::uint64_t derive_point_seed(std::uint64_t seed, std::uint64_t point) {
  RngStream stream = RngStream::substream(seed, point, 0x5eedULL);
  return stream.next_u64();
}

struct Row {
  double swept_value;
  std::string policy;
  std::string engine;
  std::string bound_side;
  double asp, asp_ci_lo, asp_ci_hi;
  double latency, latency_ci_lo, latency_ci_hi;
  double backhaul;
  long trials;
  std::uint64_t seed;
};

std::string row_to_csv(const Row& r) {
  std::ostringstream out;
  out << format_double(r.swept_value) << ',' << r.policy << ',' << r.engine << ','
      << r.bound_side << ',' << format_double(r.asp) << ',' << format_double(r.asp_ci_lo)
      << ',' << format_double(r.asp_ci_hi) << ',' << format_double(r.latency) << ','
      << format_double(r.latency_ci_lo) << ',' << format_double(r.latency_ci_hi) << ','
      << format_double(r.backhaul) << ',' << r.trials << ',' << r.seed;
  return out.str();
}

// Applies one sweep-point value onto a config copy.
NetworkConfig point_config(const NetworkConfig& base, const SweepSpec& spec,
                           std::size_t index, int n_retx) {
  NetworkConfig cfg = base;
  cfg.n_retx = n_retx;
  if (spec.parameter == "upsilon") {
    cfg.upsilon = spec.values[index];
  } else if (spec.parameter == "c1") {
    cfg.c1 = spec.values[index];
  } else if (spec.parameter == "beta") {
    cfg.beta = spec.values[index];
  } else if (spec.parameter == "nu") {
    cfg.nu = Eigen::ArrayXd::Constant(cfg.f_count, spec.values[index]);
  } else if (spec.parameter == "f_count") {
    cfg.f_count = static_cast<int>(spec.values[index]);
    cfg.nu = Eigen::ArrayXd::Constant(cfg.f_count, base.nu[0]);
    cfg.c_m = std::min(cfg.c_m, cfg.f_count);
    cfg.c_mu = std::min(cfg.c_mu, cfg.f_count);
  } else if (spec.parameter == "n_retx") {
    cfg.n_retx = static_cast<int>(spec.values[index]);
  } else if (spec.parameter == "cache") {
    cfg.c_mu = spec.cache_pairs[index].first;
    cfg.c_m = spec.cache_pairs[index].second;
  } else {
    throw std::invalid_argument("sweep: unknown parameter '" + spec.parameter + "'");
  }
  return cfg;
}

void validate_spec(const SweepSpec& spec) {
  const bool cache_sweep = spec.parameter == "cache";
  const std::size_t count = cache_sweep ? spec.cache_pairs.size() : spec.values.size();
  if (count == 0) throw std::invalid_argument("sweep: empty value list");
  if (!cache_sweep && !std::is_sorted(spec.values.begin(), spec.values.end())) {
    throw std::invalid_argument("sweep: value list must be sorted");
  }
  if (spec.policies.empty()) throw std::invalid_argument("sweep: no policies selected");
  if (spec.n_list.empty()) throw std::invalid_argument("sweep: empty n_retx list");
  if (spec.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  static const char* known[] = {"upsilon", "c1", "cache", "f_count", "nu", "beta", "n_retx"};
  if (std::find(std::begin(known), std::end(known), spec.parameter) == std::end(known)) {
    throw std::invalid_argument("sweep: unknown parameter '" + spec.parameter + "'");
  }
}

double swept_value_of(const SweepSpec& spec, std::size_t index) {
  return spec.parameter == "cache" ? static_cast<double>(spec.cache_pairs[index].second)
                                   : spec.values[index];
}

ordered_json config_json(const NetworkConfig& cfg) {
  ordered_json j;
  std::istringstream echo(echo_config(cfg));
  std::string line;
  while (std::getline(echo, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq - 1);
    j[key] = nlohmann::json::parse(line.substr(eq + 2));
  }
  return j;
}

ordered_json spec_json(const SweepSpec& spec) {
  ordered_json j;
  j["name"] = spec.name;
  j["parameter"] = spec.parameter;
  j["values"] = spec.values;
  ordered_json pairs = ordered_json::array();
  for (const auto& [c_mu, c_m] : spec.cache_pairs) pairs.push_back({c_mu, c_m});
  j["cache_pairs"] = pairs;
  std::vector<std::string> policies;
  for (const auto p : spec.policies) policies.emplace_back(to_string(p));
  j["policies"] = policies;
  j["n_list"] = spec.n_list;
  j["engines"] = to_string(spec.engines);
  std::vector<std::string> sides;
  for (const auto s : spec.sides) sides.emplace_back(to_string(s));
  j["sides"] = sides;
  j["trials"] = spec.trials;
  j["seed"] = spec.seed;
  j["rc_seed"] = spec.rc_seed;
  return j;
}

SweepSpec spec_from_json(const nlohmann::json& j) {
  SweepSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.parameter = j.at("parameter").get<std::string>();
  spec.values = j.at("values").get<std::vector<double>>();
  for (const auto& pair : j.at("cache_pairs")) {
    spec.cache_pairs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  spec.policies.clear();
  for (const auto& name : j.at("policies")) {
    const auto policy = parse_policy(name.get<std::string>());
    if (!policy) throw std::invalid_argument("manifest: unknown policy");
    spec.policies.push_back(*policy);
  }
  spec.n_list = j.at("n_list").get<std::vector<int>>();
  const auto engines = parse_engine_mode(j.at("engines").get<std::string>());
  if (!engines) throw std::invalid_argument("manifest: unknown engine mode");
  spec.engines = *engines;
  spec.sides.clear();
  for (const auto& side : j.at("sides")) {
    spec.sides.push_back(side.get<std::string>() == "upper" ? BoundSide::Upper
                                                            : BoundSide::Lower);
  }
  spec.trials = j.at("trials").get<long>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.rc_seed = j.at("rc_seed").get<std::uint64_t>();
  return spec;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string config_preamble(const NetworkConfig& cfg) {
  std::ostringstream out;
  std::istringstream echo(echo_config(cfg));
  std::string line;
  while (std::getline(echo, line)) out << "# " << line << "\n";
  return out.str();
}

}  // namespace

const char* to_string(EngineMode mode) {
  switch (mode) {
    case EngineMode::Analytic: return "analytic";
    case EngineMode::Simulate: return "simulate";
    case EngineMode::Both: return "both";
  }
  return "?";
}

std::optional<EngineMode> parse_engine_mode(const std::string& name) {
  if (name == "analytic") return EngineMode::Analytic;
  if (name == "simulate") return EngineMode::Simulate;
  if (name == "both") return EngineMode::Both;
  return std::nullopt;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_header() {
  return "swept_value,policy,engine,bound_side,asp,asp_ci_lo,asp_ci_hi,latency,"
         "latency_ci_lo,latency_ci_hi,backhaul_load,trials,seed";
}

std::optional<SweepSpec> preset_spec(const std::string& name) {
  SweepSpec spec;
  spec.name = name;
  auto linspace = [](double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
  };
  const std::vector<double> c1_grid = {1, 5, 10, 20, 40, 60, 90, 150, 300};
  if (name == "fig1") {
    spec.parameter = "upsilon";
    spec.values = linspace(0.1, 1.5, 15);
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::NoCache};
    spec.n_list = {1, 3, 5};
  } else if (name == "fig2") {
    spec.parameter = "c1";
    spec.values = c1_grid;
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::RC, CachePolicy::NoCache};
    spec.n_list = {1, 3};
  } else if (name == "fig3") {
    spec.parameter = "cache";
    spec.cache_pairs = {{3, 2}, {10, 8}, {17, 15}};
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::RC, CachePolicy::NoCache};
    spec.n_list = {1};
  } else if (name == "fig4") {
    spec.parameter = "f_count";
    spec.values = {10, 15, 20, 25, 30, 40};
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::NoCache};
    spec.n_list = {1, 3};
  } else if (name == "fig5") {
    spec.parameter = "nu";
    spec.values = {2.5e5, 5e5, 1e6, 2e6, 4e6, 8e6};
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::NoCache};
    spec.n_list = {1, 3};
  } else if (name == "fig6") {
    spec.parameter = "c1";
    spec.values = c1_grid;
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::NoCache};
    spec.n_list = {3};
  } else if (name == "fig7") {
    spec.parameter = "upsilon";
    spec.values = linspace(0.1, 1.5, 15);
    spec.policies = {CachePolicy::MC, CachePolicy::UC, CachePolicy::NoCache};
    spec.n_list = {1, 3, 5};
  } else {
    return std::nullopt;
  }
  return spec;
}

void run_sweep(const NetworkConfig& base, const SweepSpec& spec, const std::string& out_dir) {
  validate_spec(spec);
  std::filesystem::create_directories(out_dir);

  const std::size_t count =
      spec.parameter == "cache" ? spec.cache_pairs.size() : spec.values.size();

  AnalyticEngine engine(base);
  std::vector<std::string> outputs;

  std::uint64_t point_counter = 0;
  for (const int n : spec.n_list) {
    for (const CachePolicy policy : spec.policies) {
      std::ostringstream rows;
      NetworkConfig header_cfg = base;
      for (std::size_t v = 0; v < count; ++v) {
        NetworkConfig cfg = point_config(base, spec, v, n);
        if (v == 0) header_cfg = cfg;
        const Popularity pop = zipf_popularity(cfg.f_count, cfg.upsilon);
        const CacheProfile profile =
            make_cache_profile(policy, std::min(cfg.c_m, cfg.f_count),
                               std::min(cfg.c_mu, cfg.f_count), cfg.f_count, spec.rc_seed);
        const std::uint64_t point_seed = derive_point_seed(spec.seed, point_counter++);
        const double swept = swept_value_of(spec, v);

        try {
          if (spec.engines != EngineMode::Simulate) {
            for (const BoundSide side : spec.sides) {
              const QosReport q = engine.evaluate(cfg, pop, profile, side);
              Row row{swept,          to_string(policy), "analytic",     to_string(side),
                      q.asp_retx,     q.asp_retx,        q.asp_retx,     q.latency_mean,
                      q.latency_mean, q.latency_mean,    q.backhaul_load, 0,
                      spec.seed};
              rows << row_to_csv(row) << "\n";
            }
          }
          if (spec.engines != EngineMode::Analytic) {
            const SimReport s =
                run_trials(cfg, pop, profile, spec.trials, point_seed, spec.workers);
            Row row{swept,          to_string(policy), "simulate",     "none",
                    s.asp,          s.asp_ci_lo,       s.asp_ci_hi,    s.latency_mean,
                    s.latency_ci_lo, s.latency_ci_hi,  s.backhaul_load, s.trials,
                    point_seed};
            rows << row_to_csv(row) << "\n";
          }
        } catch (const NumericFailure& e) {
          throw NumericFailure("sweep point (policy=" + std::string(to_string(policy)) +
                                   ", value=" + format_double(swept) + "): " + e.what(),
                               e.partial(), e.error_estimate());
        }
      }
      std::ostringstream file_name;
      file_name << spec.name << "_" << to_string(policy);
      if (spec.parameter != "n_retx") file_name << "_N" << n;
      file_name << ".csv";
      const std::string path = out_dir + "/" + file_name.str();
      write_file(path, config_preamble(header_cfg) + csv_header() + "\n" + rows.str());
      outputs.push_back(file_name.str());
    }
  }

  ordered_json manifest;
  manifest["config"] = config_json(base);
  manifest["sweep"] = spec_json(spec);
  manifest["outputs"] = outputs;
  write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

void run_sweep_from_manifest(const std::string& manifest_path, const std::string& out_dir) {
  std::ifstream in(manifest_path);
  if (!in) throw std::invalid_argument("cannot open manifest: " + manifest_path);
  nlohmann::json manifest = nlohmann::json::parse(in);
  std::ostringstream cfg_text;
  for (const auto& [key, value] : manifest.at("config").items()) {
    cfg_text << key << " = " << value.dump() << "\n";
  }
  const NetworkConfig cfg = parse_config(cfg_text.str());
  const SweepSpec spec = spec_from_json(manifest.at("sweep"));
  run_sweep(cfg, spec, out_dir);
}

std::vector<ComparePoint> run_compare(const NetworkConfig& base, const SweepSpec& spec,
                                      const std::string& out_dir) {
  validate_spec(spec);
  std::filesystem::create_directories(out_dir);
  const std::size_t count =
      spec.parameter == "cache" ? spec.cache_pairs.size() : spec.values.size();

  AnalyticEngine engine(base);
  std::vector<ComparePoint> points;
  std::uint64_t point_counter = 0;
  for (const int n : spec.n_list) {
    for (const CachePolicy policy : spec.policies) {
      for (std::size_t v = 0; v < count; ++v) {
        NetworkConfig cfg = point_config(base, spec, v, n);
        const Popularity pop = zipf_popularity(cfg.f_count, cfg.upsilon);
        const CacheProfile profile =
            make_cache_profile(policy, std::min(cfg.c_m, cfg.f_count),
                               std::min(cfg.c_mu, cfg.f_count), cfg.f_count, spec.rc_seed);
        const std::uint64_t point_seed = derive_point_seed(spec.seed, point_counter++);

        const QosReport lower = engine.evaluate(cfg, pop, profile, BoundSide::Lower);
        const QosReport upper = engine.evaluate(cfg, pop, profile, BoundSide::Upper);
        const SimReport sim =
            run_trials(cfg, pop, profile, spec.trials, point_seed, spec.workers);

        ComparePoint p;
        p.swept_value = swept_value_of(spec, v);
        p.policy = policy;
        p.n_retx = cfg.n_retx;
        p.asp_lower = lower.asp_retx;
        p.asp_upper = upper.asp_retx;
        p.asp_sim = sim.asp;
        p.asp_ci_lo = sim.asp_ci_lo;
        p.asp_ci_hi = sim.asp_ci_hi;
        // Upper-bound success probabilities give the shorter latency.
        p.latency_lo = upper.latency_mean;
        p.latency_hi = lower.latency_mean;
        p.latency_sim = sim.latency_mean;
        p.latency_ci_lo = sim.latency_ci_lo;
        p.latency_ci_hi = sim.latency_ci_hi;
        p.backhaul_analytic = lower.backhaul_load;
        p.backhaul_sim = sim.backhaul_load;
        p.backhaul_ci_lo = sim.backhaul_ci_lo;
        p.backhaul_ci_hi = sim.backhaul_ci_hi;
        p.contains_asp = p.asp_ci_hi >= p.asp_lower && p.asp_ci_lo <= p.asp_upper;
        p.contains_latency =
            p.latency_ci_hi >= p.latency_lo && p.latency_ci_lo <= p.latency_hi;
        p.contains_backhaul =
            p.backhaul_ci_lo <= p.backhaul_analytic && p.backhaul_analytic <= p.backhaul_ci_hi;
        points.push_back(p);
      }
    }
  }

  std::ostringstream out;
  out << config_preamble(base);
  out << "swept_value,policy,n_retx,asp_lower,asp_upper,asp_sim,asp_ci_lo,asp_ci_hi,"
         "contains_asp,latency_lo,latency_hi,latency_sim,latency_ci_lo,latency_ci_hi,"
         "contains_latency,backhaul_analytic,backhaul_sim,backhaul_ci_lo,backhaul_ci_hi,"
         "contains_backhaul\n";
  for (const auto& p : points) {
    out << format_double(p.swept_value) << ',' << to_string(p.policy) << ',' << p.n_retx
        << ',' << format_double(p.asp_lower) << ',' << format_double(p.asp_upper) << ','
        << format_double(p.asp_sim) << ',' << format_double(p.asp_ci_lo) << ','
        << format_double(p.asp_ci_hi) << ',' << (p.contains_asp ? "true" : "false") << ','
        << format_double(p.latency_lo) << ',' << format_double(p.latency_hi) << ','
        << format_double(p.latency_sim) << ',' << format_double(p.latency_ci_lo) << ','
        << format_double(p.latency_ci_hi) << ',' << (p.contains_latency ? "true" : "false")
        << ',' << format_double(p.backhaul_analytic) << ',' << format_double(p.backhaul_sim)
        << ',' << format_double(p.backhaul_ci_lo) << ',' << format_double(p.backhaul_ci_hi)
        << ',' << (p.contains_backhaul ? "true" : "false") << "\n";
  }
  write_file(out_dir + "/compare.csv", out.str());

  ordered_json manifest;
  manifest["config"] = config_json(base);
  manifest["sweep"] = spec_json(spec);
  manifest["outputs"] = std::vector<std::string>{"compare.csv"};
  write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return points;
}

void write_single_point_csv(const std::string& path, const NetworkConfig& cfg,
                            const std::string& /*policy*/, const std::vector<std::string>& rows) {
  std::ostringstream out;
  out << config_preamble(cfg) << csv_header() << "\n";
  for (const auto& row : rows) out << row << "\n";
  write_file(path, out.str());
}

}  // namespace cachenet
