#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cachenet/sweep.hpp"

using namespace cachenet;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

SweepSpec tiny_analytic_spec() {
  SweepSpec spec;
  spec.name = "tiny";
  spec.parameter = "upsilon";
  spec.values = {0.5, 1.0};
  spec.policies = {CachePolicy::MC};
  spec.n_list = {1};
  spec.engines = EngineMode::Analytic;
  spec.sides = {BoundSide::Lower};
  spec.trials = 10;
  return spec;
}

}  // namespace

TEST_CASE("all figure presets resolve and unknown names do not") {
  for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}) {
    REQUIRE(preset_spec(name).has_value());
  }
  CHECK(!preset_spec("fig8").has_value());
}

TEST_CASE("spec validation failures") {
  const NetworkConfig cfg = default_config();
  SweepSpec spec = tiny_analytic_spec();
  spec.values = {};
  CHECK_THROWS_AS(run_sweep(cfg, spec, "/tmp/cachenet_invalid"), std::invalid_argument);
  spec = tiny_analytic_spec();
  spec.values = {1.0, 0.5};
  CHECK_THROWS_AS(run_sweep(cfg, spec, "/tmp/cachenet_invalid"), std::invalid_argument);
  spec = tiny_analytic_spec();
  spec.parameter = "bogus";
  CHECK_THROWS_AS(run_sweep(cfg, spec, "/tmp/cachenet_invalid"), std::invalid_argument);
}

TEST_CASE("an analytic sweep writes CSVs and a manifest that re-executes identically") {
  const NetworkConfig cfg = default_config();
  const auto dir = fresh_dir("cachenet_sweep_a");
  run_sweep(cfg, tiny_analytic_spec(), dir.string());

  const std::string csv = slurp((dir / "tiny_MC_N1.csv").string());
  CHECK(csv.find(csv_header()) != std::string::npos);
  CHECK(csv.find("# lambda_mu = 5e-06") != std::string::npos);
  // two swept values, one side, analytic only
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  const auto preamble_rows = std::count(csv.begin(), csv.end(), '#');
  CHECK(rows - preamble_rows - 1 == 2);

  const auto dir2 = fresh_dir("cachenet_sweep_b");
  run_sweep_from_manifest((dir / "manifest.json").string(), dir2.string());
  CHECK(slurp((dir2 / "tiny_MC_N1.csv").string()) == csv);
  CHECK(slurp((dir2 / "manifest.json").string()) == slurp((dir / "manifest.json").string()));
}

TEST_CASE("sweep output is byte-identical across worker counts") {
  const NetworkConfig cfg = default_config();
  SweepSpec spec = tiny_analytic_spec();
  spec.name = "det";
  spec.engines = EngineMode::Both;
  spec.trials = 1500;
  spec.seed = 9;
  spec.workers = 1;
  const auto dir1 = fresh_dir("cachenet_det_1");
  run_sweep(cfg, spec, dir1.string());
  spec.workers = 4;
  const auto dir4 = fresh_dir("cachenet_det_4");
  run_sweep(cfg, spec, dir4.string());
  CHECK(slurp((dir1 / "det_MC_N1.csv").string()) == slurp((dir4 / "det_MC_N1.csv").string()));
}

TEST_CASE("doubles are printed with round-trip precision") {
  for (double x : {3.141592653589793, 1.0000000000000002, 4e6, 6.02e23, -1.5e-12}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("compare emits containment flags for every point") {
  const NetworkConfig cfg = default_config();
  SweepSpec spec = tiny_analytic_spec();
  spec.name = "cmp";
  spec.engines = EngineMode::Both;
  spec.sides = {BoundSide::Lower, BoundSide::Upper};
  spec.trials = 1200;
  const auto dir = fresh_dir("cachenet_cmp");
  const auto points = run_compare(cfg, spec, dir.string());
  CHECK(points.size() == 2);
  for (const auto& p : points) {
    CHECK(p.asp_lower <= p.asp_upper + 1e-9);
    CHECK(p.asp_sim >= 0.0);
    CHECK(p.asp_sim <= 1.0);
  }
  CHECK(std::filesystem::exists(dir / "compare.csv"));
}
