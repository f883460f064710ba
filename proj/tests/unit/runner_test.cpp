#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fluxqpt/csv.hpp"
#include "fluxqpt/error.hpp"
#include "fluxqpt/runner.hpp"

using namespace fluxqpt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fluxqpt-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_triangle(const fs::path& out) {
  auto c = default_config(Topology::triangle);
  c.grid_points = 101;
  c.out = out.string();
  return c;
}

}  // namespace

TEST(Csv, RoundTripIsExact) {
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  CsvTable t{{"a", "b"}, {{0.1, 1.0 / 3.0}, {-1e-300, 12345678901234567.0}, {std::sqrt(2.0), 0.0}}};
  write_csv(dir / "t.csv", t);
  const auto back = read_csv(dir / "t.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1U);
  EXPECT_THROW(back.column("c"), Error);
  fs::remove_all(dir);
}

TEST(Runner, TriangleDefaultsWitnessEndpoints) {
  const auto dir = scratch("triangle");
  auto c = small_triangle(dir);
  c.grid_points = 1001;
  const auto manifest = run(c);
  const auto w = read_csv(dir / "witness.csv");
  EXPECT_NEAR(w.rows.front()[1], std::sqrt(5.0) - 2.0, 1e-3);
  EXPECT_NEAR(w.rows.back()[1], std::sqrt(5.0) - 3.0, 1e-3);
  const auto p = read_csv(dir / "probabilities.csv");
  EXPECT_EQ(p.header.size(), 9U);
  for (const auto& row : p.rows) {
    double total = 0.0;
    for (std::size_t i = 1; i < row.size(); ++i) total += row[i];
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
  EXPECT_EQ(manifest.units, std::string(kUnitsConvention));
  fs::remove_all(dir);
}

TEST(Runner, AllMetricsOffWritesScheduleAndManifestOnly) {
  const auto dir = scratch("off");
  auto c = small_triangle(dir);
  c.chi_f = c.witness = c.macro = c.dynamics_verify = false;
  run(c);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"manifest.json", "schedule.csv"}));
  const auto s = read_csv(dir / "schedule.csv");
  EXPECT_EQ(s.header, (std::vector<std::string>{"t_ns", "s", "delta_ghz", "j_ghz"}));
  EXPECT_EQ(s.rows.size(), 101U);
  fs::remove_all(dir);
}

TEST(Runner, ManifestListsEveryFileAndRoundTripsConfig) {
  const auto dir = scratch("manifest");
  auto c = small_triangle(dir);
  c.dynamics_verify = true;
  c.shots = 500;
  run(c);
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  std::set<std::string> listed;
  for (const auto& [metric, name] : j["files"].items()) listed.insert(name.get<std::string>());
  std::set<std::string> present;
  for (const auto& entry : fs::directory_iterator(dir)) present.insert(entry.path().filename().string());
  EXPECT_EQ(listed, present);
  EXPECT_TRUE(present.contains("moments_sampled.csv"));
  EXPECT_TRUE(present.contains("dynamics.csv"));
  const auto again = validate_config(j["config"].dump());
  EXPECT_EQ(again.to_json(), c.to_json());
  EXPECT_TRUE(j.contains("units"));
  EXPECT_TRUE(j.contains("tool_version"));
  EXPECT_GT(j["summary"]["adiabatic_fidelity"].get<double>(), 0.99);
  fs::remove_all(dir);
}

TEST(Runner, BitIdenticalReruns) {
  const auto a = scratch("det-a");
  const auto b = scratch("det-b");
  auto ca = small_triangle(a);
  ca.shots = 100;
  auto cb = ca;
  cb.out = b.string();
  cb.threads = 3;
  run(ca);
  run(cb);
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Runner, FailureCleansUpPartialOutput) {
  const auto dir = scratch("fail");
  auto c = default_config(Topology::nn_nnn_chain, 12);
  c.out = dir.string();
  c.chi_f = false;
  ::setenv("FLUXQPT_MEMORY_BUDGET", "1K", 1);
  try {
    run(c);
    ADD_FAILURE() << "expected a memory-budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::memory_budget);
  }
  ::unsetenv("FLUXQPT_MEMORY_BUDGET");
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Runner, ChainWitnessHasOneColumnPerBlock) {
  const auto dir = scratch("chain");
  auto c = default_config(Topology::nn_nnn_chain, 5);
  c.grid_points = 11;
  c.out = dir.string();
  run(c);
  const auto w = read_csv(dir / "witness.csv");
  EXPECT_EQ(w.header, (std::vector<std::string>{"t_ns", "w_0_1_2", "w_1_2_3", "w_2_3_4"}));
  EXPECT_FALSE(fs::exists(dir / "probabilities.csv"));
  const auto m = read_csv(dir / "moments.csv");
  EXPECT_EQ(m.header.back(), "p_mu_5");
  fs::remove_all(dir);
}

TEST(SampleShots, Deterministic) {
  const auto h = paramagnetic_reference(5);
  const auto a = sample_shots(h, 1000, 9);
  const auto b = sample_shots(h, 1000, 9);
  EXPECT_EQ(a.probs(), b.probs());
  EXPECT_NE(a.probs(), sample_shots(h, 1000, 10).probs());
}

TEST(SampleShots, SingleShotIsDelta) {
  const auto h = sample_shots(paramagnetic_reference(3), 1, 4);
  int hits = 0;
  for (const double p : h.probs()) hits += p == 1.0 ? 1 : 0;
  EXPECT_EQ(hits, 1);
  EXPECT_EQ(h.support(), moment_support(3));
  EXPECT_THROW(sample_shots(h, 0, 1), Error);
}

TEST(SampleShots, LargeSampleWithinThreeSigma) {
  const auto h = paramagnetic_reference(3);
  const std::size_t shots = 1000000;
  const auto s = sample_shots(h, shots, 2024);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double p = h.probs()[i];
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    EXPECT_LT(std::abs(s.probs()[i] - p), 3.0 * sigma) << "bin " << h.support()[i];
  }
}
