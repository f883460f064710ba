#include <gtest/gtest.h>

#include "fluxqpt/config.hpp"
#include "fluxqpt/error.hpp"

using namespace fluxqpt;

namespace {

std::string config_error(const std::string& raw) {
  try {
    validate_config(raw);
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << raw;
  return {};
}

}  // namespace

TEST(Config, MinimalTriangleResolvesDefaults) {
  const auto c = validate_config(R"({"topology": "triangle"})");
  EXPECT_EQ(c.topology, Topology::triangle);
  EXPECT_EQ(c.n, 3U);
  EXPECT_EQ(c.schedule.t_final, 50.0);
  EXPECT_EQ(c.schedule.delta_max, 5.0);
  EXPECT_EQ(c.schedule.j_max, 5.0);
  EXPECT_EQ(c.schedule.delta_floor, 5e-6);
  EXPECT_EQ(c.grid_points, 1001U);
  EXPECT_EQ(c.delta_s, 1e-4);
  EXPECT_EQ(c.shots, 0U);
}

TEST(Config, ChainPresetIsTwelveSites) {
  EXPECT_EQ(validate_config(R"({"topology": "nn-nnn-chain"})").n, 12U);
  EXPECT_EQ(validate_config(R"({"topology": "nn-nnn-chain", "n": 6})").n, 6U);
}

TEST(Config, RoundTripThroughJson) {
  const auto c = validate_config(
      R"({"topology": "custom", "n": 4, "edges": [[0, 1], [2, 3]], "coupling_scale": [1.0, 0.5],
          "epsilon": [0, 0, 0.1, 0], "dt": 0.002, "shots": 100, "seed": 7, "out": "x"})");
  const auto again = validate_config(c.to_json());
  EXPECT_EQ(again.to_json(), c.to_json());
  EXPECT_EQ(again.edges.size(), 2U);
  EXPECT_EQ(again.model().network.edges().size(), 2U);
}

TEST(Config, RangeErrorsNameTheKey) {
  EXPECT_NE(config_error(R"({"topology": "nn-nnn-chain", "n": 0})").find("n:"), std::string::npos);
  EXPECT_NE(config_error(R"({"delta_s": 0})").find("delta_s"), std::string::npos);
  EXPECT_NE(config_error(R"({"t_final": -1})").find("t_final"), std::string::npos);
  EXPECT_NE(config_error(R"({"grid_points": 1})").find("grid_points"), std::string::npos);
  EXPECT_NE(config_error(R"({"topology": "nn-nnn-chain", "n": 99})").find("n:"), std::string::npos);
  EXPECT_NE(config_error(R"({"topology": "triangle", "n": 4})").find("n:"), std::string::npos);
  EXPECT_NE(config_error(R"({"smoothing": 0})").find("smoothing"), std::string::npos);
  EXPECT_NE(config_error(R"({"threads": 0})").find("threads"), std::string::npos);
}

TEST(Config, UnknownKeysAndWrongTypes) {
  EXPECT_NE(config_error(R"({"deltaS": 0.1})").find("deltaS"), std::string::npos);
  EXPECT_NE(config_error(R"({"chi_f": "yes"})").find("chi_f"), std::string::npos);
  EXPECT_NE(config_error(R"({"n": 3.5})").find("n:"), std::string::npos);
  EXPECT_NE(config_error(R"({"topology": "ring"})").find("topology"), std::string::npos);
  EXPECT_NE(config_error(R"({"edges": [[0, 1]]})").find("edges"), std::string::npos);
  EXPECT_NE(config_error(R"({"coupling_scale": [1, 2]})").find("coupling_scale"), std::string::npos);
  EXPECT_FALSE(config_error("[1, 2]").empty());
  EXPECT_FALSE(config_error("{not json").empty());
}
