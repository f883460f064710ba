#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fluxqpt/dynamics.hpp"
#include "fluxqpt/spin_network.hpp"

namespace fluxqpt {

inline constexpr std::size_t kMaxConfiguredSites = 24;

/// One experiment. Serialized as a flat JSON object whose keys match the field
/// names below (`edges` is a list of [i, j] pairs, `ramp` the shape name).
struct ExperimentConfig {
  Topology topology = Topology::triangle;
  std::size_t n = 3;
  std::vector<Edge> edges;             // custom topology only
  std::vector<double> coupling_scale;  // per edge, empty = all ones
  std::vector<double> epsilon;         // per site, empty = all zero

  ControlSchedule schedule;
  std::size_t grid_points = 1001;

  bool chi_f = true;
  bool witness = true;
  bool macro = true;
  bool dynamics_verify = false;

  double delta_s = 1e-4;
  double smoothing = 1e-12;
  double dt = 1e-3;   // ns
  double gap_tol = 1e-9;  // GHz
  double fidelity_threshold = 0.99;

  std::size_t shots = 0;  // 0 disables finite-shot sampling
  std::uint64_t seed = 20240101;
  std::size_t threads = 1;
  std::string out = "fluxqpt-out";

  SpinNetwork network() const;
  SweepModel model() const;

  /// Range checks on an already populated config; messages name the key.
  void validate() const;

  /// Fully resolved config as a JSON object (2-space indent).
  std::string to_json() const;
};

/// Parses, defaults and range-checks a JSON config. Unknown keys, wrong types
/// and out-of-range values raise Error(config) naming the key.
ExperimentConfig validate_config(std::string_view raw);

/// Defaults for a topology: the triangle, or the 12-site chain when
/// `topology` is nn-nnn-chain.
ExperimentConfig default_config(Topology topology, std::size_t n = 0);

}  // namespace fluxqpt
