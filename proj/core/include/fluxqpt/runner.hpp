#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fluxqpt/config.hpp"
#include "fluxqpt/observables.hpp"

namespace fluxqpt {

std::string_view version() noexcept;

struct RunManifest {
  ExperimentConfig config;
  std::string tool_version;
  std::string units;
  double duration_seconds = 0.0;
  std::map<std::string, std::string> files;  // metric -> file name inside config.out
  std::vector<std::string> warnings;
  std::map<std::string, double> summary;     // headline numbers, e.g. final witness value

  std::string to_json() const;
};

/// Runs every enabled metric and writes one CSV per metric plus manifest.json
/// into config.out. On failure every file written so far is removed and the
/// error is rethrown.
///
/// CSV schemas (header row first, 17 significant digits):
///   schedule.csv         t_ns, s, delta_ghz, j_ghz
///   chi.csv              s, t_ns, chi_f, chi_f_derivative, min_gap_ghz, flagged, precision_warning
///   witness.csv          t_ns, w_<a>_<b>_<c> per contiguous three-site block
///   probabilities.csv    t_ns, p_<labels> for the 8 basis states (3 sites only)
///   moments.csv          t_ns, p_mu_<m> for m = -n, -n+2, ..., n
///   moments_sampled.csv  same columns, finite-shot estimate (shots > 0)
///   macro.csv            t_ns, d_nats, alpha
///   dynamics.csv         t_ns, fidelity
RunManifest run(const ExperimentConfig& config);

/// Empirical histogram of `shots` independent draws from h, using a 64-bit
/// Mersenne Twister seeded with `seed`. Throws Error(config) for shots = 0.
MomentHistogram sample_shots(const MomentHistogram& h, std::size_t shots, std::uint64_t seed);

}  // namespace fluxqpt
