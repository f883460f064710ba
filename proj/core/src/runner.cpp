#include "fluxqpt/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <json.hpp>

#include "fluxqpt/csv.hpp"
#include "fluxqpt/dynamics.hpp"
#include "fluxqpt/error.hpp"
#include "fluxqpt/qpt_metrics.hpp"

#ifndef FLUXQPT_VERSION
#define FLUXQPT_VERSION "0.0.0"
#endif

namespace fluxqpt {

namespace fs = std::filesystem;

std::string_view version() noexcept { return FLUXQPT_VERSION; }

std::string RunManifest::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  j["config"] = nlohmann::json::parse(config.to_json());
  j["tool_version"] = tool_version;
  j["units"] = units;
  j["duration_seconds"] = duration_seconds;
  j["files"] = files;
  j["warnings"] = warnings;
  j["summary"] = summary;
  return j.dump(2);
}

MomentHistogram sample_shots(const MomentHistogram& h, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error(ErrorCategory::config, "shots: must be at least 1");
  const auto& probs = h.probs();
  std::vector<double> cdf(probs.size());
  double running = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = running += probs[i];

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> counts(probs.size(), 0);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    // 53 random bits mapped to [0, total); identical on every platform.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
    std::size_t bin = 0;
    while (bin + 1 < cdf.size() && !(u < cdf[bin])) ++bin;
    ++counts[bin];
  }
  std::vector<std::pair<int, double>> weights;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weights.emplace_back(h.support()[i], static_cast<double>(counts[i]));
  }
  return MomentHistogram::from_weights(h.sites(), std::move(weights));
}

namespace {

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    if (!fs::exists(dir_, ec)) {
      if (!fs::create_directories(dir_, ec)) {
        throw Error(ErrorCategory::io, "cannot create output directory " + dir_.string());
      }
      created_dir_ = true;
    } else if (!fs::is_directory(dir_, ec)) {
      throw Error(ErrorCategory::io, dir_.string() + " exists and is not a directory");
    }
  }

  void write(RunManifest& manifest, const std::string& metric, const std::string& name,
             const CsvTable& table) {
    written_.push_back(dir_ / name);
    write_csv(dir_ / name, table);
    manifest.files[metric] = name;
  }

  void write_text(const std::string& name, const std::string& text) {
    written_.push_back(dir_ / name);
    std::ofstream out(dir_ / name, std::ios::trunc);
    out << text << '\n';
    if (!out) throw Error(ErrorCategory::io, "write failed for " + (dir_ / name).string());
  }

  void discard() noexcept {
    std::error_code ec;
    for (const auto& path : written_) fs::remove(path, ec);
    if (created_dir_) fs::remove(dir_, ec);
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool created_dir_ = false;
};

std::string block_name(const std::array<std::size_t, 3>& block) {
  return "w_" + std::to_string(block[0]) + "_" + std::to_string(block[1]) + "_" +
         std::to_string(block[2]);
}

std::vector<std::string> moment_header(std::size_t n) {
  std::vector<std::string> header{"t_ns"};
  for (const int mu : moment_support(n)) header.push_back("p_mu_" + std::to_string(mu));
  return header;
}

void count_flags(RunManifest& manifest, const std::vector<bool>& flags, const std::string& what) {
  std::size_t count = 0;
  for (const bool f : flags) count += f ? 1 : 0;
  if (count > 0) {
    manifest.warnings.push_back(what + ": " + std::to_string(count) + " of " +
                                std::to_string(flags.size()) + " points have a degenerate ground state");
  }
}

void run_metrics(const ExperimentConfig& config, OutputSet& out, RunManifest& manifest) {
  const auto model = config.model();
  const std::size_t n = model.network.size();
  // Refuse early when the Hamiltonian would not fit the memory budget.
  (void)build_hamiltonian(model.network, params_at_fraction(model.network, model.schedule, 0.0,
                                                            model.coupling_scale, model.epsilon));

  EigenOptions eigen;
  eigen.gap_tol = config.gap_tol;
  eigen.seed = config.seed;

  const auto grid = uniform_grid(config.schedule.t_final, config.grid_points);
  {
    CsvTable table{{"t_ns", "s", "delta_ghz", "j_ghz"}, {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(grid.size() - 1);
      const auto point = schedule_at_fraction(config.schedule, s);
      table.rows.push_back({grid[k], s, point.delta, point.j});
    }
    out.write(manifest, "schedule", "schedule.csv", table);
  }

  if (config.chi_f) {
    const auto trace = chi_trace(model, config.grid_points, config.delta_s, eigen, config.threads);
    CsvTable table{{"s", "t_ns", "chi_f", "chi_f_derivative", "min_gap_ghz", "flagged",
                    "precision_warning"},
                   {}};
    double peak = -1.0;
    double peak_s = 0.0;
    for (std::size_t k = 0; k < trace.s.size(); ++k) {
      table.rows.push_back({trace.s[k], trace.times[k], trace.chi[k], trace.chi_derivative[k],
                            trace.min_gap[k], trace.flagged[k] ? 1.0 : 0.0,
                            trace.precision_warning[k] ? 1.0 : 0.0});
      if (!trace.flagged[k] && trace.chi[k] > peak) {
        peak = trace.chi[k];
        peak_s = trace.s[k];
      }
    }
    out.write(manifest, "chi_f", "chi.csv", table);
    manifest.summary["chi_f_peak"] = peak;
    manifest.summary["chi_f_peak_s"] = peak_s;
    count_flags(manifest, trace.flagged, "chi_f");
    count_flags(manifest, trace.precision_warning, "chi_f precision");
  }

  std::optional<Trajectory> tracked;
  if (config.witness || config.macro) {
    tracked = track_ground_state(model, config.grid_points, eigen);
    count_flags(manifest, tracked->flagged, "ground-state tracking");
  }

  if (config.witness) {
    if (n < 3) {
      manifest.warnings.push_back("witness: needs at least 3 sites, skipped");
    } else {
      const auto blocks = contiguous_blocks(n);
      CsvTable table{{"t_ns"}, {}};
      for (const auto& block : blocks) table.header.push_back(block_name(block));
      for (std::size_t k = 0; k < tracked->times.size(); ++k) {
        std::vector<double> row{tracked->times[k]};
        for (const auto& block : blocks) {
          const auto& psi = tracked->states[k];
          row.push_back(n == 3 ? witness_expectation(psi).value
                               : witness_expectation(reduce_to_block(psi, block)).value);
        }
        table.rows.push_back(std::move(row));
      }
      manifest.summary["witness_initial"] = table.rows.front()[1];
      manifest.summary["witness_final"] = table.rows.back()[1];
      out.write(manifest, "witness", "witness.csv", table);
    }
  }

  if (tracked && n == 3) {
    CsvTable table{{"t_ns"}, {}};
    for (std::size_t b = 0; b < 8; ++b) table.header.push_back("p_" + basis_label(b, 3));
    for (std::size_t k = 0; k < tracked->times.size(); ++k) {
      std::vector<double> row{tracked->times[k]};
      for (const double p : computational_basis_probabilities(tracked->states[k])) row.push_back(p);
      table.rows.push_back(std::move(row));
    }
    out.write(manifest, "probabilities", "probabilities.csv", table);
  }

  if (config.macro) {
    std::vector<MomentHistogram> histograms;
    CsvTable moments{moment_header(n), {}};
    for (std::size_t k = 0; k < tracked->times.size(); ++k) {
      histograms.push_back(moment_distribution(tracked->states[k]));
      std::vector<double> row{tracked->times[k]};
      for (const double p : histograms.back().probs()) row.push_back(p);
      moments.rows.push_back(std::move(row));
    }
    out.write(manifest, "moments", "moments.csv", moments);

    const auto trace = macro_trace(tracked->times, histograms, config.smoothing);
    CsvTable table{{"t_ns", "d_nats", "alpha"}, {}};
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
      table.rows.push_back({trace.times[k], trace.d[k], trace.alpha[k]});
    }
    out.write(manifest, "macro", "macro.csv", table);
    manifest.summary["d_initial"] = trace.d.front();
    manifest.summary["d_final"] = trace.d.back();
    manifest.summary["alpha_final"] = trace.final_fit.alpha;

    if (config.shots > 0) {
      CsvTable sampled{moment_header(n), {}};
      for (std::size_t k = 0; k < histograms.size(); ++k) {
        const auto h = sample_shots(histograms[k], config.shots, config.seed + k);
        std::vector<double> row{tracked->times[k]};
        for (const double p : h.probs()) row.push_back(p);
        sampled.rows.push_back(std::move(row));
      }
      out.write(manifest, "moments_sampled", "moments_sampled.csv", sampled);
    }
  }

  if (config.dynamics_verify) {
    const StateVector psi0 =
        tracked ? tracked->states.front()
                : ground_state(model.hamiltonian_at_fraction(0.0), 1, eigen).eigenvectors[0];
    EvolveOptions options;
    options.dt = config.dt;
    options.eigen = eigen;
    options.record_every = std::numeric_limits<std::size_t>::max();
    try {
      const auto report = evolve_schrodinger(model, psi0, options);
      CsvTable table{{"t_ns", "fidelity"}, {}};
      for (std::size_t k = 0; k < report.reference_times.size(); ++k) {
        table.rows.push_back({report.reference_times[k], report.reference_fidelity[k]});
      }
      out.write(manifest, "dynamics", "dynamics.csv", table);
      manifest.summary["adiabatic_fidelity"] = report.adiabatic_fidelity;
      manifest.summary["norm_drift"] = report.norm_drift;
      if (report.adiabatic_fidelity < config.fidelity_threshold) {
        manifest.warnings.push_back("dynamics: adiabatic fidelity " +
                                    format_double(report.adiabatic_fidelity) +
                                    " is below fidelity_threshold " +
                                    format_double(config.fidelity_threshold));
      }
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::accuracy) throw;
      manifest.warnings.push_back(std::string("dynamics: ") + e.what());
    }
  }
}

}  // namespace

RunManifest run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  RunManifest manifest;
  manifest.config = config;
  manifest.tool_version = std::string(version());
  manifest.units = std::string(kUnitsConvention);

  OutputSet out{fs::path(config.out)};
  try {
    run_metrics(config, out, manifest);
    manifest.files["manifest"] = "manifest.json";
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.write_text("manifest.json", manifest.to_json());
  } catch (...) {
    out.discard();
    throw;
  }
  return manifest;
}

}  // namespace fluxqpt
