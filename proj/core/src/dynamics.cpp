#include "fluxqpt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

std::string_view to_string(RampShape shape) noexcept {
  switch (shape) {
    case RampShape::linear: return "linear";
  }
  return "linear";
}

RampShape parse_ramp_shape(std::string_view text) {
  if (text == "linear") return RampShape::linear;
  throw Error(ErrorCategory::config, "ramp: unknown shape '" + std::string(text) + "'");
}

void ControlSchedule::validate() const {
  const auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCategory::config, std::string(key) + ": must be positive and finite");
    }
  };
  const auto non_negative = [](double v, const char* key) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCategory::config, std::string(key) + ": must be non-negative and finite");
    }
  };
  positive(t_final, "t_final");
  positive(delta_floor, "delta_floor");
  positive(j_floor, "j_floor");
  non_negative(delta_max, "delta_max");
  non_negative(j_max, "j_max");
}

ControlSchedule ControlSchedule::constant(double delta, double j, double t_final) {
  ControlSchedule schedule;
  schedule.t_final = t_final;
  schedule.delta_max = 0.0;
  schedule.j_max = 0.0;
  schedule.delta_floor = delta;
  schedule.j_floor = j;
  return schedule;
}

ControlPoint schedule_at_fraction(const ControlSchedule& schedule, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCategory::config,
                "schedule fraction " + std::to_string(s) + " outside [0, 1]");
  }
  return {schedule.delta_max * (1.0 - s) + schedule.delta_floor,
          schedule.j_max * s + schedule.j_floor};
}

ControlPoint schedule_at(const ControlSchedule& schedule, double t) {
  if (!(t >= 0.0 && t <= schedule.t_final)) {
    throw Error(ErrorCategory::config, "time " + std::to_string(t) + " ns outside [0, " +
                                           std::to_string(schedule.t_final) + "]");
  }
  return schedule_at_fraction(schedule, t / schedule.t_final);
}

ControlParams params_at_fraction(const SpinNetwork& network, const ControlSchedule& schedule,
                                 double s, std::span<const double> coupling_scale,
                                 std::span<const double> epsilon) {
  const auto point = schedule_at_fraction(schedule, s);
  auto params = ControlParams::uniform(network, 0.0, point.delta, point.j);
  if (!coupling_scale.empty()) {
    if (coupling_scale.size() != params.j.size()) {
      throw Error(ErrorCategory::dimension, "coupling_scale: expected one entry per edge");
    }
    for (std::size_t e = 0; e < params.j.size(); ++e) params.j[e] *= coupling_scale[e];
  }
  if (!epsilon.empty()) {
    if (epsilon.size() != params.epsilon.size()) {
      throw Error(ErrorCategory::dimension, "epsilon: expected one entry per site");
    }
    params.epsilon.assign(epsilon.begin(), epsilon.end());
  }
  return params;
}

SparseOperator SweepModel::hamiltonian_at_fraction(double s) const {
  return build_hamiltonian(network, params_at_fraction(network, schedule, s, coupling_scale, epsilon));
}

SparseOperator SweepModel::hamiltonian_at(double t) const {
  (void)schedule_at(schedule, t);
  return hamiltonian_at_fraction(t / schedule.t_final);
}

std::vector<double> uniform_grid(double t_final, std::size_t grid_points) {
  if (grid_points < 2) {
    throw Error(ErrorCategory::config, "grid_points: need at least 2, got " +
                                           std::to_string(grid_points));
  }
  std::vector<double> grid(grid_points);
  const double last = static_cast<double>(grid_points - 1);
  for (std::size_t k = 0; k < grid_points; ++k) grid[k] = t_final * (static_cast<double>(k) / last);
  return grid;
}

Trajectory track_ground_state(const SweepModel& model, std::size_t grid_points,
                              const EigenOptions& options) {
  model.schedule.validate();
  Trajectory trajectory;
  trajectory.source = TrajectorySource::tracked;
  trajectory.times = uniform_grid(model.schedule.t_final, grid_points);

  EigenOptions local = options;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(grid_points - 1);
    const auto h = model.hamiltonian_at_fraction(s);
    local.warm_start = trajectory.states.empty() ? options.warm_start : &trajectory.states.back();
    const auto result = ground_state(h, 1, local);
    if (k == 0 && result.parities[0] != Parity::none) local.parity = result.parities[0];

    StateVector state = result.eigenvectors[0];
    if (!trajectory.states.empty() &&
        inner(trajectory.states.back().amplitudes(), state.amplitudes()).real() < 0.0) {
      state = state.with_phase(-1.0);
    }
    trajectory.states.push_back(std::move(state));
    trajectory.energies.push_back(result.eigenvalues[0]);
    trajectory.gaps.push_back(result.sector_gap);
    trajectory.flagged.push_back(result.degenerate_flag);
  }
  return trajectory;
}

namespace {

/// Piecewise-linear interpolant on a uniform grid with an exact running integral.
class PiecewiseLinear {
 public:
  PiecewiseLinear(double t_final, std::vector<double> values)
      : step_(t_final / static_cast<double>(values.size() - 1)), values_(std::move(values)) {
    cumulative_.assign(values_.size(), 0.0);
    for (std::size_t k = 1; k < values_.size(); ++k) {
      cumulative_[k] = cumulative_[k - 1] + 0.5 * step_ * (values_[k - 1] + values_[k]);
    }
  }

  double value(double t) const {
    const auto [k, u] = locate(t);
    return values_[k] + u * (values_[k + 1] - values_[k]);
  }

  double integral(double t) const {
    const auto [k, u] = locate(t);
    const double dt = u * step_;
    return cumulative_[k] + dt * values_[k] + 0.5 * dt * u * (values_[k + 1] - values_[k]);
  }

 private:
  std::pair<std::size_t, double> locate(double t) const {
    const double x = std::clamp(t / step_, 0.0, static_cast<double>(values_.size() - 1));
    auto k = static_cast<std::size_t>(x);
    if (k >= values_.size() - 1) k = values_.size() - 2;
    return {k, x - static_cast<double>(k)};
  }

  double step_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// H(s) = delta(s) T + J(s) diag(C) + diag(B) with T = -sum sigma^x, C the
/// scaled sz-sz couplings and B the bias term, so stages need no rebuild.
class SweepGenerator {
 public:
  explicit SweepGenerator(const SweepModel& model) : schedule_(model.schedule) {
    const auto& net = model.network;
    const std::vector<double> ones(net.size(), 1.0);
    transverse_ = build_pauli_sum(net, Axis::x, ones);
    const auto edges = net.edges();
    coupling_.assign(net.dim(), 0.0);
    bias_.assign(net.dim(), 0.0);
    for (std::size_t b = 0; b < net.dim(); ++b) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const double scale = model.coupling_scale.empty() ? 1.0 : model.coupling_scale[e];
        coupling_[b] += scale * spin_z(b, edges[e].i) * spin_z(b, edges[e].j);
      }
      for (std::size_t i = 0; i < model.epsilon.size(); ++i) {
        bias_[b] -= model.epsilon[i] * spin_z(b, i);
      }
    }
  }

  // out = -i 2 pi (H(s) - shift) psi
  void derivative(double s, double shift, std::span<const Complex> psi,
                  std::span<Complex> out) const {
    const auto point = schedule_at_fraction(schedule_, std::min(1.0, s));
    fluxqpt::apply(transverse_, psi, out);
    const Complex factor{0.0, -2.0 * std::numbers::pi};
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double diagonal = point.j * coupling_[i] + bias_[i] - shift;
      out[i] = factor * (-point.delta * out[i] + diagonal * psi[i]);
    }
  }

 private:
  ControlSchedule schedule_;
  SparseOperator transverse_;
  std::vector<double> coupling_;
  std::vector<double> bias_;
};

}  // namespace

EvolutionReport evolve_schrodinger(const SweepModel& model, const StateVector& psi0,
                                   const EvolveOptions& options) {
  model.schedule.validate();
  if (!(options.dt > 0.0)) throw Error(ErrorCategory::config, "dt: must be positive");
  if (psi0.dim() != model.network.dim()) {
    throw Error(ErrorCategory::dimension, "initial state dimension does not match the network");
  }
  const double t_final = model.schedule.t_final;
  const std::size_t intervals = std::max<std::size_t>(2, options.reference_points) - 1;
  const auto per_interval = static_cast<std::size_t>(
      std::ceil(t_final / static_cast<double>(intervals) / options.dt - 1e-9));
  const std::size_t steps = intervals * std::max<std::size_t>(1, per_interval);
  const double h = t_final / static_cast<double>(steps);

  EvolutionReport report;
  const auto reference = track_ground_state(model, intervals + 1, options.eigen);
  report.reference_times = reference.times;
  const PiecewiseLinear frame_energy(
      t_final, options.frame == PhaseFrame::ground ? reference.energies
                                                   : std::vector<double>(intervals + 1, 0.0));

  std::vector<Complex> psi(psi0.amplitudes().begin(), psi0.amplitudes().end());
  const std::size_t dim = psi.size();
  std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  const auto lab_state = [&](double t) {
    // Undo the frame: psi_lab = psi_frame * exp(-i 2 pi int_0^t E0).
    const double phase = -2.0 * std::numbers::pi * frame_energy.integral(t);
    std::vector<Complex> out(psi);
    const Complex rotation = std::polar(1.0, phase);
    for (auto& a : out) a *= rotation;
    return out;
  };
  const auto record = [&](double t) {
    auto lab = lab_state(t);
    const auto hamiltonian = model.hamiltonian_at_fraction(std::min(1.0, t / t_final));
    report.trajectory.times.push_back(t);
    report.trajectory.energies.push_back(expectation(hamiltonian, lab) / std::pow(norm(lab), 2));
    report.trajectory.states.push_back(StateVector::normalized(std::move(lab)));
  };
  const auto reference_overlap = [&](std::size_t idx, double t) {
    const auto lab = lab_state(t);
    return std::norm(inner(reference.states[idx].amplitudes(), lab));
  };

  report.trajectory.source = TrajectorySource::integrated;
  record(0.0);
  report.reference_fidelity.push_back(reference_overlap(0, 0.0));

  const SweepGenerator generator(model);
  for (std::size_t step = 0; step < steps; ++step) {
    const double t = h * static_cast<double>(step);
    const double t_mid = t + 0.5 * h;
    const double t_end = step + 1 == steps ? t_final : h * static_cast<double>(step + 1);
    const double c0 = frame_energy.value(t);
    const double c1 = frame_energy.value(t_mid);
    const double c2 = frame_energy.value(t_end);

    generator.derivative(t / t_final, c0, psi, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
    generator.derivative(t_mid / t_final, c1, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
    generator.derivative(t_mid / t_final, c1, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + h * k3[i];
    generator.derivative(t_end / t_final, c2, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const double drift = std::abs(norm(psi) - 1.0);
    report.norm_drift = std::max(report.norm_drift, drift);
    if (drift > options.max_norm_drift) {
      throw Error(ErrorCategory::accuracy,
                  "norm drift " + std::to_string(drift) + " at t = " + std::to_string(t_end) +
                      " ns exceeds " + std::to_string(options.max_norm_drift) +
                      "; reduce dt (currently " + std::to_string(h) + " ns)");
    }
    if ((step + 1) % per_interval == 0) {
      const std::size_t idx = (step + 1) / per_interval;
      report.reference_fidelity.push_back(reference_overlap(idx, t_end));
    }
    if ((step + 1) % std::max<std::size_t>(1, options.record_every) == 0 || step + 1 == steps) {
      record(t_end);
    }
  }
  report.steps = steps;
  report.adiabatic_fidelity = report.reference_fidelity.back();
  return report;
}

}  // namespace fluxqpt
