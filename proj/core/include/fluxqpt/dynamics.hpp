#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "fluxqpt/eigensolver.hpp"
#include "fluxqpt/spin_network.hpp"
#include "fluxqpt/state_vector.hpp"

namespace fluxqpt {

/// Energies are stored in GHz and converted to angular frequency with
/// omega = 2 pi E (rad/ns) when integrating the Schroedinger equation.
inline constexpr std::string_view kUnitsConvention =
    "energies in GHz as ordinary frequencies; omega = 2*pi*E rad/ns; time in ns";

enum class RampShape { linear };

std::string_view to_string(RampShape shape) noexcept;
RampShape parse_ramp_shape(std::string_view text);

/// Linear ramp with additive floors, s = t / t_final:
///   delta(t) = delta_max (1 - s) + delta_floor
///   J(t)     = j_max s + j_floor
/// The defaults put J/delta at 1e-6 at t = 0 and 1e6 at t = t_final.
struct ControlSchedule {
  double t_final = 50.0;      // ns
  double delta_max = 5.0;     // GHz
  double j_max = 5.0;         // GHz
  double delta_floor = 5e-6;  // GHz
  double j_floor = 5e-6;      // GHz
  RampShape shape = RampShape::linear;

  /// Throws Error(config) unless t_final and both floors are positive and
  /// the ramp amplitudes are non-negative.
  void validate() const;

  /// Constant Hamiltonian at the floors (no ramp).
  static ControlSchedule constant(double delta, double j, double t_final = 50.0);
};

struct ControlPoint {
  double delta;  // GHz
  double j;      // GHz
};

/// Throws Error(config) for t outside [0, t_final].
ControlPoint schedule_at(const ControlSchedule& schedule, double t);

/// Same as schedule_at with t = s * t_final, s in [0, 1].
ControlPoint schedule_at_fraction(const ControlSchedule& schedule, double s);

/// Uniform parameters for the network at schedule fraction s. `coupling_scale`,
/// when non-empty, multiplies J per edge; `epsilon`, when non-empty, sets the
/// per-site bias.
ControlParams params_at_fraction(const SpinNetwork& network, const ControlSchedule& schedule,
                                 double s, std::span<const double> coupling_scale = {},
                                 std::span<const double> epsilon = {});

/// Network-plus-schedule bundle with optional per-edge and per-site overrides.
struct SweepModel {
  SpinNetwork network = SpinNetwork::triangle();
  ControlSchedule schedule;
  std::vector<double> coupling_scale;  // per edge, empty = all ones
  std::vector<double> epsilon;         // per site, empty = all zero

  SparseOperator hamiltonian_at_fraction(double s) const;
  SparseOperator hamiltonian_at(double t) const;
};

enum class TrajectorySource { tracked, integrated };

struct Trajectory {
  std::vector<double> times;  // ns, ascending
  std::vector<StateVector> states;
  std::vector<double> energies;  // <H(t)> (tracked: E0)
  std::vector<double> gaps;      // tracked: E1 - E0 in the ground sector; integrated: empty
  std::vector<bool> flagged;     // tracked: degenerate ground state at this point
  TrajectorySource source = TrajectorySource::tracked;
};

/// Uniform grid t_k = k t_final / (grid_points - 1).
std::vector<double> uniform_grid(double t_final, std::size_t grid_points);

/// Instantaneous ground state at each grid time, gauge-fixed and then sign
/// aligned so that successive overlaps have non-negative real part. The first
/// grid point is solved in every parity sector; later points stay in the
/// ground-state sector found there and warm-start from their predecessor.
/// Throws Error(config) for grid_points < 2.
Trajectory track_ground_state(const SweepModel& model, std::size_t grid_points,
                              const EigenOptions& options = {});

enum class PhaseFrame {
  lab,     ///< integrate H(t) as is
  ground,  ///< integrate H(t) - E0(t); the removed global phase is restored exactly
};

struct EvolveOptions {
  double dt = 1e-3;  // ns
  PhaseFrame frame = PhaseFrame::ground;
  /// Grid for the frame energy E0(t) (piecewise linear in between) and for the
  /// tracked reference states used in the fidelity report.
  std::size_t reference_points = 201;
  /// Store the state every `record_every` steps (the final step is always stored).
  std::size_t record_every = 1000;
  /// Norm drift above this raises Error(accuracy).
  double max_norm_drift = 1e-6;
  EigenOptions eigen;
};

struct EvolutionReport {
  Trajectory trajectory;      // source = integrated; states carry their physical phase
  double norm_drift = 0.0;    // max | |psi(t)| - 1 | over all steps
  double adiabatic_fidelity = 0.0;  // |<psi_tracked(t_final)|psi(t_final)>|^2
  std::vector<double> reference_times;
  std::vector<double> reference_fidelity;  // |<g(t)|psi(t)>|^2 on the reference grid
  std::size_t steps = 0;
};

/// Integrates i d(psi)/dt = 2 pi H(t) psi over [0, t_final] with classical
/// fourth-order Runge-Kutta (stages at t, t + dt/2, t + dt), no renormalization.
/// Throws Error(accuracy) when the norm drifts by more than max_norm_drift.
EvolutionReport evolve_schrodinger(const SweepModel& model, const StateVector& psi0,
                                   const EvolveOptions& options = {});

}  // namespace fluxqpt
