#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fluxqpt/dynamics.hpp"
#include "fluxqpt/eigensolver.hpp"
#include "fluxqpt/observables.hpp"

namespace fluxqpt {

// ---------------------------------------------------------------------------
// Fidelity susceptibility
// ---------------------------------------------------------------------------

/// Maps a scalar control parameter to a Hamiltonian.
using HamiltonianFamily = std::function<SparseOperator(double)>;

struct ChiEstimate {
  /// -[ln|<g(x)|g(x+d)>| + ln|<g(x)|g(x-d)>|] / d^2
  double overlap_form = 0.0;
  /// <dg|dg> - |<g|dg>|^2 with a central-difference derivative.
  double derivative_form = 0.0;
  /// Smallest ground-sector gap over the three stencil points (GHz).
  double min_gap = 0.0;
  bool flagged = false;  // degenerate ground state at a stencil point
  /// The overlap deficit fell below 1e-14 and the estimate is noise-limited.
  bool precision_warning = false;
};

/// Both estimators from three ground states at x - d, x, x + d. The outer
/// states are phase-aligned to the centre first, so any global phase on any
/// input leaves the result unchanged.
ChiEstimate chi_from_states(const StateVector& minus, const StateVector& centre,
                            const StateVector& plus, double delta);

/// Fidelity susceptibility of an arbitrary family at parameter x.
ChiEstimate fidelity_susceptibility(const HamiltonianFamily& family, double x, double delta,
                                    const EigenOptions& options = {});

/// Fidelity susceptibility with respect to the schedule fraction s. Throws
/// Error(config) unless s - delta_s and s + delta_s lie in [0, 1].
ChiEstimate fidelity_susceptibility(const SweepModel& model, double s, double delta_s,
                                    const EigenOptions& options = {});

struct ChiTrace {
  std::vector<double> s;      // schedule fraction of each stencil centre
  std::vector<double> times;  // ns
  std::vector<double> chi;    // overlap form (reported)
  std::vector<double> chi_derivative;
  std::vector<double> min_gap;
  std::vector<bool> flagged;
  std::vector<bool> precision_warning;
};

/// chi_F on a uniform grid of `grid_points` fractions in [0, 1]. The two end
/// stencils are shifted inward to s = delta_s and s = 1 - delta_s so every
/// stencil stays inside the schedule. The ground-state parity sector is fixed
/// at the first point and the points are then solved independently on up to
/// `threads` workers; the result is identical for any thread count.
ChiTrace chi_trace(const SweepModel& model, std::size_t grid_points, double delta_s,
                   const EigenOptions& options = {}, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Distribution comparison
// ---------------------------------------------------------------------------

/// sum_k p_k ln(p_k / q_k) in nats after adding `smoothing` to every bin of
/// both inputs and renormalizing. Bins with p_k = 0 contribute nothing.
/// Throws Error(dimension) on length mismatch or inputs that do not sum to 1
/// within 1e-8.
double kl_divergence(std::span<const double> p, std::span<const double> q, double smoothing);

/// Same on histograms; throws Error(dimension) when the supports differ.
double kl_divergence(const MomentHistogram& p, const MomentHistogram& q, double smoothing);

enum class FitFamily { binomial, exponential };

struct FitResult {
  FitFamily family = FitFamily::exponential;
  double alpha = 0.0;  // decay rate per unit |mu|
  MomentHistogram fitted;
  double goodness = 0.0;  // KL(data || fit), nats
};

/// Q_alpha(k) proportional to exp(-alpha |k|) on the histogram's support.
MomentHistogram exponential_law(const MomentHistogram& like, double alpha);

/// Minimum-KL exponential fit, alpha >= 0. KL(h || Q_alpha) is convex in alpha
/// and its minimizer matches E|k| under both laws, so alpha is found by
/// bisection on that moment condition to 1e-12. The histogram is smoothed with
/// `smoothing` first, which keeps alpha finite for delta-like data.
/// Throws Error(dimension) when the support has a single point.
FitResult fit_exponential(const MomentHistogram& h, double smoothing = 1e-12);

/// The paramagnetic binomial law wrapped as a fit result (no free parameter).
FitResult binomial_fit(std::size_t n, const MomentHistogram& data, double smoothing = 1e-12);

/// D = KL(P_exp || h) - KL(P_bin || h): positive near the binomial anchor and
/// negative near the exponential one.
double macro_measure(const MomentHistogram& h, const FitResult& p_exp,
                     const MomentHistogram& p_bin, double smoothing);

struct MacroTrace {
  std::vector<double> times;
  std::vector<double> d;      // nats
  std::vector<double> alpha;  // exponential fit of each point's own histogram
  FitResult final_fit;        // P_exp used for every point
};

/// D along a sweep. P_exp is the exponential fit to the last histogram and
/// P_bin the paramagnetic reference; both stay fixed along the trace.
MacroTrace macro_trace(std::span<const double> times, std::span<const MomentHistogram> histograms,
                       double smoothing);

}  // namespace fluxqpt
