#include "fluxqpt/qpt_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fluxqpt/error.hpp"
#include "parallel.hpp"

namespace fluxqpt {

namespace {

// b rotated so that <c|b> is real and non-negative.
std::vector<Complex> align_to(const StateVector& c, const StateVector& b) {
  const Complex overlap = inner(c.amplitudes(), b.amplitudes());
  const double modulus = std::abs(overlap);
  const Complex phase = modulus > 0.0 ? std::conj(overlap) / modulus : Complex{1.0, 0.0};
  std::vector<Complex> out(b.amplitudes().begin(), b.amplitudes().end());
  for (auto& a : out) a *= phase;
  return out;
}

// ln|<c|b>| through the orthogonal remainder of b, accurate when |<c|b>| ~ 1.
struct LogOverlap {
  double value;
  double deficit;
};

LogOverlap log_overlap(const StateVector& c, std::span<const Complex> b) {
  const Complex overlap = inner(c.amplitudes(), b);
  double perp = 0.0;
  double length = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    perp += std::norm(b[i] - overlap * c[i]);
    length += std::norm(b[i]);
  }
  const double deficit = std::min(perp / length, 1.0);
  return {0.5 * std::log1p(-deficit), deficit};
}

}  // namespace

ChiEstimate chi_from_states(const StateVector& minus, const StateVector& centre,
                            const StateVector& plus, double delta) {
  if (minus.dim() != centre.dim() || plus.dim() != centre.dim()) {
    throw Error(ErrorCategory::dimension, "stencil states have different dimensions");
  }
  if (!(delta > 0.0)) throw Error(ErrorCategory::config, "delta_s: must be positive");

  const auto p = align_to(centre, plus);
  const auto m = align_to(centre, minus);

  ChiEstimate estimate;
  const auto lp = log_overlap(centre, p);
  const auto lm = log_overlap(centre, m);
  estimate.overlap_form = -(lp.value + lm.value) / (delta * delta);
  estimate.precision_warning = lp.deficit < 1e-14 || lm.deficit < 1e-14;

  std::vector<Complex> d(p.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (p[i] - m[i]) / (2.0 * delta);
  const double dd = std::pow(norm(d), 2);
  const double gd = std::norm(inner(centre.amplitudes(), d));
  estimate.derivative_form = dd - gd;
  return estimate;
}

ChiEstimate fidelity_susceptibility(const HamiltonianFamily& family, double x, double delta,
                                    const EigenOptions& options) {
  if (!(delta > 0.0)) throw Error(ErrorCategory::config, "delta_s: must be positive");
  const auto centre = ground_state(family(x), 1, options);
  EigenOptions stencil = options;
  stencil.warm_start = &centre.eigenvectors[0];
  if (centre.parities[0] != Parity::none) stencil.parity = centre.parities[0];
  const auto plus = ground_state(family(x + delta), 1, stencil);
  const auto minus = ground_state(family(x - delta), 1, stencil);

  auto estimate = chi_from_states(minus.eigenvectors[0], centre.eigenvectors[0],
                                  plus.eigenvectors[0], delta);
  estimate.min_gap = std::min({centre.sector_gap, plus.sector_gap, minus.sector_gap});
  estimate.flagged = centre.degenerate_flag || plus.degenerate_flag || minus.degenerate_flag;
  return estimate;
}

ChiEstimate fidelity_susceptibility(const SweepModel& model, double s, double delta_s,
                                    const EigenOptions& options) {
  model.schedule.validate();
  if (!(delta_s > 0.0)) throw Error(ErrorCategory::config, "delta_s: must be positive");
  if (s - delta_s < 0.0 || s + delta_s > 1.0) {
    throw Error(ErrorCategory::config, "stencil [s - delta_s, s + delta_s] = [" +
                                           std::to_string(s - delta_s) + ", " +
                                           std::to_string(s + delta_s) + "] leaves [0, 1]");
  }
  return fidelity_susceptibility(
      [&model](double x) { return model.hamiltonian_at_fraction(x); }, s, delta_s, options);
}

ChiTrace chi_trace(const SweepModel& model, std::size_t grid_points, double delta_s,
                   const EigenOptions& options, std::size_t threads) {
  model.schedule.validate();
  if (grid_points < 2) {
    throw Error(ErrorCategory::config, "grid_points: need at least 2, got " +
                                           std::to_string(grid_points));
  }
  if (!(delta_s > 0.0 && delta_s < 0.5)) {
    throw Error(ErrorCategory::config, "delta_s: must lie in (0, 0.5)");
  }
  ChiTrace trace;
  trace.s.resize(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double raw = static_cast<double>(k) / static_cast<double>(grid_points - 1);
    trace.s[k] = std::clamp(raw, delta_s, 1.0 - delta_s);
  }

  // The sector is fixed once at the first stencil centre; every point is then
  // solved independently so the result does not depend on `threads`.
  EigenOptions local = options;
  local.warm_start = nullptr;
  if (!local.parity) {
    const auto first = ground_state(model.hamiltonian_at_fraction(trace.s[0]), 1, options);
    if (first.parities[0] != Parity::none) local.parity = first.parities[0];
  }

  std::vector<ChiEstimate> estimates(grid_points);
  parallel_for(grid_points, threads, [&](std::size_t k) {
    estimates[k] = fidelity_susceptibility(model, trace.s[k], delta_s, local);
  });

  for (std::size_t k = 0; k < grid_points; ++k) {
    trace.times.push_back(trace.s[k] * model.schedule.t_final);
    trace.chi.push_back(estimates[k].overlap_form);
    trace.chi_derivative.push_back(estimates[k].derivative_form);
    trace.min_gap.push_back(estimates[k].min_gap);
    trace.flagged.push_back(estimates[k].flagged);
    trace.precision_warning.push_back(estimates[k].precision_warning);
  }
  return trace;
}

double kl_divergence(std::span<const double> p, std::span<const double> q, double smoothing) {
  if (p.size() != q.size() || p.empty()) {
    throw Error(ErrorCategory::dimension, "KL divergence needs distributions on a common support");
  }
  if (!(smoothing >= 0.0)) throw Error(ErrorCategory::config, "smoothing: must be non-negative");
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(sp - 1.0) > 1e-8 || std::abs(sq - 1.0) > 1e-8) {
    throw Error(ErrorCategory::dimension, "KL divergence inputs must each sum to 1");
  }
  const double bins = static_cast<double>(p.size());
  const double zp = sp + bins * smoothing;
  const double zq = sq + bins * smoothing;
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double pk = (p[k] + smoothing) / zp;
    const double qk = (q[k] + smoothing) / zq;
    if (pk == 0.0) continue;
    if (qk == 0.0) return std::numeric_limits<double>::infinity();
    total += pk * std::log(pk / qk);
  }
  return total;
}

double kl_divergence(const MomentHistogram& p, const MomentHistogram& q, double smoothing) {
  if (p.support() != q.support()) {
    throw Error(ErrorCategory::dimension, "KL divergence: histogram supports differ");
  }
  return kl_divergence(p.probs(), q.probs(), smoothing);
}

MomentHistogram exponential_law(const MomentHistogram& like, double alpha) {
  const auto& support = like.support();
  int min_abs = std::numeric_limits<int>::max();
  for (const int k : support) min_abs = std::min(min_abs, std::abs(k));
  std::vector<std::pair<int, double>> weights;
  for (const int k : support) {
    weights.emplace_back(k, std::exp(-alpha * static_cast<double>(std::abs(k) - min_abs)));
  }
  return MomentHistogram::from_weights(like.sites(), std::move(weights));
}

namespace {

double mean_abs(const std::vector<int>& support, std::span<const double> probs) {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) m += probs[i] * std::abs(support[i]);
  return m;
}

}  // namespace

FitResult fit_exponential(const MomentHistogram& h, double smoothing) {
  if (h.size() < 2) {
    throw Error(ErrorCategory::dimension, "exponential fit needs at least two support points");
  }
  if (!(smoothing >= 0.0)) throw Error(ErrorCategory::config, "smoothing: must be non-negative");
  const auto& support = h.support();
  std::vector<double> smoothed(h.probs());
  const double z = h.total() + static_cast<double>(smoothed.size()) * smoothing;
  for (auto& p : smoothed) p = (p + smoothing) / z;
  const double target = mean_abs(support, smoothed);

  const auto excess = [&](double alpha) {
    return mean_abs(support, exponential_law(h, alpha).probs()) - target;
  };

  double alpha = 0.0;
  if (excess(0.0) > 0.0) {
    double lo = 0.0;
    double hi = 1.0;
    while (excess(hi) > 0.0 && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    alpha = 0.5 * (lo + hi);
  }

  FitResult fit;
  fit.family = FitFamily::exponential;
  fit.alpha = alpha;
  fit.fitted = exponential_law(h, alpha);
  fit.goodness = kl_divergence(h, fit.fitted, smoothing);
  return fit;
}

FitResult binomial_fit(std::size_t n, const MomentHistogram& data, double smoothing) {
  FitResult fit;
  fit.family = FitFamily::binomial;
  fit.alpha = 0.0;
  fit.fitted = paramagnetic_reference(n);
  fit.goodness = kl_divergence(data, fit.fitted, smoothing);
  return fit;
}

double macro_measure(const MomentHistogram& h, const FitResult& p_exp,
                     const MomentHistogram& p_bin, double smoothing) {
  return kl_divergence(p_exp.fitted, h, smoothing) - kl_divergence(p_bin, h, smoothing);
}

MacroTrace macro_trace(std::span<const double> times, std::span<const MomentHistogram> histograms,
                       double smoothing) {
  if (histograms.empty() || times.size() != histograms.size()) {
    throw Error(ErrorCategory::dimension, "macro trace needs one histogram per time");
  }
  MacroTrace trace;
  trace.final_fit = fit_exponential(histograms.back(), smoothing);
  const auto reference = paramagnetic_reference(histograms.front().sites());
  for (std::size_t k = 0; k < histograms.size(); ++k) {
    trace.times.push_back(times[k]);
    trace.d.push_back(macro_measure(histograms[k], trace.final_fit, reference, smoothing));
    trace.alpha.push_back(fit_exponential(histograms[k], smoothing).alpha);
  }
  return trace;
}

}  // namespace fluxqpt
