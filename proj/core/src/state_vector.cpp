#include "fluxqpt/state_vector.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "fluxqpt/error.hpp"

namespace fluxqpt {

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
  if (!is_power_of_two(amplitudes.size())) {
    throw Error(ErrorCategory::dimension, "state length " + std::to_string(amplitudes.size()) +
                                              " is not a power of two");
  }
  const double length = norm(amplitudes);
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCategory::dimension, "cannot normalize a zero or non-finite state");
  }
  for (auto& a : amplitudes) a /= length;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t n, std::size_t index) {
  const std::size_t dim = std::size_t{1} << n;
  if (index >= dim) throw Error(ErrorCategory::dimension, "basis index out of range");
  std::vector<Complex> amplitudes(dim);
  amplitudes[index] = 1.0;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::plus(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  return StateVector(std::vector<Complex>(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim)), 0.0}));
}

std::size_t StateVector::sites() const noexcept {
  return amplitudes_.empty() ? 0 : static_cast<std::size_t>(std::countr_zero(amplitudes_.size()));
}

StateVector StateVector::with_phase(Complex phase) const {
  std::vector<Complex> out(amplitudes_);
  for (auto& a : out) a *= phase;
  return StateVector(std::move(out));
}

StateVector fix_gauge(std::span<const Complex> raw) {
  if (!is_power_of_two(raw.size())) {
    throw Error(ErrorCategory::dimension, "state length " + std::to_string(raw.size()) +
                                              " is not a power of two");
  }
  const double length = norm(raw);
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCategory::dimension, "cannot gauge-fix a zero or non-finite vector");
  }
  std::vector<Complex> out(raw.begin(), raw.end());
  // Already unit length to rounding: leave the bits alone so the map is idempotent.
  if (std::abs(length - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
    for (auto& a : out) a /= length;
  }
  for (auto& pivot : out) {
    const double modulus = std::abs(pivot);
    if (modulus <= kGaugeThreshold) continue;
    if (pivot.imag() != 0.0 || pivot.real() < 0.0) {
      const Complex phase = std::conj(pivot) / modulus;
      for (auto& a : out) a *= phase;
      pivot = Complex{modulus, 0.0};
    }
    break;
  }
  return StateVector(std::move(out));
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a.amplitudes(), b.amplitudes()));
}

}  // namespace fluxqpt
