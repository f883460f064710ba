#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fluxqpt/sparse_operator.hpp"

namespace fluxqpt {

/// Normalized amplitude vector in the computational basis (length 2^n).
class StateVector {
 public:
  StateVector() = default;

  /// Normalizes `amplitudes`. Throws Error(dimension) for a zero vector or a
  /// length that is not a power of two.
  static StateVector normalized(std::vector<Complex> amplitudes);

  /// |b> for a single basis index.
  static StateVector basis(std::size_t n, std::size_t index);

  /// |+>^(tensor n), every amplitude 2^(-n/2).
  static StateVector plus(std::size_t n);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::size_t sites() const noexcept;
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  /// Returns a copy multiplied by a unit-modulus phase.
  StateVector with_phase(Complex phase) const;

 private:
  friend StateVector fix_gauge(std::span<const Complex> raw);

  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {}

  std::vector<Complex> amplitudes_;
};

/// Amplitude modulus below which a component is ignored when picking the gauge.
inline constexpr double kGaugeThreshold = 1e-8;

/// Removes the global phase: the result is v e^{-i phi} / |v| where phi is the
/// phase of the first amplitude with modulus above kGaugeThreshold (relative to
/// the normalized vector). Idempotent. Throws Error(dimension) on a zero vector.
StateVector fix_gauge(std::span<const Complex> raw);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace fluxqpt
