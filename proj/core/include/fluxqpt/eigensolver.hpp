#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fluxqpt/sparse_operator.hpp"
#include "fluxqpt/state_vector.hpp"

namespace fluxqpt {

enum class SolverMethod {
  automatic,  ///< dense up to kDenseMaxSites sites, Lanczos above
  dense,
  lanczos,
};

inline constexpr std::size_t kDenseMaxSites = 7;

/// Eigenvalue of the global spin flip (product of all sigma^x) on an eigenvector.
/// `none` when the operator does not commute with the flip.
enum class Parity : int { even = 1, odd = -1, none = 0 };

std::string_view to_string(SolverMethod method) noexcept;

struct EigenOptions {
  SolverMethod method = SolverMethod::automatic;
  double gap_tol = 1e-9;  // GHz
  /// Resolve eigenpairs inside spin-flip parity sectors when the operator allows it.
  bool use_flip_symmetry = true;
  /// Restrict to one sector (ignored when the operator has no flip symmetry).
  std::optional<Parity> parity;
  /// Lanczos: stop once |H v - E v| < tolerance * gershgorin_radius(H).
  double tolerance = 1e-12;
  std::size_t krylov_dim = 160;
  std::size_t max_restarts = 60;
  std::uint64_t seed = 0x5eed2024ULL;
  /// Lanczos start vector for the lowest eigenpair.
  const StateVector* warm_start = nullptr;
};

struct EigenResult {
  std::vector<double> eigenvalues;          // ascending, GHz
  std::vector<StateVector> eigenvectors;    // gauge-fixed
  std::vector<Parity> parities;
  double gap = 0.0;         // E1 - E0 over all computed levels
  double sector_gap = 0.0;  // E1 - E0 within the ground state's parity sector
  bool degenerate_flag = false;
  SolverMethod method_used = SolverMethod::dense;
  std::size_t iterations = 0;  // Lanczos matvecs summed over all runs
  double max_residual = 0.0;   // max |H v - E v| over returned pairs
};

/// The k lowest eigenpairs of a Hermitian operator.
///
/// When the operator commutes with the global spin flip, every sector is solved
/// separately and the eigenvectors are parity eigenstates. Levels from different
/// sectors never mix, so `degenerate_flag` is set from the gap inside the
/// ground-state sector (sector_gap < gap_tol). Without the symmetry, sector_gap
/// equals gap.
///
/// Throws Error(dimension) when k is 0 or exceeds the dimension, and
/// Error(convergence) when Lanczos stalls (the message carries the residual).
EigenResult ground_state(const SparseOperator& h, std::size_t k, const EigenOptions& options = {});

/// Operator restricted to one parity sector, written in the basis
/// (|b> + p |~b>)/sqrt(2) for representatives b < dim/2.
SparseOperator restrict_to_sector(const SparseOperator& h, Parity parity);

/// Lifts a sector vector back to the full space.
std::vector<Complex> embed_from_sector(std::span<const Complex> sector_vector, Parity parity);

/// Projects a full-space vector onto a sector, in sector coordinates.
std::vector<Complex> project_to_sector(std::span<const Complex> full_vector, Parity parity);

}  // namespace fluxqpt
