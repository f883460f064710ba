#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fluxqpt/sparse_operator.hpp"

namespace fluxqpt {

// Basis convention used throughout: basis index b has bit i (site 0 is the least
// significant bit) equal to 0 for spin up and 1 for spin down, so sigma^z_i |b> =
// (1 - 2 * bit_i(b)) |b>.

enum class Topology { triangle, nn_nnn_chain, custom };

std::string_view to_string(Topology topology) noexcept;
Topology parse_topology(std::string_view text);

/// Unordered coupling between two distinct sites, stored with i < j.
struct Edge {
  std::size_t i;
  std::size_t j;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Lattice topology: a site count plus an ordered, duplicate-free edge list.
class SpinNetwork {
 public:
  /// Three sites, all pairs coupled.
  static SpinNetwork triangle();

  /// Open chain with nearest- and next-nearest-neighbour couplings.
  /// Edge order: all (i, i+1) first, then all (i, i+2).
  static SpinNetwork nn_nnn_chain(std::size_t n);

  /// Arbitrary graph. Throws Error(config) on self-loops, duplicates, or
  /// endpoints outside [0, n).
  static SpinNetwork custom(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  Topology topology() const noexcept { return topology_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }

 private:
  SpinNetwork(std::size_t n, std::vector<Edge> edges, Topology topology);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  Topology topology_ = Topology::custom;
};

/// Per-site bias and tunnelling plus per-edge coupling, all in GHz.
struct ControlParams {
  std::vector<double> epsilon;
  std::vector<double> delta;
  std::vector<double> j;

  static ControlParams uniform(const SpinNetwork& network, double epsilon, double delta,
                               double j);
};

/// Bytes needed to hold the Hamiltonian of an n-site network plus the working
/// vectors of an eigen-solve. Used for the memory budget check.
std::size_t estimate_required_bytes(std::size_t n, std::size_t edge_count);

/// Memory budget in bytes. Reads FLUXQPT_MEMORY_BUDGET (plain bytes, or with a
/// K/M/G suffix); defaults to 2 GiB.
std::size_t memory_budget_bytes();

/// H = sum_i -(eps_i sz_i + delta_i sx_i) + sum_(i,j) J_ij sz_i sz_j.
///
/// The diagonal is accumulated into one entry per row, so the result has at most
/// (n + 1) * 2^n stored entries. Throws Error(dimension) when parameter array
/// lengths do not match the network, and Error(memory_budget) when the estimate
/// exceeds `budget_bytes`.
SparseOperator build_hamiltonian(const SpinNetwork& network, const ControlParams& params,
                                 std::size_t budget_bytes = memory_budget_bytes());

enum class Axis { x, y, z };
Axis parse_axis(std::string_view text);

/// sum_i w_i sigma^axis_i. With axis z and unit weights this is the total moment.
SparseOperator build_pauli_sum(const SpinNetwork& network, Axis axis,
                               std::span<const double> weights);

/// sigma^z eigenvalue (+1 up, -1 down) of `site` in basis state `basis_index`.
constexpr int spin_z(std::size_t basis_index, std::size_t site) noexcept {
  return ((basis_index >> site) & 1U) != 0U ? -1 : 1;
}

/// Number of up spins minus number of down spins.
int basis_moment(std::size_t basis_index, std::size_t n) noexcept;

/// Human-readable label such as "udu" (site 0 first).
std::string basis_label(std::size_t basis_index, std::size_t n);

}  // namespace fluxqpt
