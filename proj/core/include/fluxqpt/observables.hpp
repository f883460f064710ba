#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fluxqpt/state_vector.hpp"

namespace fluxqpt {

/// Probability distribution over the total moment mu^z = sum_i sigma^z_i.
///
/// The support is stored ascending. Histograms built from states always cover
/// the full parity-correct spectrum {-n, -n+2, ..., n}; synthetic histograms
/// may use any strictly increasing integer support.
class MomentHistogram {
 public:
  MomentHistogram() = default;

  /// Full support {-n, ..., n} step 2, probabilities in support order.
  /// Throws Error(dimension) on size mismatch, negative entries, or a total
  /// that is not 1 within 1e-10.
  static MomentHistogram from_probabilities(std::size_t n, std::vector<double> probs);

  /// Arbitrary (moment, weight) pairs in any order; weights are normalized.
  /// Duplicate moments are summed.
  static MomentHistogram from_weights(std::size_t n, std::vector<std::pair<int, double>> weights);

  std::size_t sites() const noexcept { return n_; }
  const std::vector<int>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return support_.size(); }

  /// Probability of `moment`; zero when it is not in the support.
  double at(int moment) const;

  double total() const;

 private:
  std::size_t n_ = 0;
  std::vector<int> support_;
  std::vector<double> probs_;
};

/// Full moment support {-n, -n+2, ..., n}.
std::vector<int> moment_support(std::size_t n);

/// |amplitude_b|^2 for every basis state b.
std::vector<double> computational_basis_probabilities(const StateVector& psi);

/// P(mu) = sum over basis states with moment mu of |amplitude|^2.
MomentHistogram moment_distribution(const StateVector& psi);

/// Binomial law C(n, (n+k)/2) / 2^n of |+>^n measured in the z basis.
MomentHistogram paramagnetic_reference(std::size_t n);

using DensityMatrix8 = Eigen::Matrix<Complex, 8, 8>;

struct WitnessValue {
  double value = 0.0;
  bool entangled = false;  // value < 0
};

/// W = (4 + sqrt 5) - (1/2) (sum sigma^x)^2 - (1/2) (sum sigma^y)^2 on three qubits.
const DensityMatrix8& symmetric_w_witness();

/// <psi|W|psi> for a three-qubit pure state. Throws Error(dimension) unless dim = 8.
WitnessValue witness_expectation(const StateVector& psi);

/// tr(rho W). Throws Error(dimension) when rho is not Hermitian or its trace is
/// not 1 within 1e-8.
WitnessValue witness_expectation(const DensityMatrix8& rho);

/// Reduced density matrix of three sites; sites[0] maps to the least significant
/// bit of the 8-dimensional block index. Throws Error(dimension) for duplicate or
/// out-of-range sites.
DensityMatrix8 reduce_to_block(const StateVector& psi, std::array<std::size_t, 3> sites);

/// Contiguous blocks (i, i+1, i+2) for i in [0, n-2).
std::vector<std::array<std::size_t, 3>> contiguous_blocks(std::size_t n);

}  // namespace fluxqpt
