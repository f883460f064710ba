#include "fluxqpt/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "fluxqpt/error.hpp"
#include "fluxqpt/spin_network.hpp"

namespace fluxqpt {

std::vector<int> moment_support(std::size_t n) {
  std::vector<int> support;
  const int top = static_cast<int>(n);
  for (int mu = -top; mu <= top; mu += 2) support.push_back(mu);
  return support;
}

MomentHistogram MomentHistogram::from_probabilities(std::size_t n, std::vector<double> probs) {
  auto support = moment_support(n);
  if (probs.size() != support.size()) {
    throw Error(ErrorCategory::dimension, "moment histogram for n = " + std::to_string(n) +
                                              " needs " + std::to_string(support.size()) +
                                              " bins, got " + std::to_string(probs.size()));
  }
  if (std::any_of(probs.begin(), probs.end(), [](double p) { return !(p >= 0.0); })) {
    throw Error(ErrorCategory::dimension, "moment histogram has a negative probability");
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorCategory::dimension,
                "moment histogram sums to " + std::to_string(total) + ", not 1");
  }
  MomentHistogram h;
  h.n_ = n;
  h.support_ = std::move(support);
  h.probs_ = std::move(probs);
  return h;
}

MomentHistogram MomentHistogram::from_weights(std::size_t n,
                                              std::vector<std::pair<int, double>> weights) {
  std::map<int, double> merged;
  for (const auto& [moment, weight] : weights) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw Error(ErrorCategory::dimension, "histogram weights must be finite and non-negative");
    }
    merged[moment] += weight;
  }
  double total = 0.0;
  for (const auto& [moment, weight] : merged) total += weight;
  if (!(total > 0.0)) throw Error(ErrorCategory::dimension, "histogram has zero total weight");
  MomentHistogram h;
  h.n_ = n;
  for (const auto& [moment, weight] : merged) {
    h.support_.push_back(moment);
    h.probs_.push_back(weight / total);
  }
  return h;
}

double MomentHistogram::at(int moment) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), moment);
  if (it == support_.end() || *it != moment) return 0.0;
  return probs_[static_cast<std::size_t>(it - support_.begin())];
}

double MomentHistogram::total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

std::vector<double> computational_basis_probabilities(const StateVector& psi) {
  std::vector<double> probs(psi.dim());
  for (std::size_t b = 0; b < psi.dim(); ++b) probs[b] = std::norm(psi[b]);
  return probs;
}

MomentHistogram moment_distribution(const StateVector& psi) {
  const std::size_t n = psi.sites();
  std::vector<double> probs(n + 1, 0.0);
  for (std::size_t b = 0; b < psi.dim(); ++b) {
    const int moment = basis_moment(b, n);
    probs[static_cast<std::size_t>((moment + static_cast<int>(n)) / 2)] += std::norm(psi[b]);
  }
  return MomentHistogram::from_probabilities(n, std::move(probs));
}

MomentHistogram paramagnetic_reference(std::size_t n) {
  if (n == 0) throw Error(ErrorCategory::dimension, "paramagnetic reference needs n >= 1");
  // Pascal's triangle keeps every coefficient exact up to n = 53.
  std::vector<double> row{1.0};
  for (std::size_t r = 1; r <= n; ++r) {
    std::vector<double> next(r + 1, 1.0);
    for (std::size_t k = 1; k < r; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  // Bin index u counts up spins, i.e. mu = 2u - n.
  for (auto& c : row) c *= scale;
  return MomentHistogram::from_probabilities(n, std::move(row));
}

const DensityMatrix8& symmetric_w_witness() {
  static const DensityMatrix8 witness = [] {
    const auto net = SpinNetwork::triangle();
    const std::vector<double> ones(3, 1.0);
    const DenseMatrix sx = build_pauli_sum(net, Axis::x, ones).to_dense();
    const DenseMatrix sy = build_pauli_sum(net, Axis::y, ones).to_dense();
    DensityMatrix8 w = (4.0 + std::sqrt(5.0)) * DensityMatrix8::Identity();
    w -= 0.5 * (sx * sx);
    w -= 0.5 * (sy * sy);
    return w;
  }();
  return witness;
}

WitnessValue witness_expectation(const StateVector& psi) {
  if (psi.dim() != 8) {
    throw Error(ErrorCategory::dimension, "witness needs a three-qubit state (dim 8), got dim " +
                                              std::to_string(psi.dim()));
  }
  Eigen::Matrix<Complex, 8, 1> v;
  for (Eigen::Index i = 0; i < 8; ++i) v(i) = psi[static_cast<std::size_t>(i)];
  const double value = (v.adjoint() * symmetric_w_witness() * v)(0, 0).real();
  return {value, value < 0.0};
}

WitnessValue witness_expectation(const DensityMatrix8& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw Error(ErrorCategory::dimension, "density matrix is not Hermitian");
  const Complex trace = rho.trace();
  if (std::abs(trace - Complex{1.0, 0.0}) > 1e-8) {
    throw Error(ErrorCategory::dimension,
                "density matrix trace " + std::to_string(trace.real()) + " differs from 1");
  }
  const double value = (rho * symmetric_w_witness()).trace().real();
  return {value, value < 0.0};
}

DensityMatrix8 reduce_to_block(const StateVector& psi, std::array<std::size_t, 3> sites) {
  const std::size_t n = psi.sites();
  for (std::size_t a = 0; a < 3; ++a) {
    if (sites[a] >= n) {
      throw Error(ErrorCategory::dimension, "block site " + std::to_string(sites[a]) +
                                                " out of range for n = " + std::to_string(n));
    }
    for (std::size_t b = a + 1; b < 3; ++b) {
      if (sites[a] == sites[b]) throw Error(ErrorCategory::dimension, "block sites must be distinct");
    }
  }
  std::size_t block_mask = 0;
  for (const auto s : sites) block_mask |= std::size_t{1} << s;

  const auto scatter = [&](std::size_t idx) {
    std::size_t bits = 0;
    for (std::size_t a = 0; a < 3; ++a) bits |= ((idx >> a) & 1U) << sites[a];
    return bits;
  };

  // rho[i][j] = sum over environment e of psi[e|i] conj(psi[e|j]).
  DensityMatrix8 rho = DensityMatrix8::Zero();
  for (std::size_t b = 0; b < psi.dim(); ++b) {
    if ((b & block_mask) != 0) continue;  // b enumerates environment configurations
    for (std::size_t i = 0; i < 8; ++i) {
      const Complex ai = psi[b | scatter(i)];
      if (ai == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < 8; ++j) {
        rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            ai * std::conj(psi[b | scatter(j)]);
      }
    }
  }
  return rho;
}

std::vector<std::array<std::size_t, 3>> contiguous_blocks(std::size_t n) {
  std::vector<std::array<std::size_t, 3>> blocks;
  for (std::size_t i = 0; i + 2 < n; ++i) blocks.push_back({i, i + 1, i + 2});
  return blocks;
}

}  // namespace fluxqpt
