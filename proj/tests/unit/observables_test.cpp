#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "fluxqpt/error.hpp"
#include "fluxqpt/observables.hpp"
#include "oracles.hpp"

using namespace fluxqpt;

namespace {

// Witness assembled from Kronecker-product Pauli matrices.
oracle::Matrix witness_oracle() {
  oracle::Matrix sx = oracle::Matrix::Zero(8, 8);
  oracle::Matrix sy = oracle::Matrix::Zero(8, 8);
  for (std::size_t i = 0; i < 3; ++i) {
    sx += oracle::site_op(3, i, 'x');
    sy += oracle::site_op(3, i, 'y');
  }
  return (4.0 + std::sqrt(5.0)) * oracle::Matrix::Identity(8, 8) - 0.5 * sx * sx - 0.5 * sy * sy;
}

StateVector random_product_state(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> psi{1.0};
  for (std::size_t s = 0; s < n; ++s) {
    const double theta = std::acos(2.0 * u(rng) - 1.0);
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const Complex up = std::cos(theta / 2.0);
    const Complex down = std::polar(std::sin(theta / 2.0), phi);
    std::vector<Complex> next(psi.size() * 2);
    for (std::size_t b = 0; b < psi.size(); ++b) {
      next[b] = psi[b] * up;                 // new site bit 0
      next[b + psi.size()] = psi[b] * down;  // new site bit 1
    }
    psi = std::move(next);
  }
  return StateVector::normalized(psi);
}

}  // namespace

TEST(Probabilities, PlusStateIsUniform) {
  for (const double p : computational_basis_probabilities(StateVector::plus(3))) {
    EXPECT_NEAR(p, 0.125, 1e-15);
  }
}

TEST(Probabilities, BasisStateIsDelta) {
  const auto probs = computational_basis_probabilities(StateVector::basis(3, 0b010));
  for (std::size_t b = 0; b < 8; ++b) EXPECT_EQ(probs[b], b == 0b010 ? 1.0 : 0.0);
}

TEST(Probabilities, SixTermState) {
  const auto psi = StateVector::normalized(oracle::six_term_state());
  const auto probs = computational_basis_probabilities(psi);
  EXPECT_NEAR(probs[0], 0.0, 1e-15);
  EXPECT_NEAR(probs[7], 0.0, 1e-15);
  for (std::size_t b = 1; b < 7; ++b) EXPECT_NEAR(probs[b], 1.0 / 6.0, 1e-15);
  const auto h = moment_distribution(psi);
  EXPECT_NEAR(h.at(1), 0.5, 1e-15);
  EXPECT_NEAR(h.at(-1), 0.5, 1e-15);
}

TEST(Moments, AllUp) {
  const auto h = moment_distribution(StateVector::basis(3, 0));
  EXPECT_EQ(h.at(3), 1.0);
  EXPECT_EQ(h.support(), (std::vector<int>{-3, -1, 1, 3}));
}

TEST(Moments, PlusStateMatchesBinomialExactly) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto h = moment_distribution(StateVector::plus(n));
    const auto ref = paramagnetic_reference(n);
    for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(h.probs()[i], ref.probs()[i], 1e-12);
    EXPECT_NEAR(h.total(), 1.0, 1e-10);
  }
}

TEST(Moments, ParamagneticReferenceValues) {
  const auto r3 = paramagnetic_reference(3);
  EXPECT_EQ(r3.at(3), 0.125);
  EXPECT_EQ(r3.at(-1), 0.375);
  const auto r1 = paramagnetic_reference(1);
  EXPECT_EQ(r1.at(1), 0.5);
  EXPECT_EQ(r1.at(-1), 0.5);
  EXPECT_EQ(paramagnetic_reference(12).at(0), 924.0 / 4096.0);
  EXPECT_THROW(paramagnetic_reference(0), Error);
}

TEST(Moments, SupportParity) {
  for (std::size_t n = 1; n <= 9; ++n) {
    for (const int mu : moment_support(n)) EXPECT_EQ(std::abs(mu) % 2, static_cast<int>(n % 2));
  }
}

TEST(Histogram, Validation) {
  EXPECT_THROW(MomentHistogram::from_probabilities(3, {0.5, 0.5}), Error);
  EXPECT_THROW(MomentHistogram::from_probabilities(1, {0.7, 0.7}), Error);
  EXPECT_THROW(MomentHistogram::from_probabilities(1, {-0.5, 1.5}), Error);
  const auto h = MomentHistogram::from_weights(3, {{3, 1.0}, {-1, 2.0}, {3, 1.0}});
  EXPECT_EQ(h.support(), (std::vector<int>{-1, 3}));
  EXPECT_NEAR(h.at(3), 0.5, 1e-15);
}

TEST(Witness, MatchesKroneckerOracle) {
  const oracle::Matrix w = witness_oracle();
  EXPECT_LT((symmetric_w_witness() - w).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Witness, ReferenceValues) {
  EXPECT_NEAR(witness_expectation(StateVector::plus(3)).value, std::sqrt(5.0) - 2.0, 1e-14);
  const auto six = witness_expectation(StateVector::normalized(oracle::six_term_state()));
  EXPECT_NEAR(six.value, std::sqrt(5.0) - 3.0, 1e-14);
  EXPECT_TRUE(six.entangled);
  EXPECT_NEAR(witness_expectation(StateVector::basis(3, 0)).value, 1.0 + std::sqrt(5.0), 1e-14);
}

TEST(Witness, SpectrumFloor) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix8> solver(symmetric_w_witness());
  EXPECT_NEAR(solver.eigenvalues().minCoeff(), std::sqrt(5.0) - 3.0, 1e-10);
  // (sum sx)^2 + (sum sy)^2 = 4 (J^2 - Jz^2) is at least 2 on three qubits.
  EXPECT_NEAR(solver.eigenvalues().maxCoeff(), 3.0 + std::sqrt(5.0), 1e-10);
}

TEST(Witness, NonNegativeOnProductStates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto w = witness_expectation(random_product_state(3, rng));
    EXPECT_GE(w.value, -1e-12);
    EXPECT_FALSE(w.entangled && w.value < -1e-12);
  }
}

TEST(Witness, RangeOnRandomStates) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = witness_expectation(StateVector::normalized(oracle::random_state(8, rng))).value;
    EXPECT_GE(v, std::sqrt(5.0) - 3.0 - 1e-12);
    EXPECT_LE(v, 4.0 + std::sqrt(5.0) + 1e-12);
  }
}

TEST(Witness, DimensionAndDensityChecks) {
  EXPECT_THROW(witness_expectation(StateVector::plus(2)), Error);
  DensityMatrix8 rho = DensityMatrix8::Identity();
  EXPECT_THROW(witness_expectation(rho), Error);
  rho /= 8.0;
  EXPECT_NEAR(witness_expectation(rho).value, (symmetric_w_witness().trace() / 8.0).real(), 1e-14);
}

TEST(PartialTrace, ThreeSitesIsPureProjector) {
  std::mt19937_64 rng(43);
  const auto psi = StateVector::normalized(oracle::random_state(8, rng));
  const auto rho = reduce_to_block(psi, {0, 1, 2});
  const Eigen::VectorXcd v = oracle::as_eigen({psi.amplitudes().begin(), psi.amplitudes().end()});
  EXPECT_LT((rho - v * v.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, ProductAndGhz) {
  const auto up = reduce_to_block(StateVector::basis(5, 0), {1, 2, 3});
  EXPECT_EQ(up(0, 0), Complex(1.0, 0.0));
  EXPECT_NEAR(up.cwiseAbs().sum(), 1.0, 1e-15);

  std::vector<Complex> ghz(16, 0.0);
  ghz[0] = ghz[15] = 1.0 / std::sqrt(2.0);
  const auto rho = reduce_to_block(StateVector::normalized(ghz), {0, 1, 2});
  DensityMatrix8 expected = DensityMatrix8::Zero();
  expected(0, 0) = expected(7, 7) = 0.5;
  EXPECT_LT((rho - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PartialTrace, MatchesExplicitContractionAndIsPhysical) {
  std::mt19937_64 rng(44);
  const auto psi = StateVector::normalized(oracle::random_state(32, rng));
  const std::array<std::size_t, 3> sites{3, 1, 4};
  const auto rho = reduce_to_block(psi, sites);
  // Oracle: sum over the two environment sites {0, 2} by explicit bit assembly.
  DensityMatrix8 expected = DensityMatrix8::Zero();
  for (std::size_t env = 0; env < 4; ++env) {
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        const auto full = [&](std::size_t blk) {
          std::size_t b = 0;
          b |= ((blk >> 0) & 1U) << 3;
          b |= ((blk >> 1) & 1U) << 1;
          b |= ((blk >> 2) & 1U) << 4;
          b |= ((env >> 0) & 1U) << 0;
          b |= ((env >> 1) & 1U) << 2;
          return b;
        };
        expected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            psi[full(i)] * std::conj(psi[full(j)]);
      }
    }
  }
  EXPECT_LT((rho - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(std::abs(rho.trace() - Complex(1.0, 0.0)), 0.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<DensityMatrix8> solver(rho);
  EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-10);
}

TEST(PartialTrace, Errors) {
  EXPECT_THROW(reduce_to_block(StateVector::plus(4), {0, 0, 1}), Error);
  EXPECT_THROW(reduce_to_block(StateVector::plus(4), {0, 1, 4}), Error);
  EXPECT_EQ(contiguous_blocks(12).size(), 10U);
  EXPECT_TRUE(contiguous_blocks(2).empty());
}
