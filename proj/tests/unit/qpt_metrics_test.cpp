#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fluxqpt/error.hpp"
#include "fluxqpt/qpt_metrics.hpp"
#include "oracles.hpp"

using namespace fluxqpt;

namespace {

SparseOperator single_qubit(double delta, double lambda) {
  return build_hamiltonian(SpinNetwork::custom(1, {}), ControlParams{{lambda}, {delta}, {}});
}

MomentHistogram exp_histogram(double alpha) {
  std::vector<std::pair<int, double>> w;
  for (const int k : {-3, -1, 1, 3}) w.emplace_back(k, std::exp(-alpha * std::abs(k)));
  return MomentHistogram::from_weights(3, w);
}

std::vector<double> random_distribution(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(size);
  for (auto& x : p) x = u(rng);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

TEST(FidelitySusceptibility, SingleQubitAnalytic) {
  const HamiltonianFamily family = [](double lambda) { return single_qubit(1.0, lambda); };
  for (double lambda = -5.0; lambda <= 5.0 + 1e-12; lambda += 0.25) {
    const double expected = 1.0 / (4.0 * std::pow(lambda * lambda + 1.0, 2));
    const auto chi = fidelity_susceptibility(family, lambda, 1e-4);
    EXPECT_NEAR(chi.overlap_form / expected, 1.0, 1e-6) << "lambda=" << lambda;
    EXPECT_NEAR(chi.derivative_form / expected, 1.0, 1e-6) << "lambda=" << lambda;
  }
  EXPECT_NEAR(fidelity_susceptibility(family, 0.0, 1e-4).overlap_form, 0.25, 1e-8);
}

TEST(FidelitySusceptibility, ScaledFamilyIsFlat) {
  const auto net = SpinNetwork::nn_nnn_chain(4);
  const auto h0 = ControlParams::uniform(net, 0.2, 1.0, 0.7);
  const HamiltonianFamily family = [&](double s) {
    auto p = h0;
    for (auto* v : {&p.epsilon, &p.delta, &p.j}) {
      for (auto& x : *v) x *= 1.0 + s;
    }
    return build_hamiltonian(net, p);
  };
  EXPECT_LT(std::abs(fidelity_susceptibility(family, 0.5, 1e-4).overlap_form), 1e-8);
}

TEST(FidelitySusceptibility, EstimatorsAgreeOnRandomInstances) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  std::uniform_int_distribution<std::size_t> sites(2, 6);
  for (int trial = 0; trial < 20; ++trial) {
    SweepModel model;
    model.network = SpinNetwork::nn_nnn_chain(sites(rng));
    for (std::size_t e = 0; e < model.network.edges().size(); ++e) model.coupling_scale.push_back(u(rng));
    for (std::size_t i = 0; i < model.network.size(); ++i) model.epsilon.push_back(u(rng) - 1.15);
    const double s = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const auto chi = fidelity_susceptibility(model, s, 1e-4);
    EXPECT_NEAR(chi.overlap_form, chi.derivative_form, 1e-6 * std::abs(chi.derivative_form))
        << "trial " << trial;
    EXPECT_GE(chi.overlap_form, -1e-8);
  }
}

TEST(FidelitySusceptibility, GaugeInvariance) {
  SweepModel model;
  model.network = SpinNetwork::nn_nnn_chain(4);
  const double s = 0.4;
  const double d = 1e-4;
  const auto g = [&](double x) { return ground_state(model.hamiltonian_at_fraction(x), 1).eigenvectors[0]; };
  const auto m = g(s - d);
  const auto c = g(s);
  const auto p = g(s + d);
  const auto base = chi_from_states(m, c, p, d);
  const auto phased = chi_from_states(m.with_phase(std::polar(1.0, 2.1)), c.with_phase(std::polar(1.0, -0.4)),
                                      p.with_phase(std::polar(1.0, 0.9)), d);
  EXPECT_NEAR(base.overlap_form, phased.overlap_form, 1e-10);
  EXPECT_NEAR(base.derivative_form, phased.derivative_form, 1e-10);
}

TEST(FidelitySusceptibility, StencilRangeAndSteps) {
  const SweepModel model;
  EXPECT_THROW(fidelity_susceptibility(model, 0.0, 1e-4), Error);
  EXPECT_THROW(fidelity_susceptibility(model, 1.0, 1e-4), Error);
  EXPECT_THROW(fidelity_susceptibility(model, 0.5, 0.0), Error);
  EXPECT_THROW(chi_trace(model, 1, 1e-4), Error);
}

TEST(FidelitySusceptibility, ConstantScheduleIsFlat) {
  SweepModel model;
  model.schedule = ControlSchedule::constant(2.0, 1.0);
  const auto trace = chi_trace(model, 21, 1e-4);
  for (const double chi : trace.chi) EXPECT_LT(std::abs(chi), 1e-8);
}

TEST(FidelitySusceptibility, TraceIsNonNegativeAndThreadIndependent) {
  SweepModel model;
  model.network = SpinNetwork::nn_nnn_chain(5);
  const auto one = chi_trace(model, 41, 1e-4, {}, 1);
  const auto four = chi_trace(model, 41, 1e-4, {}, 4);
  ASSERT_EQ(one.chi.size(), 41U);
  EXPECT_EQ(one.s.front(), 1e-4);
  EXPECT_EQ(one.s.back(), 1.0 - 1e-4);
  for (std::size_t k = 0; k < one.chi.size(); ++k) {
    if (!one.flagged[k]) EXPECT_GE(one.chi[k], -1e-8);
    EXPECT_EQ(one.chi[k], four.chi[k]);
  }
}

TEST(KlDivergence, HandCase) {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<double> q{0.25, 0.75};
  EXPECT_NEAR(kl_divergence(p, q, 0.0), 0.5 * std::log(4.0 / 3.0), 1e-12);
  EXPECT_EQ(kl_divergence(p, p, 0.0), 0.0);
}

TEST(KlDivergence, GibbsInequality) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_distribution(7, rng);
    const auto q = random_distribution(7, rng);
    EXPECT_GE(kl_divergence(p, q, 1e-12), 0.0);
  }
}

TEST(KlDivergence, ZeroBinsAndErrors) {
  const std::vector<double> p{1.0, 0.0};
  const std::vector<double> q{0.0, 1.0};
  EXPECT_TRUE(std::isinf(kl_divergence(p, q, 0.0)));
  EXPECT_TRUE(std::isfinite(kl_divergence(p, q, 1e-12)));
  const std::vector<double> three{0.2, 0.3, 0.5};
  EXPECT_THROW(kl_divergence(p, three, 0.0), Error);
  EXPECT_THROW(kl_divergence(p, std::vector<double>{0.5, 0.6}, 0.0), Error);
  EXPECT_THROW(kl_divergence(paramagnetic_reference(3), paramagnetic_reference(4), 0.0), Error);
}

TEST(ExponentialFit, RecoversRate) {
  for (const double alpha : {0.1, 1.0, 2.5}) {
    const auto fit = fit_exponential(exp_histogram(alpha));
    EXPECT_NEAR(fit.alpha, alpha, 1e-6);
    EXPECT_NEAR(fit.fitted.total(), 1.0, 1e-10);
  }
}

TEST(ExponentialFit, UniformGivesZero) {
  EXPECT_NEAR(fit_exponential(exp_histogram(0.0)).alpha, 0.0, 1e-6);
}

TEST(ExponentialFit, ScaleFreeAndOrderFree) {
  const auto a = fit_exponential(MomentHistogram::from_weights(3, {{-3, 1.0}, {-1, 5.0}, {1, 7.0}, {3, 2.0}}));
  const auto b = fit_exponential(MomentHistogram::from_weights(3, {{3, 20.0}, {1, 70.0}, {-3, 10.0}, {-1, 50.0}}));
  EXPECT_NEAR(a.alpha, b.alpha, 1e-10);
}

TEST(ExponentialFit, MinimizesKl) {
  const auto h = MomentHistogram::from_weights(5, {{-5, 0.01}, {-3, 0.1}, {-1, 0.4}, {1, 0.3}, {3, 0.15}, {5, 0.04}});
  const auto fit = fit_exponential(h);
  for (const double shift : {-1e-3, 1e-3}) {
    EXPECT_GE(kl_divergence(h, exponential_law(h, fit.alpha + shift), 1e-12), fit.goodness);
  }
}

TEST(ExponentialFit, FrustratedTwelveSiteStateBeatsBinomial) {
  SweepModel model;
  model.network = SpinNetwork::nn_nnn_chain(12);
  const auto g = ground_state(model.hamiltonian_at_fraction(1.0), 1).eigenvectors[0];
  const auto h = moment_distribution(g);
  const auto fit = fit_exponential(h);
  EXPECT_GT(fit.alpha, 0.0);
  EXPECT_TRUE(std::isfinite(fit.alpha));
  EXPECT_LT(kl_divergence(h, fit.fitted, 1e-12), kl_divergence(h, paramagnetic_reference(12), 1e-12));
}

TEST(MacroMeasure, AnchorsHaveOppositeSigns) {
  const auto bin = paramagnetic_reference(3);
  const auto fit = fit_exponential(exp_histogram(1.5));
  const double at_bin = macro_measure(bin, fit, bin, 1e-12);
  const double at_exp = macro_measure(fit.fitted, fit, bin, 1e-12);
  EXPECT_NEAR(at_bin, kl_divergence(fit.fitted, bin, 1e-12), 1e-12);
  EXPECT_NEAR(at_exp, -kl_divergence(bin, fit.fitted, 1e-12), 1e-12);
  EXPECT_GT(at_bin, 0.0);
  EXPECT_LT(at_exp, 0.0);
  EXPECT_EQ(binomial_fit(3, bin).goodness, 0.0);
}

TEST(MacroMeasure, TraceUsesFinalFit) {
  const std::vector<double> times{0.0, 1.0};
  const std::vector<MomentHistogram> hs{paramagnetic_reference(3), exp_histogram(2.0)};
  const auto trace = macro_trace(times, hs, 1e-12);
  EXPECT_NEAR(trace.final_fit.alpha, 2.0, 1e-6);
  EXPECT_GT(trace.d.front(), 0.0);
  EXPECT_LT(trace.d.back(), 0.0);
  for (const double d : trace.d) EXPECT_TRUE(std::isfinite(d));
  EXPECT_THROW(macro_trace(std::vector<double>{0.0}, hs, 1e-12), Error);
}
