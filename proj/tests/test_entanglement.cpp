#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "harment/entanglement.hpp"
#include "harment/error.hpp"
#include "harment/kernel.hpp"
#include "harment/lattice.hpp"
#include "harment/spectral.hpp"
#include "support/dense_oracle.hpp"
#include "support/random_specs.hpp"

namespace harment {
namespace {

TEST(ModeEntropy, ClosedFormValues) {
  EXPECT_EQ(mode_entropy(1.0), 0.0);
  EXPECT_NEAR(mode_entropy(2.0), 1.5 * std::log(1.5) - 0.5 * std::log(0.5), 1e-15);
  EXPECT_NEAR(mode_entropy(3.0), 2 * std::log(2.0), 1e-15);
  // f(x) = ln(x/2) + 1 + O(1/x²).
  EXPECT_NEAR(mode_entropy(1e6), std::log(5e5) + 1, 1e-10);
}

TEST(ModeEntropy, ContinuousAndIncreasingNearOne) {
  double previous = 0.0;
  for (int e = 15; e >= 2; --e) {
    const double x = 1 + std::pow(10.0, -e);
    const double s = mode_entropy(x);
    EXPECT_GT(s, previous);
    previous = s;
  }
  const double below = mode_entropy(1 + 1e-8 * (1 - 1e-9));
  const double above = mode_entropy(1 + 1e-8 * (1 + 1e-9));
  EXPECT_NEAR(below, above, 1e-15);
}

TEST(Entropy, UncoupledChainIsUnentangled) {
  const std::vector<CouplingTerm> terms{{{0}, 2.5}};
  const auto kernel = build_kernel(build_coupling(1, {32}, terms));
  const auto res = entropy(kernel, Partition::block(10));
  EXPECT_NEAR(res.entropy, 0.0, 1e-12);
  for (double mu : res.mu) EXPECT_NEAR(mu, 1.0, 1e-14);
  const auto mi = mutual_information(kernel, Partition::block(10));
  EXPECT_NEAR(mi.value(), 0.0, 1e-14);
  EXPECT_NEAR(negativity_upper_bound(kernel, Partition::block(10)), 0.0, 1e-14);
}

TEST(Entropy, ComplementSymmetry) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    const auto spec = testing::random_spec(rng, 5, 32, 128).spec;
    const auto kernel = build_kernel(spec);
    const auto n = spec.site_count();
    for (std::size_t n1 : {n / 8, n / 4, 3 * n / 8}) {
      const auto s = entropy(kernel, Partition::block(n1)).entropy;
      const auto sc = entropy(kernel, Partition::block(n - n1)).entropy;
      EXPECT_NEAR(s, sc, 1e-8);
      const auto i = mutual_information(kernel, Partition::block(n1)).value();
      const auto ic = mutual_information(kernel, Partition::block(n - n1)).value();
      EXPECT_NEAR(i, ic, 1e-8);
    }
  }
}

TEST(Entropy, MatchesDenseOracle) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 8; ++trial) {
    const auto spec = testing::random_spec(rng, 5, 16, 64).spec;
    const auto n = spec.site_count();
    const auto kernel = build_kernel(spec);
    for (std::size_t n1 : {n / 8, n / 2}) {
      const auto mine = entropy(kernel, Partition::block(n1));
      const auto dense = oracle::entanglement(spec, oracle::first_sites(n1));
      EXPECT_NEAR(mine.entropy, dense.entropy, 1e-8);
      EXPECT_NEAR(mutual_information(kernel, Partition::block(n1)).value(),
                  dense.mutual_information, 1e-8);
      auto dense_mu = dense.mu;
      std::sort(dense_mu.begin(), dense_mu.end());
      ASSERT_EQ(dense_mu.size(), mine.mu.size());
      for (std::size_t i = 0; i < dense_mu.size(); ++i) {
        EXPECT_NEAR(mine.mu[i], dense_mu[i], 1e-8 * std::max(1.0, dense_mu[i]));
      }
    }
  }
}

TEST(Entropy, BlockPositionDoesNotMatter) {
  std::mt19937_64 rng(5);
  const auto spec = testing::random_spec(rng, 4, 32, 32).spec;
  const std::size_t n = spec.site_count(), n1 = 9;
  const double s = entropy(build_kernel(spec), Partition::block(n1)).entropy;
  for (std::size_t start : {1u, 7u, 27u}) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < n1; ++i) sites.push_back((start + i) % n);
    EXPECT_NEAR(oracle::entanglement(spec, sites).entropy, s, 1e-8) << "start=" << start;
  }
}

TEST(Bounds, SzegoBoundBelowHalfHalfEntropy) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = testing::random_spec(rng, 5, 128, 256).spec;
    const auto n = spec.site_count();
    ASSERT_FALSE(classify(spec).singular());
    const double bound = szego_lower_bound(szego_coefficients(spec, 200));
    const double s = entropy(build_kernel(spec), Partition::block(n / 2)).entropy;
    EXPECT_LE(bound, s + 1e-9) << "N=" << n;
  }
}

TEST(Entropy, TwoDimensionalMatchesDenseOracle) {
  const std::vector<CouplingTerm> terms{
      {{0, 0}, 5.0}, {{1, 0}, -1.0}, {{0, 1}, -1.2}, {{1, 1}, 0.25}};
  const auto spec = build_coupling(2, {6, 7}, terms);
  const auto kernel = build_kernel(spec);
  const Partition p{{3, 2}};
  const auto dense = oracle::entanglement(spec, inner_sites(spec.lattice(), p));
  EXPECT_NEAR(entropy(kernel, p).entropy, dense.entropy, 1e-8);
  EXPECT_NEAR(mutual_information(kernel, p).value(), dense.mutual_information, 1e-8);
}

TEST(MutualInformation, ThreeFormsAgree) {
  for (double eta : {0.3, 0.9, 1.05, 2.0}) {
    const auto kernel = build_kernel(build_eta_chain({eta, 129}));
    const auto mi = mutual_information(kernel, Partition::block(40));
    EXPECT_NEAR(mi.position_form, mi.momentum_form, 1e-9);
    EXPECT_NEAR(mi.position_form, mi.det_product_form, 1e-9);
  }
}

TEST(Bounds, OrderingHoldsOnEtaChains) {
  for (double eta : {0.2, 0.6, 1.2, 1.6}) {
    const auto kernel = build_kernel(build_eta_chain({eta, 128}));
    for (std::size_t n1 : {4u, 16u, 64u}) {
      const auto report = entanglement_report(kernel, Partition::block(n1));
      EXPECT_LE(report.det_lower_bound, report.entropy + 1e-12);
      EXPECT_LE(report.entropy, report.negativity_upper_bound + 1e-12);
      EXPECT_NEAR(report.det_lower_bound, report.mutual_information, 1e-9);
    }
  }
}

TEST(Report, CarriesOptionalFields) {
  const auto small = build_kernel(build_eta_chain({1.2, 32}));
  const auto r1 = entanglement_report(small, Partition::block(8));
  EXPECT_FALSE(r1.correlation.has_value());
  EXPECT_FALSE(r1.szego_lower_bound.has_value());

  ReportOptions options;
  options.szego_lower_bound = 0.25;
  const auto large = build_kernel(build_eta_chain({1.2, 128}));
  const auto r2 = entanglement_report(large, Partition::block(8), options);
  ASSERT_TRUE(r2.correlation.has_value());
  EXPECT_EQ(r2.correlation->decay_class, DecayClass::Exponential);
  EXPECT_EQ(r2.szego_lower_bound, 0.25);
  EXPECT_EQ(r2.extents, std::vector<std::size_t>{128});
  EXPECT_EQ(r2.mu.size(), 8u);

  options.with_correlation = false;
  EXPECT_FALSE(entanglement_report(large, Partition::block(8), options).correlation);
}

TEST(Correlation, RegularChainIsExponentialWithKnownLength) {
  // ξ = -1/ln r with r = η - √(η² - 1).
  const double eta = 1.2;
  const double expected = -1 / std::log(eta - std::sqrt(eta * eta - 1));
  const auto est = correlation_length(build_kernel(build_eta_chain({eta, 512})));
  EXPECT_EQ(est.decay_class, DecayClass::Exponential);
  EXPECT_NEAR(est.xi, 1.607, 0.05 * 1.607);
  EXPECT_NEAR(est.xi, expected, 1e-3);
  EXPECT_LE(est.window_begin, est.window_end);
}

TEST(Correlation, ShortRangeChainsSlideTheWindow) {
  for (double eta : {1.4, 2.0}) {
    const double expected = -1 / std::log(eta - std::sqrt(eta * eta - 1));
    const auto est = correlation_length(build_kernel(build_eta_chain({eta, 512})));
    EXPECT_EQ(est.decay_class, DecayClass::Exponential);
    EXPECT_NEAR(est.xi, expected, 0.02 * expected);
  }
}

TEST(Correlation, CriticalChainIsPowerLaw) {
  for (double eta : {0.2, 0.6, 0.9}) {
    const auto est = correlation_length(build_kernel(build_eta_chain({eta, 512})));
    EXPECT_EQ(est.decay_class, DecayClass::PowerLaw) << "eta=" << eta;
    EXPECT_TRUE(std::isinf(est.xi));
  }
}

TEST(Correlation, UncoupledChainIsZero) {
  const std::vector<CouplingTerm> terms{{{0}, 3.0}};
  const auto est = correlation_length(build_kernel(build_coupling(1, {128}, terms)));
  EXPECT_EQ(est.decay_class, DecayClass::Zero);
  EXPECT_EQ(est.xi, 0.0);
}

TEST(Correlation, Preconditions) {
  EXPECT_THROW(correlation_length(build_kernel(build_eta_chain({1.2, 32}))), Error);
  const std::vector<CouplingTerm> terms{{{0, 0}, 3.0}};
  EXPECT_THROW(correlation_length(build_kernel(build_coupling(2, {64, 64}, terms))), Error);
}

TEST(DecayClassNames, AreStable) {
  EXPECT_EQ(to_string(DecayClass::Exponential), "Exponential");
  EXPECT_EQ(to_string(DecayClass::PowerLaw), "PowerLaw");
  EXPECT_EQ(to_string(DecayClass::Zero), "Zero");
}

}  // namespace
}  // namespace harment
