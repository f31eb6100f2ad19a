#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bdkit/errors.hpp"
#include "bdkit/measures.hpp"
#include "oracles.hpp"

using namespace bdkit;

namespace {

DiscreteMeasure two_atoms() {
  return DiscreteMeasure::normalized({{1.0, 0.5}, {2.0, 0.5}});
}

void expect_same(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(a.atoms()[k].x, b.atoms()[k].x, tol * std::max(1.0, a.atoms()[k].x));
    EXPECT_NEAR(a.atoms()[k].w, b.atoms()[k].w, tol);
  }
}

DiscreteMeasure random_measure(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 12);
  std::uniform_real_distribution<double> loc(0.01, 50.0);
  std::uniform_real_distribution<double> weight(0.01, 1.0);
  std::vector<Atom> atoms(static_cast<std::size_t>(count(rng)));
  for (Atom& a : atoms) a = {loc(rng), weight(rng)};
  return DiscreteMeasure::normalized(std::move(atoms));
}

}  // namespace

TEST(DiscreteMeasure, Construction) {
  const DiscreteMeasure m = DiscreteMeasure::normalized({{2.0, 3.0}, {1.0, 1.0}, {5.0, 0.0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.atoms()[0], (Atom{1.0, 0.25}));
  EXPECT_EQ(m.atoms()[1], (Atom{2.0, 0.75}));
  EXPECT_FALSE(m.has_atom_at_zero());

  const DiscreteMeasure merged = DiscreteMeasure::unnormalized({{1.0, 1.0}, {1.0 + 1e-14, 1.0}});
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged.mass(), 2.0);

  EXPECT_THROW(DiscreteMeasure::normalized({{-1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(DiscreteMeasure::normalized({{1.0, -1.0}}), InvalidArgument);
  EXPECT_THROW(DiscreteMeasure::normalized({{1.0, 0.0}}), InvalidArgument);
  EXPECT_THROW(DiscreteMeasure::normalized({{NAN, 1.0}}), InvalidArgument);
}

TEST(Moments, Examples) {
  EXPECT_DOUBLE_EQ(moment(two_atoms(), 1), 1.5);
  EXPECT_DOUBLE_EQ(moment(two_atoms(), -1), 0.75);
  EXPECT_DOUBLE_EQ(moment(two_atoms(), 0), 1.0);
  const DiscreteMeasure z = DiscreteMeasure::normalized({{0.0, 0.5}, {2.0, 0.5}});
  EXPECT_EQ(moment(z, 2), 2.0);
  EXPECT_THROW(moment(z, -1), NegativeMomentWithAtomAtZero);
}

TEST(Transforms, PhiZero) {
  expect_same(transform_phi0(two_atoms()),
              DiscreteMeasure::normalized({{1.0, 2.0 / 3.0}, {2.0, 1.0 / 3.0}}), 1e-15);
  expect_same(transform_phi0(DiscreteMeasure::normalized({{3.5, 1.0}})),
              DiscreteMeasure::normalized({{3.5, 1.0}}), 0.0);
  EXPECT_THROW(transform_phi0(DiscreteMeasure::normalized({{0.0, 0.5}, {1.0, 0.5}})),
               AtomAtZero);
}

TEST(Transforms, PhiA) {
  const DiscreteMeasure expected =
      DiscreteMeasure::normalized({{0.0, 0.5}, {1.0, 1.0 / 3.0}, {2.0, 1.0 / 6.0}});
  expect_same(transform_phia(two_atoms(), 1.0), expected, 1e-15);
  EXPECT_EQ(transform_phia(two_atoms(), 0.0).atoms(), transform_phi0(two_atoms()).atoms());
  for (double a : {0.1, 1.0, 7.0}) {
    EXPECT_NEAR(transform_phia(two_atoms(), a).mass_at_zero(), a / (a + 1.0), 1e-15);
  }
  EXPECT_THROW(transform_phia(two_atoms(), -1.0), InvalidArgument);
  EXPECT_THROW(transform_phia(two_atoms(), INFINITY), InvalidArgument);
}

TEST(Transforms, DualMeasure) {
  const DiscreteMeasure expected =
      DiscreteMeasure::normalized({{0.0, 0.5}, {1.0, 1.0 / 3.0}, {2.0, 1.0 / 6.0}});
  expect_same(dual_measure(two_atoms(), 2.0 / 3.0), expected, 1e-15);
  // mu0 = 1/m_{-1}: no atom at zero.
  EXPECT_FALSE(dual_measure(two_atoms(), 4.0 / 3.0).has_atom_at_zero());
  EXPECT_THROW(dual_measure(two_atoms(), 1.4), Mu0ExceedsBound);
  EXPECT_THROW(dual_measure(DiscreteMeasure::normalized({{0.0, 1.0}, {1.0, 1.0}}), 0.5),
               AtomAtZero);
}

TEST(Transforms, InverseExamples) {
  const InverseTransform inv = inverse_transform(
      DiscreteMeasure::normalized({{0.0, 0.5}, {1.0, 1.0 / 3.0}, {2.0, 1.0 / 6.0}}));
  EXPECT_NEAR(inv.a, 1.0, 1e-15);
  expect_same(inv.psi, two_atoms(), 1e-15);
  EXPECT_EQ(inverse_transform(two_atoms()).a, 0.0);
  EXPECT_THROW(inverse_transform(DiscreteMeasure::normalized({{0.0, 1.0}})), AllMassAtZero);
}

TEST(Transforms, RandomCoherenceAndRoundTrip) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> a_dist(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteMeasure psi = random_measure(rng);
    const double a = a_dist(rng);
    const double m = moment(psi, -1);
    const DiscreteMeasure phi = transform_phia(psi, a);
    EXPECT_NEAR(phi.mass(), 1.0, 1e-10);
    expect_same(phi, dual_measure(psi, 1.0 / ((a + 1.0) * m)), 1e-12);
    const InverseTransform inv = inverse_transform(phi);
    EXPECT_NEAR(inv.a, a, 1e-12 * std::max(1.0, a));
    expect_same(inv.psi, psi, 1e-12);
  }
}

TEST(SpectralApprox, SingleNode) {
  const DiscreteMeasure m = spectral_approx(RecurrenceCoefficients({2.5}, {}), 1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.atoms()[0], (Atom{2.5, 1.0}));
}

TEST(SpectralApprox, MatchesDenseOracle) {
  for (const RateSet& r : {mm1(2, 1, 0), mminf(1, 1, 0), linear(2, 1, 0.3)}) {
    const RecurrenceCoefficients co = recurrence_from_rates(r, 80);
    const DiscreteMeasure mine = spectral_approx(co, 80);
    const DiscreteMeasure ref = oracle::gauss(co.c_values(), co.d_values(), 80);
    ASSERT_EQ(mine.size(), ref.size());
    for (std::size_t k = 0; k < mine.size(); ++k) {
      const double scale = std::max(1.0, ref.atoms()[k].x);
      EXPECT_NEAR(mine.atoms()[k].x, ref.atoms()[k].x, 1e-11 * scale);
      EXPECT_NEAR(mine.atoms()[k].w, ref.atoms()[k].w, 1e-11);
    }
  }
}

TEST(SpectralApprox, MomentIdentity) {
  for (const RateSet& r : {mm1(2, 1, 0), mminf(1, 1, 0), linear(2, 1, 0)}) {
    const std::size_t n = 12;
    const RecurrenceCoefficients co = recurrence_from_rates(r, n);
    const DiscreteMeasure m = spectral_approx(co, n);
    for (int p = 0; p <= static_cast<int>(2 * n - 1); ++p) {
      const double ref = oracle::jacobi_power_entry(co.c_values(), co.d_values(), n, p);
      EXPECT_NEAR(moment(m, p), ref, 1e-9 * std::max(1.0, ref)) << "order " << p;
    }
  }
}

TEST(SpectralApprox, NodesInterlace) {
  const RecurrenceCoefficients co = recurrence_from_rates(linear(2, 1, 0.5), 41);
  for (std::size_t n = 5; n <= 40; n += 5) {
    const DiscreteMeasure a = spectral_approx(co, n);
    const DiscreteMeasure b = spectral_approx(co, n + 1);
    ASSERT_EQ(b.size(), n + 1);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_LT(b.atoms()[k].x, a.atoms()[k].x);
      EXPECT_LT(a.atoms()[k].x, b.atoms()[k + 1].x);
    }
  }
}

TEST(SpectralApprox, MminfLowestNodesSettle) {
  const RecurrenceCoefficients co = recurrence_from_rates(mminf(1, 1, 0), 120);
  const DiscreteMeasure a = spectral_approx(co, 60);
  const DiscreteMeasure b = spectral_approx(co, 120);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(a.atoms()[k].x, b.atoms()[k].x, 1e-6);
    EXPECT_NEAR(b.atoms()[k].x, static_cast<double>(k), 1e-6);
  }
  EXPECT_TRUE(b.has_atom_at_zero());
}

TEST(SpectralApprox, RejectsMissingCoefficients) {
  EXPECT_THROW(spectral_approx(RecurrenceCoefficients({1, 2}, {1}), 3),
               InsufficientCoefficients);
}

TEST(XiEstimates, Mminf) {
  const SpectralEstimate e = xi_estimates(recurrence_from_rates(mminf(1, 1, 0), 120), 8, 60);
  EXPECT_EQ(e.depth, 60u);
  ASSERT_EQ(e.xi.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_TRUE(e.converged[k]);
    EXPECT_NEAR(e.xi[k], static_cast<double>(k), 1e-6);
  }
  EXPECT_EQ(e.flag, SpectrumFlag::DiscreteToDepth);
}

TEST(XiEstimates, Mm1SuggestsAccumulation) {
  const SpectralEstimate e = xi_estimates(recurrence_from_rates(mm1(2, 1, 0), 200), 10, 100);
  EXPECT_EQ(e.flag, SpectrumFlag::AccumulationSuspected);
  // The continuous part of the spectrum starts at (sqrt 2 - 1)^2.
  const double edge = (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0);
  for (double x : e.xi) EXPECT_GT(x, edge - 1e-3);
  EXPECT_THROW(xi_estimates(recurrence_from_rates(mm1(2, 1, 0), 200), 30, 100),
               InvalidArgument);
}

TEST(XiEstimates, DualSpectrumSeparates) {
  // linear(2, 1) has a purely discrete spectrum and m_{-1} = ln 2. The
  // dual of a killed member keeps every primal point and adds one at 0.
  const double m = std::log(2.0);
  for (double mu0 : {0.5 / m, 1.0 / m}) {
    const RateSet r = linear(2, 1, mu0);
    const SpectralEstimate primal = xi_estimates(recurrence_from_rates(r, 200), 6, 100);
    const SpectralEstimate dual =
        xi_estimates(recurrence_from_rates(dual_rates(r), 200), 7, 100);
    const bool saturated = mu0 * m > 1.0 - 1e-12;
    if (!saturated) {
      EXPECT_EQ(dual.xi[0], 0.0);
      for (std::size_t i = 1; i < 6; ++i) {
        EXPECT_TRUE(primal.converged[i]);
        EXPECT_NEAR(dual.xi[i + 1], primal.xi[i], 1e-6 * primal.xi[i]);
      }
    }
    for (std::size_t i = 0; i + 1 < 6; ++i) {
      EXPECT_LE(dual.xi[i], primal.xi[i] + 1e-9);
    }
  }
}
