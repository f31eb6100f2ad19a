#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bdkit/errors.hpp"
#include "bdkit/rates.hpp"
#include "oracles.hpp"

using namespace bdkit;

namespace {

RateSet table(std::vector<double> lambda, std::vector<double> mu, double mu0,
              TailRule tail = TailRule::RepeatLast) {
  return RateSet::from_table({std::move(lambda), std::move(mu), tail}, mu0);
}

std::vector<RateSet> builtin_sets(double mu0) {
  return {mm1(2, 1, mu0), mm1(1, 2, mu0), mminf(1, 1, mu0), mminf(2, 0.5, mu0),
          linear(2, 1, mu0), linear(1, 3, mu0), quartic(mu0)};
}

}  // namespace

TEST(Rates, FamilyDefinitions) {
  const RateSet a = mm1(2, 1, 0);
  EXPECT_EQ(a.lambda(0), 2.0);
  EXPECT_EQ(a.mu(0), 0.0);
  EXPECT_EQ(a.mu(1), 1.0);
  const RateSet b = mminf(1, 1, 0);
  EXPECT_EQ(b.lambda(4), 1.0);
  EXPECT_EQ(b.mu(4), 4.0);
  const RateSet q = quartic();
  EXPECT_EQ(q.lambda(0), 12.0);
  EXPECT_EQ(q.mu(0), 0.0);
  EXPECT_EQ(q.lambda(1), 5.0 * 36.0 * 7.0);
  EXPECT_EQ(q.mu(1), 3.0 * 16.0 * 5.0);
  const RateSet l = linear(2, 3, 0.5);
  EXPECT_EQ(l.lambda(2), 6.0);
  EXPECT_EQ(l.mu(2), 6.0);
  EXPECT_EQ(l.mu(0), 0.5);
}

TEST(Rates, FamilyErrors) {
  EXPECT_THROW(builtin_family("nope", {}), InvalidArgument);
  EXPECT_THROW(builtin_family("mm1", {{"lambda", 1.0}}), InvalidArgument);
  EXPECT_THROW(mm1(-1, 1, 0), InvalidArgument);
  EXPECT_THROW(mm1(1, 1, -0.5), InvalidArgument);
  EXPECT_THROW(builtin_family("mm1", {{"lambda", 1.0}, {"mu", 1.0}, {"alpha", 1.0}}),
               InvalidArgument);
  EXPECT_THROW(builtin_family("table", {}), InvalidArgument);
  EXPECT_EQ(family_catalog().size(), 5u);
}

TEST(Rates, TableTails) {
  const RateSet r = table({1, 2, 3}, {0, 4, 5}, 0.25);
  EXPECT_EQ(r.lambda(10), 3.0);
  EXPECT_EQ(r.mu(10), 5.0);
  EXPECT_EQ(r.mu(0), 0.25);
  const RateSet a = table({1, 2, 3}, {0, 4, 5}, 0.0, TailRule::AffineExtrapolate);
  EXPECT_EQ(a.lambda(5), 6.0);
  EXPECT_EQ(a.mu(5), 8.0);
  EXPECT_THROW(table({1, -2}, {0, 1}, 0), InvalidArgument);
  EXPECT_THROW(table({1, 2}, {0, 0}, 0), InvalidArgument);
  EXPECT_THROW(table({1, 2, 3}, {0, 1}, 0), InvalidArgument);
  EXPECT_THROW(table({3, 2}, {0, 1}, 0, TailRule::AffineExtrapolate), InvalidArgument);
}

TEST(Rates, PiCoefficients) {
  const PiSequence a = pi_coefficients(mm1(2, 1, 0), 3);
  EXPECT_EQ(a.values, (std::vector<double>{1, 2, 4, 8}));
  const PiSequence b = pi_coefficients(mminf(1, 1, 0), 3);
  EXPECT_DOUBLE_EQ(b.values[2], 0.5);
  EXPECT_DOUBLE_EQ(b.values[3], 1.0 / 6.0);
  EXPECT_EQ(pi_coefficients(quartic(), 0).values, std::vector<double>{1.0});
}

TEST(Rates, PiFallsBackToLogDomain) {
  // 1/n! is a normal double through n = 170 and subnormal at 171.
  const PiSequence p = pi_coefficients(mminf(1, 1, 0), 170);
  EXPECT_NEAR(std::log(p.values[170]), -std::lgamma(171.0), 1e-9);
  EXPECT_THROW(pi_coefficients(mminf(1, 1, 0), 171), RangeError);
  const std::vector<double> lp = log_pi_coefficients(mminf(1, 1, 0), 400);
  EXPECT_NEAR(lp[400], -std::lgamma(401.0), 1e-9 * std::lgamma(401.0));
}

TEST(Rates, RecurrenceFromRates) {
  const RecurrenceCoefficients a = recurrence_from_rates(mm1(2, 1, 0.5), 4);
  EXPECT_EQ(a.c_values(), (std::vector<double>{2.5, 3, 3, 3}));
  EXPECT_EQ(a.d_values(), (std::vector<double>{2, 2, 2}));
  const RecurrenceCoefficients b = recurrence_from_rates(mm1(2, 1, 0), 3);
  EXPECT_EQ(b.c_values(), (std::vector<double>{2, 3, 3}));
  const RecurrenceCoefficients c = recurrence_from_rates(mminf(1, 1, 0), 4);
  EXPECT_EQ(c.c_values(), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(c.d(2), 1.0);
  EXPECT_EQ(c.d(4), 3.0);
  EXPECT_THROW(c.d(5), InsufficientCoefficients);
  EXPECT_THROW(c.c(5), InsufficientCoefficients);
}

TEST(Rates, RatesFromRecurrenceFamilyMembers) {
  const RecurrenceCoefficients co = recurrence_from_rates(mm1(2, 1, 0), 40);
  const RateSet zero = rates_from_recurrence(co, 0.0);
  for (std::size_t n = 0; n < 40; ++n) EXPECT_EQ(zero.lambda(n), 2.0);
  EXPECT_EQ(zero.mu(0), 0.0);
  EXPECT_EQ(zero.mu(5), 1.0);
  const RateSet one = rates_from_recurrence(co, 1.0);
  for (std::size_t n = 0; n < 40; ++n) {
    EXPECT_EQ(one.lambda(n), 1.0);
    if (n > 0) EXPECT_EQ(one.mu(n), 2.0);
  }
  try {
    rates_from_recurrence(co, 1.2);
    FAIL() << "expected PositivityViolation";
  } catch (const PositivityViolation& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(rates_from_recurrence(co, 2.0), PositivityViolation);
}

TEST(Rates, RoundTripForFamiliesAndRandomTables) {
  for (double mu0 : {0.0, 0.5}) {
    for (const RateSet& r : builtin_sets(mu0)) {
      const RateSet back = rates_from_recurrence(recurrence_from_rates(r, 60), mu0);
      for (std::size_t n = 0; n < 60; ++n) {
        EXPECT_LE(oracle::rel(back.lambda(n), r.lambda(n)), 1e-12) << n;
        if (n > 0) EXPECT_LE(oracle::rel(back.mu(n), r.mu(n)), 1e-12) << n;
      }
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logu(std::log(0.5), std::log(2.0));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> lambda, mu{0.0};
    for (int n = 0; n < 40; ++n) lambda.push_back(std::exp(logu(rng)));
    for (int n = 1; n < 40; ++n) mu.push_back(std::exp(logu(rng)));
    const RateSet r = table(lambda, mu, 0.0);
    const RateSet back = rates_from_recurrence(recurrence_from_rates(r, 40), 0.0);
    for (std::size_t n = 1; n < 40; ++n) {
      EXPECT_LE(oracle::rel(back.lambda(n), r.lambda(n)), 1e-12);
      EXPECT_LE(oracle::rel(back.mu(n), r.mu(n)), 1e-12);
    }
  }
}

TEST(Rates, DualRatesExamples) {
  const RateSet d = dual_rates(mm1(1, 2, 1));
  EXPECT_EQ(d.mu0(), 0.0);
  EXPECT_EQ(d.lambda_prefix(3), (std::vector<double>{1, 2, 2}));
  EXPECT_EQ(d.mu_prefix(3), (std::vector<double>{0, 1, 1}));
  const RateSet e = dual_rates(mm1(2, 1, 0.5));
  EXPECT_EQ(e.lambda_prefix(3), (std::vector<double>{0.5, 1, 1}));
  EXPECT_EQ(e.mu_prefix(3), (std::vector<double>{0, 2, 2}));
  EXPECT_EQ(d.kind(), RateSetKind::Dual);
}

TEST(Rates, DualIsAnInvolution) {
  for (double mu0 : {0.0, 0.3, 1.0}) {
    for (const RateSet& r : builtin_sets(mu0)) {
      const RateSet back = dual_rates(dual_rates(r));
      EXPECT_EQ(back.mu0(), r.mu0());
      for (std::size_t n = 0; n <= 100; ++n) {
        EXPECT_EQ(back.lambda(n), r.lambda(n));
        EXPECT_EQ(back.mu(n), r.mu(n));
      }
    }
  }
  // A dual built from scratch (no back pointer) also inverts exactly.
  const RateSet zero = mm1(1, 2, 0);
  const RateSet d = dual_rates(zero);
  EXPECT_EQ(d.mu0(), 1.0);
  const RateSet dd = dual_rates(RateSet::from_table(
      {d.lambda_prefix(50), d.mu_prefix(50), TailRule::RepeatLast}, d.mu0()));
  for (std::size_t n = 0; n < 49; ++n) {
    EXPECT_EQ(dd.lambda(n), zero.lambda(n));
    EXPECT_EQ(dd.mu(n), zero.mu(n));
  }
}

TEST(Rates, DualPiIdentities) {
  for (const RateSet& r : builtin_sets(0.7)) {
    const auto lp = log_pi_coefficients(r, 101);
    const auto ld = log_pi_coefficients(dual_rates(r), 101);
    const RateSet d = dual_rates(r);
    for (std::size_t n = 0; n <= 100; ++n) {
      // pi^d_{n+1} lambda_n pi_n = mu0
      EXPECT_LE(oracle::rel(std::exp(ld[n + 1] + std::log(r.lambda(n)) + lp[n]), 0.7), 1e-12);
      // 1/(lambda^d_n pi^d_n) = pi_n/mu0
      EXPECT_LE(oracle::rel(-std::log(d.lambda(n)) - ld[n], lp[n] - std::log(0.7)) *
                    std::max(1.0, std::abs(lp[n])),
                1e-12 * std::max(1.0, std::abs(lp[n])));
    }
  }
}

TEST(Rates, ShellCoefficients) {
  const RecurrenceCoefficients s = shell_coefficients(mm1(1, 2, 1), 4);
  EXPECT_EQ(s.c_values(), (std::vector<double>{1, 3, 3, 3}));
  EXPECT_EQ(s.d_values(), (std::vector<double>{1, 2, 2}));
  const RecurrenceCoefficients t = shell_coefficients(mm1(2, 1, 0.5), 3);
  EXPECT_EQ(t.c_values(), (std::vector<double>{0.5, 3, 3}));
  EXPECT_EQ(t.d_values(), (std::vector<double>{1, 2}));
  EXPECT_THROW(shell_coefficients(mm1(2, 1, 0), 3), InvalidArgument);
  for (const RateSet& r : builtin_sets(0.4)) {
    EXPECT_EQ(shell_coefficients(r, 30), recurrence_from_rates(dual_rates(r), 30));
  }
}

TEST(Rates, MinusOneMoment) {
  const SeriesReport a = m_minus_one(mm1(2, 1, 0), 100, 1e-12);
  EXPECT_EQ(a.status, SeriesStatus::Converges);
  EXPECT_NEAR(a.value, 1.0, 1e-12);
  EXPECT_EQ(m_minus_one(mminf(1, 1, 0), 100, 1e-12).status, SeriesStatus::Diverges);
  EXPECT_NEAR(m_minus_one(linear(2, 1, 0), 100, 1e-12).value, std::log(2.0), 1e-12);
  EXPECT_THROW(m_minus_one(mm1(2, 1, 0.5), 100, 1e-12), InvalidArgument);
}

TEST(Rates, Mu0AndAtomParameter) {
  EXPECT_EQ(mu0_from_a(0.0, 1.0), 1.0);
  EXPECT_EQ(mu0_from_a(1.0, 1.0), 0.5);
  EXPECT_EQ(mu0_from_a(std::numeric_limits<double>::infinity(), 1.0), 0.0);
  EXPECT_THROW(a_from_mu0(0.0, 1.0), AtomParameterInfinite);
  EXPECT_THROW(a_from_mu0(1.5, 1.0), Mu0ExceedsBound);
  for (double m : {0.3, 1.0, 7.0}) {
    for (double frac : {0.01, 0.2, 0.5, 0.9, 1.0}) {
      const double mu0 = frac / m;
      EXPECT_LE(oracle::rel(mu0_from_a(a_from_mu0(mu0, m), m), mu0), 1e-12);
    }
  }
}

TEST(Rates, ClassifyClosedFormCases) {
  for (std::size_t n : {20u, 50u, 120u}) {
    for (const RateSet& r : {mm1(2, 1, 0), mm1(1, 2, 0), mminf(1, 1, 0), mminf(3, 2, 0)}) {
      const Verdict v = classify(r, n, 1e-10);
      EXPECT_EQ(v.uniqueness, Uniqueness::Unique) << n;
      EXPECT_EQ(v.reason, UniqueReason::SeriesDiverges) << n;
      EXPECT_EQ(v.determinacy, Determinacy::DetS) << n;
    }
  }
}

TEST(Rates, ClassifyQuarticIsNonUnique) {
  const Verdict v = classify(quartic(), 200, 1e-10);
  EXPECT_EQ(v.uniqueness, Uniqueness::NonUnique);
  EXPECT_EQ(v.determinacy, Determinacy::IndetS);
  ASSERT_TRUE(v.m_minus_one.has_value());
  // Frozen high-precision value of sum 1/(lambda_n pi_n).
  EXPECT_NEAR(*v.m_minus_one, 0.12064521553190498, 1e-9);
  EXPECT_NEAR(v.pi_series.value, 1.0942198076132383, 1e-6);
}

TEST(Rates, ClassifyKillingCases) {
  // Same coefficients as quartic(), killing rate at the saturation point.
  const double m = 0.12064521553190498;
  // At saturation mu_n > lambda_n, so the 1/(lambda_n pi_n) terms grow.
  const Verdict sat = classify(coefficient_family_member(quartic(), 1.0 / m, 400), 150, 1e-8);
  EXPECT_EQ(sat.uniqueness, Uniqueness::Unique);
  EXPECT_EQ(sat.reason, UniqueReason::SeriesDiverges);
  // The saturation branch itself, reached through a loose tolerance.
  const Verdict loose = classify(coefficient_family_member(quartic(), 0.7 / m, 400), 150, 0.35);
  EXPECT_EQ(loose.uniqueness, Uniqueness::Unique);
  EXPECT_EQ(loose.reason, UniqueReason::Mu0Saturates);
  const Verdict half = classify(coefficient_family_member(quartic(), 0.5 / m, 400), 150, 1e-8);
  EXPECT_EQ(half.uniqueness, Uniqueness::NonUnique);
  EXPECT_EQ(half.determinacy, Determinacy::IndetS);
  const Verdict k = classify(mm1(1, 2, 1), 50, 1e-10);
  EXPECT_EQ(k.uniqueness, Uniqueness::Unique);
}

TEST(Rates, ClassifyAdversarialTableIsInconclusive) {
  std::vector<double> lambda, mu;
  double q = 1.0;
  for (int n = 0; n < 400; ++n) {
    lambda.push_back(q);
    mu.push_back(0.9995 * q);
    q *= 1.0015;
  }
  const RateSet r = table(lambda, mu, 0.0);
  for (std::size_t n : {50u, 200u}) {
    const Verdict v = classify(r, n, 1e-10);
    EXPECT_EQ(v.uniqueness, Uniqueness::Inconclusive);
  }
}
