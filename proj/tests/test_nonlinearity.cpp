// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <gtest/gtest.h>
#include "kgp/error.hpp"
#include "kgp/nonlinearity.hpp"

namespace kgp
{
namespace
{

TEST(Nonlinearity, PowerLawValues)
{
  const auto nl = Nonlinearity::power_law(3.0, Amplitude::constant(2.0));
  EXPECT_DOUBLE_EQ(nl.f(0.0, 1.0, -1.5), 2.0 * -3.375);
  EXPECT_DOUBLE_EQ(nl.F(0.0, 1.0, -1.5), 2.0 * std::pow(1.5, 4) / 4.0);
  EXPECT_DOUBLE_EQ(nl.df(0.0, 1.0, -1.5), 2.0 * 3.0 * 2.25);
  EXPECT_TRUE(nl.integer_exponent());
  const auto frac = Nonlinearity::power_law(2.5, Amplitude::cos_t(1.0, 0.5));
  EXPECT_FALSE(frac.integer_exponent());
  EXPECT_NEAR(frac.f(0.0, 1.0, -2.0), -1.5 * std::pow(2.0, 2.5), 1e-12);
  EXPECT_DOUBLE_EQ(frac.c0(), 1.5);
}

TEST(Nonlinearity, PrimitiveAndDerivativeConsistent)
{
  for (const auto &nl : {Nonlinearity::power_law(3.0, Amplitude::cos_t(1.0, 0.3)),
                         Nonlinearity::power_law(1.7, Amplitude::constant(1.0)),
                         Nonlinearity::polynomial({0.0, 0.0, 0.5, 1.0}, 3.0, 2.0)})
  {
    for (double xi : {-2.0, -0.3, 0.4, 1.7})
    {
      const double t = 0.8, x = 1.3, h = 1e-5;
      const double dF = (nl.F(t, x, xi + h) - nl.F(t, x, xi - h)) / (2 * h);
      EXPECT_NEAR(dF, nl.f(t, x, xi), 1e-8 * (1 + std::abs(nl.f(t, x, xi)))) << nl.name();
      const double df = (nl.f(t, x, xi + h) - nl.f(t, x, xi - h)) / (2 * h);
      EXPECT_NEAR(df, nl.df(t, x, xi), 1e-7 * (1 + std::abs(df))) << nl.name();
    }
  }
}

TEST(Nonlinearity, QuadraturePrimitive)
{
  const auto nl = Nonlinearity::from_function(
      "sinh", [](double, double, double xi) { return std::sinh(xi) - xi; }, 3.0, 1.0);
  for (double xi : {-1.2, 0.5, 2.0})
  {
    EXPECT_NEAR(nl.F(0.0, 0.0, xi), std::cosh(xi) - 1.0 - xi * xi / 2.0, 1e-10);
  }
  EXPECT_FALSE(nl.has_derivative());
}

TEST(Nonlinearity, InvalidConstruction)
{
  try
  {
    (void)Nonlinearity::power_law(3.0, Amplitude::cos_t(1.0, 1.5));
    FAIL() << "expected NonPositiveAmplitude";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveAmplitude);
  }
  EXPECT_THROW((void)Nonlinearity::power_law(3.0, Amplitude::constant(0.0)), Error);
  EXPECT_THROW((void)Nonlinearity::power_law(1.0, Amplitude::constant(1.0)), Error);
}

TEST(Hypotheses, PowerLawPassesAll)
{
  const SampleSet s = SampleSet::standard();
  for (double p : {1.1, 2.0, 3.0, 5.0})
  {
    const auto r = check_all(Nonlinearity::power_law(p, Amplitude::cos_t(1.0, 0.5)), s);
    EXPECT_TRUE(r.all_pass()) << "p = " << p << " h2 note: " << r.h2.note;
    EXPECT_EQ(r.growth.status, CheckStatus::Pass);
  }
}

TEST(Hypotheses, LinearFailsSuperlinearityWithWitness)
{
  const auto r = check_all(Nonlinearity::polynomial({0.0, 1.0}, 2.0, 1.0), SampleSet::standard());
  EXPECT_EQ(r.h3.status, CheckStatus::Fail);
  ASSERT_TRUE(r.h3.witness.has_value());
  const auto &w = *r.h3.witness;
  // (p+1) F > f xi at the witness: 3 xi^2/2 > xi^2.
  EXPECT_GT(1.5 * w.xi * w.xi, w.xi * w.xi);
  EXPECT_FALSE(r.all_pass());
}

TEST(Hypotheses, NegativeCubicFailsMonotonicity)
{
  const auto r = check_all(Nonlinearity::polynomial({0.0, 0.0, 0.0, -1.0}, 3.0, 1.0),
                           SampleSet::standard());
  EXPECT_EQ(r.h4.status, CheckStatus::Fail);
  ASSERT_TRUE(r.h4.witness.has_value());
  const auto &w = *r.h4.witness;
  EXPECT_LT(w.xi, w.xi2);
  EXPECT_GT(-std::pow(w.xi, 3), -std::pow(w.xi2, 3));
}

TEST(Hypotheses, GrowthBoundExceeded)
{
  // Declared c0 too small for the actual size of f.
  const auto nl = Nonlinearity::polynomial({0.0, 0.0, 0.0, 10.0}, 3.0, 1.0);
  EXPECT_EQ(check_h1(nl, SampleSet::standard()).status, CheckStatus::Fail);
}

TEST(Hypotheses, GrowthFitConstants)
{
  const auto g = check_growth(Nonlinearity::power_law(3.0, Amplitude::constant(1.0)),
                              SampleSet::standard());
  EXPECT_NEAR(g.c1, 0.25, 1e-12);
  EXPECT_NEAR(g.c2, 0.0, 1e-12);
  EXPECT_FALSE(g.degenerate);
  const auto z = check_growth(Nonlinearity::zero(), SampleSet::standard());
  EXPECT_TRUE(z.degenerate);
}

TEST(Hypotheses, SeededSamplesAreDeterministic)
{
  const auto a = SampleSet::standard(42, 16);
  const auto b = SampleSet::standard(42, 16);
  const auto c = SampleSet::standard(43, 16);
  EXPECT_EQ(a.xi, b.xi);
  EXPECT_NE(a.xi, c.xi);
  EXPECT_EQ(SampleSet::standard().size(), 17u * 17u * 82u);
}

}  // namespace
}  // namespace kgp
