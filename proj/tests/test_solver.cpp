// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <gtest/gtest.h>
#include "kgp/error.hpp"
#include "kgp/solver.hpp"
#include "support.hpp"

namespace kgp
{
namespace
{

const Nonlinearity cubic = Nonlinearity::power_law(3.0, Amplitude::constant(1.0));

FieldPair two_mode_target(const Truncation &tr, double eps)
{
  return FieldPair(SpectralField::mode(tr, 1, 1, 0.3), SpectralField::mode(tr, 2, 1, 0.3), 1.0,
                   eps);
}

double distance(const FieldPair &a, const FieldPair &b)
{
  return std::hypot(l2_norm(a.u - b.u), l2_norm(a.v - b.v));
}

SolveConfig config(const Truncation &tr, double eps)
{
  SolveConfig cfg;
  cfg.b = 1.0;
  cfg.eps = eps;
  cfg.trunc = tr;
  cfg.tol_residual = 1e-11;
  return cfg;
}

TEST(Newton, RecoversManufacturedSolution)
{
  const Truncation tr{6, 6};
  const FieldPair target = two_mode_target(tr, 0.05);
  const Forcing forcing = manufactured_forcing(target, cubic, cubic);
  const auto rep = newton_solve(config(tr, 0.05), cubic, cubic, forcing);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.iterations, 10);
  EXPECT_LT(distance(rep.state, target), 1e-9);
  EXPECT_EQ(rep.residual_history.size(), static_cast<std::size_t>(rep.iterations) + 1);
  EXPECT_TRUE(rep.nontrivial);
  EXPECT_FALSE(rep.decoupled);
}

TEST(Newton, FiniteDifferenceJacobianAlsoConverges)
{
  const Truncation tr{5, 4};
  const FieldPair target = two_mode_target(tr, 0.1);
  const Forcing forcing = manufactured_forcing(target, cubic, cubic);
  SolveConfig cfg = config(tr, 0.1);
  cfg.jacobian = JacobianKind::FiniteDifference;
  cfg.tol_residual = 1e-9;
  const auto rep = newton_solve(cfg, cubic, cubic, forcing);
  EXPECT_LT(distance(rep.state, target), 1e-8);
}

TEST(Newton, NonIntegerExponentWithTimeDependentAmplitude)
{
  const Truncation tr{5, 5};
  const auto f = Nonlinearity::power_law(2.5, Amplitude::cos_t(1.0, 0.5));
  const FieldPair target = two_mode_target(tr, 0.05);
  const Forcing forcing = manufactured_forcing(target, f, cubic);
  const auto rep = newton_solve(config(tr, 0.05), f, cubic, forcing);
  EXPECT_LT(distance(rep.state, target), 1e-9);
}

TEST(Newton, DecoupledWhenEpsIsZero)
{
  const Truncation tr{5, 4};
  const FieldPair target = two_mode_target(tr, 0.0);
  const auto rep = newton_solve(config(tr, 0.0), cubic, cubic,
                                manufactured_forcing(target, cubic, cubic));
  EXPECT_TRUE(rep.decoupled);
  EXPECT_LT(distance(rep.state, target), 1e-9);
}

TEST(Newton, ZeroProblemStaysAtZero)
{
  const auto rep = newton_solve(config(Truncation{4, 4}, 0.1), cubic, cubic);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 0);
  EXPECT_TRUE(rep.state.u.is_zero());
  EXPECT_FALSE(rep.nontrivial);
}

TEST(Newton, IterationCapRaisesWithPartialReport)
{
  const Truncation tr{6, 6};
  const FieldPair target(SpectralField::mode(tr, 1, 1, 2.0), SpectralField::mode(tr, 2, 1, 2.0),
                         1.0, 0.05);
  SolveConfig cfg = config(tr, 0.05);
  cfg.max_newton = 1;
  try
  {
    (void)newton_solve(cfg, cubic, cubic, manufactured_forcing(target, cubic, cubic));
    FAIL() << "expected SolveFailure";
  }
  catch (const SolveFailure &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::MaxIterations);
    EXPECT_FALSE(e.report().converged);
    EXPECT_EQ(e.report().iterations, 1);
    EXPECT_FALSE(e.report().failure.empty());
  }
}

TEST(Newton, InvalidConfigRejected)
{
  SolveConfig cfg = config(Truncation{3, 3}, 0.0);
  cfg.b = 3.0;
  EXPECT_THROW((void)newton_solve(cfg, cubic, cubic), Error);
  cfg = config(Truncation{3, 3}, 0.0);
  cfg.initial_guess = InitialGuess::single_mode(5, 0, 1.0);
  EXPECT_THROW((void)newton_solve(cfg, cubic, cubic), Error);
}

TEST(FixedPoint, ConvergesForSmallData)
{
  const Truncation tr{4, 4};
  const FieldPair target(SpectralField::mode(tr, 2, 1, 0.05), SpectralField::mode(tr, 1, 0, 0.05),
                         1.0, 0.05);
  SolveConfig cfg = config(tr, 0.05);
  cfg.max_newton = 200;
  const auto rep = fixed_point_solve(cfg, cubic, cubic, manufactured_forcing(target, cubic, cubic));
  EXPECT_TRUE(rep.converged);
  EXPECT_LT(distance(rep.state, target), 1e-9);
}

TEST(Refine, ExactSolutionIsFixedPointOfLaterStages)
{
  const Truncation t1{2, 1};
  const FieldPair target(SpectralField::mode(t1, 1, 1, 0.3), SpectralField::mode(t1, 2, 1, 0.2),
                         1.0, 0.05);
  // Forcing built at the largest stage so that target is exact at every stage.
  const Truncation t3{6, 6};
  const Forcing forcing = manufactured_forcing(target.resized(t3), cubic, cubic);
  const auto stages = refine({t1, Truncation{4, 3}, t3}, config(t1, 0.05), cubic, cubic, forcing);
  ASSERT_EQ(stages.size(), 3u);
  EXPECT_FALSE(stages[0].increment.has_value());
  // The first stage truncates the forcing, so its solution differs; later stages agree.
  EXPECT_LT(*stages[2].increment, 1e-10);
  EXPECT_LT(distance(stages[2].report.state, target.resized(t3)), 1e-10);
  EXPECT_THROW(refine({t3, t1}, config(t1, 0.05), cubic, cubic, forcing), Error);
}

TEST(Refine, ManufacturedInsideSmallestTruncation)
{
  // f = 0 keeps the solution inside the smallest truncation at every stage.
  const auto zero = Nonlinearity::zero();
  const Truncation t1{2, 2};
  const FieldPair target(SpectralField::mode(t1, 1, 1, 0.3), SpectralField::mode(t1, 2, 0, 0.2),
                         1.0, 0.05);
  const Forcing forcing = manufactured_forcing(target, zero, zero);
  const auto stages =
      refine({t1, Truncation{4, 4}, Truncation{6, 5}}, config(t1, 0.05), zero, zero, forcing);
  EXPECT_LT(*stages[1].increment, 1e-10);
  EXPECT_LT(*stages[2].increment, 1e-10);
}

TEST(Continuation, FirstOrderConvergenceInEps)
{
  const Truncation tr{6, 6};
  const FieldPair target = two_mode_target(tr, 0.0);
  const Forcing forcing = manufactured_forcing(target, cubic, cubic);
  const auto sweep =
      continuation_in_epsilon({0.2, 0.1, 0.05, 0.025}, config(tr, 0.0), cubic, cubic, forcing);
  ASSERT_TRUE(sweep.completed);
  ASSERT_EQ(sweep.rows.size(), 5u);  // eps = 0 appended
  EXPECT_EQ(sweep.rows.back().eps, 0.0);
  EXPECT_EQ(sweep.rows.back().err_u_l2, 0.0);
  for (std::size_t i = 1; i + 1 < sweep.rows.size(); ++i)
  {
    const double ratio = sweep.rows[i].err_u_l2 / sweep.rows[i - 1].err_u_l2;
    EXPECT_GT(ratio, 0.4);
    EXPECT_LT(ratio, 0.6);
  }
  EXPECT_LT(distance(sweep.reports.back().state, target), 1e-9);
  EXPECT_LT(*sweep.decoupled_residual_u, 1e-9);
  EXPECT_LT(*sweep.decoupled_residual_v, 1e-9);
}

TEST(Continuation, SingleZeroEntry)
{
  const auto sweep = continuation_in_epsilon({0.0}, config(Truncation{3, 3}, 0.0), cubic, cubic);
  ASSERT_EQ(sweep.rows.size(), 1u);
  EXPECT_EQ(sweep.rows[0].err_u_l2, 0.0);
}

TEST(Continuation, RejectsIncreasingList)
{
  EXPECT_THROW(continuation_in_epsilon({0.1, 0.2}, config(Truncation{3, 3}, 0.0), cubic, cubic),
               Error);
}

TEST(Continuation, WarningRecordedAboveThreshold)
{
  const auto sweep =
      continuation_in_epsilon({0.6, 0.0}, config(Truncation{3, 3}, 0.0), cubic, cubic);
  EXPECT_TRUE(sweep.rows[0].coupling_warning);
  EXPECT_FALSE(sweep.rows[1].coupling_warning);
}

TEST(Continuation, FailedStageLeavesPartialRows)
{
  const Truncation tr{6, 6};
  const FieldPair target(SpectralField::mode(tr, 1, 1, 2.0), SpectralField::mode(tr, 2, 1, 2.0),
                         1.0, 0.0);
  SolveConfig cfg = config(tr, 0.0);
  cfg.max_newton = 1;
  const auto sweep = continuation_in_epsilon({0.1, 0.0}, cfg, cubic, cubic,
                                             manufactured_forcing(target, cubic, cubic));
  EXPECT_FALSE(sweep.completed);
  EXPECT_FALSE(sweep.failure.empty());
  ASSERT_FALSE(sweep.rows.empty());
  EXPECT_TRUE(std::isnan(sweep.rows[0].err_u_l2));
}

TEST(Search, NeverReturnsSemiTrivialStates)
{
  const Truncation tr{5, 5};
  for (double eps : {0.1, -0.2})
  {
    const auto result = nontrivial_search(config(tr, eps), cubic, cubic, 4);
    EXPECT_EQ(result.launches, 12);
    for (const auto &s : result.solutions)
    {
      EXPECT_TRUE(s.converged);
      EXPECT_FALSE(is_semi_trivial(s.state));
      EXPECT_GT(l2_norm(s.state.u), kNontrivialThreshold);
      EXPECT_GT(l2_norm(s.state.v), kNontrivialThreshold);
    }
    EXPECT_EQ(result.none_found, result.solutions.empty());
  }
}

TEST(Search, ZeroCapReturnsNothing)
{
  const auto result = nontrivial_search(config(Truncation{3, 3}, 0.1), cubic, cubic, 0);
  EXPECT_TRUE(result.solutions.empty());
  EXPECT_EQ(result.launches, 0);
}

TEST(Search, SemiTrivialPredicate)
{
  const Truncation tr{2, 2};
  EXPECT_TRUE(is_semi_trivial(FieldPair(SpectralField::mode(tr, 1, 0), SpectralField(tr), 1, 0)));
  EXPECT_FALSE(is_semi_trivial(FieldPair::zero(tr, 1, 0)));
  EXPECT_FALSE(is_semi_trivial(
      FieldPair(SpectralField::mode(tr, 1, 0), SpectralField::mode(tr, 1, 0), 1, 0)));
}

}  // namespace
}  // namespace kgp
