// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <gtest/gtest.h>
#include "kgp/error.hpp"
#include "kgp/transform.hpp"
#include "support.hpp"

namespace kgp
{
namespace
{

using testing::Gen;

TEST(Transform, GridValuesMatchPointEvaluation)
{
  Gen gen(21);
  const Truncation tr{5, 4};
  const auto u = gen.field(tr);
  const GridField g = to_grid(u, 16, 9);
  for (int i = 0; i < g.nt; ++i)
  {
    for (int m = 0; m < g.nx; ++m)
    {
      EXPECT_NEAR(g(i, m), u.evaluate(g.t(i), g.x(m)), 1e-13);
    }
  }
}

TEST(Transform, RoundTripAtMinimalSize)
{
  Gen gen(22);
  for (const Truncation tr : {Truncation{1, 0}, Truncation{3, 1}, Truncation{8, 8}, Truncation{6, 11}})
  {
    const auto u = gen.field(tr);
    GridTransform t(min_time_points(tr), min_space_points(tr));
    const auto back = t.from_grid(t.to_grid(u), tr);
    EXPECT_LT(l2_norm(back - u), 1e-13 * (1.0 + l2_norm(u)));
  }
}

TEST(Transform, GridIntegralOfProductIsL2Inner)
{
  Gen gen(23);
  const Truncation tr{6, 5};
  const auto u = gen.field(tr);
  const auto v = gen.field(tr);
  // Product has degree 2K in t and needs nx + 1 > J to avoid folding in x.
  GridTransform t(2 * tr.K + 2, 2 * tr.J + 1);
  GridField a = t.to_grid(u), b = t.to_grid(v);
  for (std::size_t n = 0; n < a.values.size(); ++n)
  {
    a.values[n] *= b.values[n];
  }
  EXPECT_NEAR(a.integral(), l2_inner(u, v), 1e-12);
}

TEST(Transform, AliasedGridRejected)
{
  const Truncation tr{4, 3};
  GridTransform t(7, 4);
  try
  {
    t.require_alias_free(tr);
    FAIL() << "expected AliasedGrid";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::AliasedGrid);
  }
  EXPECT_THROW(to_grid(SpectralField(tr), 8, 3), Error);
}

TEST(Transform, FromGridIsGalerkinProjection)
{
  // A product of two modes projects onto the modes of its product expansion.
  const Truncation tr{4, 2};
  GridTransform t(32, 31);
  GridField g(t.nt(), t.nx());
  for (int i = 0; i < g.nt; ++i)
  {
    for (int m = 0; m < g.nx; ++m)
    {
      // sin x cos t * sin x = (1 - cos 2x)/2 cos t, whose sine coefficients are finite.
      g(i, m) = std::sin(g.x(m)) * std::cos(g.t(i)) * std::sin(g.x(m));
    }
  }
  const auto p = t.from_grid(g, tr);
  // Sine coefficients of (1 - cos 2x)/2 vanish for even j; cos t puts half on each e^{+-it}.
  for (int j = 1; j <= 4; ++j)
  {
    double expect = 0.0;
    if (j % 2 == 1)
    {
      const double integral = 0.5 * (2.0 / j - 2.0 * j / (j * j - 4.0));
      expect = 0.5 * integral * 2.0 / testing::kPi;
    }
    EXPECT_NEAR(p.coeff(j, 1).real(), expect, 2e-4) << "j = " << j;
    EXPECT_NEAR(p.coeff(j, 0).real(), 0.0, 1e-14);
  }
}

}  // namespace
}  // namespace kgp
