// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_TESTS_SUPPORT_HPP
#define KGP_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>
#include "kgp/spectral_field.hpp"
#include "kgp/wave_rep.hpp"

namespace kgp::testing
{

inline constexpr double kPi = std::numbers::pi;

// Seeded generators for property tests. Coefficients decay like 1/(1+j+k) so that
// random states stay in a moderate range for nonlinear evaluations.
class Gen
{
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  SpectralField field(const Truncation &trunc, double scale = 1.0)
  {
    SpectralField u(trunc);
    for (int j = 1; j <= trunc.J; ++j)
    {
      for (int k = 0; k <= trunc.K; ++k)
      {
        const double s = scale / (1.0 + j + k);
        const double re = uniform(-s, s);
        const double im = k == 0 ? 0.0 : uniform(-s, s);
        u.set(j, k, Complex(re, im));
      }
    }
    return u;
  }

  // Field with every kernel coefficient (j = k) zero.
  SpectralField range_field(const Truncation &trunc, double scale = 1.0)
  {
    SpectralField u = field(trunc, scale);
    for (int k = 1; k <= std::min(trunc.J, trunc.K); ++k)
    {
      u.set(k, k, 0.0);
    }
    return u;
  }

  // Field supported on kernel modes only.
  SpectralField kernel_field(const Truncation &trunc, double scale = 1.0)
  {
    SpectralField u(trunc);
    for (int k = 1; k <= std::min(trunc.J, trunc.K); ++k)
    {
      u.set(k, k, Complex(uniform(-scale, scale), uniform(-scale, scale)));
    }
    return u;
  }

  KernelProfile profile(int K, double scale = 1.0)
  {
    KernelProfile p(K);
    for (int k = 1; k <= K; ++k)
    {
      p.set(k, Complex(uniform(-scale, scale), uniform(-scale, scale)));
    }
    return p;
  }

  std::mt19937_64 &engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

// Brute-force grid integral of a*b over [0, 2 pi] x [0, pi] by the midpoint rule in t
// and x; exact for trigonometric polynomials once n exceeds twice their degrees.
template <class A, class B>
double grid_inner(const A &a, const B &b, int nt, int nx)
{
  const double dt = 2.0 * kPi / nt;
  const double dx = kPi / nx;
  double sum = 0.0;
  for (int i = 0; i < nt; ++i)
  {
    for (int m = 0; m < nx; ++m)
    {
      const double t = (i + 0.5) * dt;
      const double x = (m + 0.5) * dx;
      sum += a(t, x) * b(t, x);
    }
  }
  return sum * dt * dx;
}

}  // namespace kgp::testing

#endif  // KGP_TESTS_SUPPORT_HPP
