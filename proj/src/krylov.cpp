// SPDX-License-Identifier: Apache-2.0

#include "kgp/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kgp
{

namespace
{

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    s += a[i] * b[i];
  }
  return s;
}

double norm2(std::span<const double> a)
{
  return std::sqrt(dot(a, a));
}

void axpy(double a, std::span<const double> x, std::span<double> y)
{
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    y[i] += a * x[i];
  }
}

}  // namespace

KrylovResult gmres(const LinearMap &A, const LinearMap &precond, std::span<const double> rhs,
                   std::span<double> x, double tol, int max_iterations, int restart)
{
  using std::size_t;
  const size_t n = rhs.size();
  KrylovResult result;
  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0)
  {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    result.relative_residual = 0.0;
    return result;
  }
  const size_t m_max = static_cast<size_t>(std::clamp<int>(restart, 1, static_cast<int>(n)));
  const double target = tol * rhs_norm;

  std::vector<double> r(n), w(n), z(n), y(m_max);
  std::vector<std::vector<double>> V(m_max + 1, std::vector<double>(n));
  // Column-major upper Hessenberg, H(i, c) = H[c * (m_max + 1) + i].
  std::vector<double> H((m_max + 1) * m_max);
  auto h = [&](size_t i, size_t c) -> double & { return H[c * (m_max + 1) + i]; };
  std::vector<double> cs(m_max), sn(m_max), g(m_max + 1);

  auto residual_norm = [&]() {
    A(x, w);
    for (size_t i = 0; i < n; ++i)
    {
      r[i] = rhs[i] - w[i];
    }
    return norm2(r);
  };

  double beta = residual_norm();
  while (std::isfinite(beta) && beta > target && result.iterations < max_iterations)
  {
    for (size_t i = 0; i < n; ++i)
    {
      V[0][i] = r[i] / beta;
    }
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    size_t m = 0;
    while (m < m_max && result.iterations < max_iterations)
    {
      ++result.iterations;
      precond(V[m], z);
      A(z, w);
      for (size_t i = 0; i <= m; ++i)
      {
        h(i, m) = dot(w, V[i]);
        axpy(-h(i, m), V[i], w);
      }
      const double next = norm2(w);
      h(m + 1, m) = next;
      if (next > 0.0)
      {
        for (size_t q = 0; q < n; ++q)
        {
          V[m + 1][q] = w[q] / next;
        }
      }
      for (size_t i = 0; i < m; ++i)
      {
        const double a = h(i, m), b = h(i + 1, m);
        h(i, m) = cs[i] * a + sn[i] * b;
        h(i + 1, m) = -sn[i] * a + cs[i] * b;
      }
      const double denom = std::hypot(h(m, m), h(m + 1, m));
      if (denom == 0.0)
      {
        break;
      }
      cs[m] = h(m, m) / denom;
      sn[m] = h(m + 1, m) / denom;
      h(m, m) = denom;
      h(m + 1, m) = 0.0;
      g[m + 1] = -sn[m] * g[m];
      g[m] *= cs[m];
      ++m;
      if (std::abs(g[m]) <= target || next == 0.0)
      {
        break;
      }
    }
    if (m == 0)
    {
      break;
    }
    for (size_t i = m; i-- > 0;)
    {
      double s = g[i];
      for (size_t q = i + 1; q < m; ++q)
      {
        s -= h(i, q) * y[q];
      }
      y[i] = s / h(i, i);
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (size_t i = 0; i < m; ++i)
    {
      axpy(y[i], V[i], w);
    }
    precond(w, z);
    axpy(1.0, z, x);
    const double previous = beta;
    beta = residual_norm();
    if (!(beta < previous))
    {
      break;  // stagnated over a full cycle
    }
  }
  result.relative_residual = beta / rhs_norm;
  result.converged = std::isfinite(beta) && beta <= target;
  return result;
}

}  // namespace kgp
