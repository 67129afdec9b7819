// SPDX-License-Identifier: Apache-2.0

#include "kgp/modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp
{

std::string_view to_string(ModeClass c)
{
  switch (c)
  {
    case ModeClass::Plus:
      return "plus";
    case ModeClass::Minus:
      return "minus";
    case ModeClass::Kernel:
      return "kernel";
  }
  return "unknown";
}

std::int64_t eigenvalue(ModeIndex m)
{
  const std::int64_t j = m.j, k = m.k;
  return j * j - k * k;
}

bool is_eigenvalue(std::int64_t n)
{
  if (n == 0)
  {
    return true;
  }
  // n = (j - |k|)(j + |k|) for n > 0, and -n = (|k| - j)(|k| + j) for n < 0. Factor
  // m = d1 * d2 with d1 <= d2 of equal parity; j >= 1 excludes d1 == d2 when n < 0.
  const std::int64_t m = std::llabs(n);
  for (std::int64_t d1 = 1; d1 * d1 <= m; ++d1)
  {
    if (m % d1 != 0)
    {
      continue;
    }
    const std::int64_t d2 = m / d1;
    if ((d1 + d2) % 2 != 0)
    {
      continue;
    }
    if (n > 0 || d2 > d1)
    {
      return true;
    }
  }
  return false;
}

bool spectrum_membership(double b, std::int64_t search_bound)
{
  if (!(b > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, fmt::format("b must be positive, got {}", b));
  }
  if (static_cast<double>(search_bound) < std::ceil(b) + 1.0)
  {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("search bound {} below ceil(b)+1 for b={}", search_bound, b));
  }
  if (b != std::floor(b))
  {
    return false;
  }
  return is_eigenvalue(-static_cast<std::int64_t>(b));
}

bool spectrum_membership(double b)
{
  return spectrum_membership(b, static_cast<std::int64_t>(std::ceil(b)) + 1);
}

void require_admissible_b(double b)
{
  if (!(b > 0.0) || !std::isfinite(b))
  {
    throw Error(ErrorKind::InvalidArgument, fmt::format("b must be positive, got {}", b));
  }
  if (spectrum_membership(b))
  {
    throw Error(ErrorKind::SpectrumCollision,
                fmt::format("-b = {} is an eigenvalue of the d'Alembert operator", -b));
  }
}

ModeClass classify(ModeIndex m, double b)
{
  if (m.j < 1)
  {
    throw Error(ErrorKind::InvalidArgument, fmt::format("mode j must be >= 1, got {}", m.j));
  }
  const double shifted = static_cast<double>(eigenvalue(m)) + b;
  if (m.j == std::abs(m.k))
  {
    return ModeClass::Kernel;
  }
  if (shifted == 0.0)
  {
    throw Error(ErrorKind::SpectrumCollision,
                fmt::format("mode ({},{}) has eigenvalue -b = {}", m.j, m.k, -b));
  }
  return shifted > 0.0 ? ModeClass::Plus : ModeClass::Minus;
}

Truncation::Truncation(int J_, int K_) : J(J_), K(K_)
{
  if (J < 1 || K < 0)
  {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("truncation needs J >= 1 and K >= 0, got J={} K={}", J, K));
  }
}

bool Truncation::contains(ModeIndex m) const
{
  return m.j >= 1 && m.j <= J && std::abs(m.k) <= K;
}

std::vector<ModeIndex> Truncation::modes() const
{
  std::vector<ModeIndex> out;
  out.reserve(static_cast<std::size_t>(mode_count()));
  for (int j = 1; j <= J; ++j)
  {
    for (int k = -K; k <= K; ++k)
    {
      out.push_back({j, k});
    }
  }
  return out;
}

SpectralGapInfo spectral_gap(double b)
{
  require_admissible_b(b);
  // Outside [-ceil(b)-2, ceil(b)+2] every |lambda + b| >= 2, while an achievable lambda
  // within distance 2 of -b always exists inside the window.
  const auto c = static_cast<std::int64_t>(std::ceil(b));
  double eta = std::numeric_limits<double>::infinity();
  for (std::int64_t lambda = -c - 2; lambda <= c + 2; ++lambda)
  {
    if (is_eigenvalue(lambda))
    {
      eta = std::min(eta, std::abs(static_cast<double>(lambda) + b));
    }
  }
  SpectralGapInfo info;
  info.b = b;
  info.eta = eta;
  info.kappa = std::max(1.0 / eta, 1.0);
  info.in_spectrum = false;
  return info;
}

SpectralGapInfo spectral_gap(double b, const Truncation &)
{
  return spectral_gap(b);
}

double coupling_threshold(double b)
{
  const auto gap = spectral_gap(b);
  return 0.5 * std::min(gap.eta, b);
}

bool coupling_warning(double b, double eps)
{
  return std::abs(eps) >= coupling_threshold(b);
}

}  // namespace kgp
