// SPDX-License-Identifier: Apache-2.0

#include "kgp/spectral_field.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp
{

namespace
{

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

// Weight applied to |u_jk|^2 in the H norm.
double h_weight(ModeIndex m, double b)
{
  if (classify(m, b) == ModeClass::Kernel)
  {
    return 1.0;
  }
  return std::abs(static_cast<double>(eigenvalue(m)) + b);
}

// Sum over +-k multiplicity of a stored (j,k) entry.
constexpr double multiplicity(int k)
{
  return k == 0 ? 1.0 : 2.0;
}

}  // namespace

SpectralField::SpectralField(const Truncation &trunc)
  : trunc_(trunc), coeffs_(static_cast<std::size_t>(trunc.J) * (trunc.K + 1))
{
}

SpectralField SpectralField::mode(const Truncation &trunc, int j, int k, double amplitude)
{
  SpectralField u(trunc);
  if (k == 0)
  {
    u.set(j, 0, amplitude);
  }
  else
  {
    u.set(j, k, amplitude / std::numbers::sqrt2);
  }
  return u;
}

SpectralField SpectralField::cos_term(const Truncation &trunc, int j, int k, double amplitude)
{
  SpectralField u(trunc);
  u.set(j, k, k == 0 ? Complex(amplitude) : Complex(0.5 * amplitude));
  return u;
}

SpectralField SpectralField::sin_term(const Truncation &trunc, int j, int k, double amplitude)
{
  SpectralField u(trunc);
  if (k != 0)
  {
    // sin(kt) = (e^{ikt} - e^{-ikt}) / 2i
    u.set(j, std::abs(k), Complex(0.0, k > 0 ? -0.5 * amplitude : 0.5 * amplitude));
  }
  return u;
}

Complex SpectralField::coeff(int j, int k) const
{
  if (!trunc_.contains({j, k}))
  {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("mode ({},{}) outside truncation J={} K={}", j, k, trunc_.J,
                            trunc_.K));
  }
  const Complex c = coeffs_[index(j, std::abs(k))];
  return k < 0 ? std::conj(c) : c;
}

void SpectralField::set(int j, int k, Complex value)
{
  if (!trunc_.contains({j, k}))
  {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("mode ({},{}) outside truncation J={} K={}", j, k, trunc_.J,
                            trunc_.K));
  }
  if (k == 0 && value.imag() != 0.0)
  {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("k=0 coefficient of mode j={} must be real", j));
  }
  coeffs_[index(j, std::abs(k))] = k < 0 ? std::conj(value) : value;
}

double SpectralField::evaluate(double t, double x) const
{
  double sum = 0.0;
  for (int j = 1; j <= trunc_.J; ++j)
  {
    double row = coeffs_[index(j, 0)].real();
    for (int k = 1; k <= trunc_.K; ++k)
    {
      const Complex c = coeffs_[index(j, k)];
      // c e^{ikt} + conj(c) e^{-ikt}
      row += 2.0 * (c.real() * std::cos(k * t) - c.imag() * std::sin(k * t));
    }
    sum += row * std::sin(j * x);
  }
  return sum;
}

SpectralField SpectralField::resized(const Truncation &trunc) const
{
  SpectralField out(trunc);
  const int J = std::min(trunc.J, trunc_.J);
  const int K = std::min(trunc.K, trunc_.K);
  for (int j = 1; j <= J; ++j)
  {
    for (int k = 0; k <= K; ++k)
    {
      out.coeffs_[out.index(j, k)] = coeffs_[index(j, k)];
    }
  }
  return out;
}

double SpectralField::coefficient_energy() const
{
  double sum = 0.0;
  for (int j = 1; j <= trunc_.J; ++j)
  {
    for (int k = 0; k <= trunc_.K; ++k)
    {
      sum += multiplicity(k) * std::norm(coeffs_[index(j, k)]);
    }
  }
  return sum;
}

double SpectralField::max_abs_coeff() const
{
  double m = 0.0;
  for (const auto &c : coeffs_)
  {
    m = std::max(m, std::abs(c));
  }
  return m;
}

bool SpectralField::is_zero() const
{
  for (const auto &c : coeffs_)
  {
    if (c != Complex(0.0))
    {
      return false;
    }
  }
  return true;
}

void SpectralField::require_same(const SpectralField &other) const
{
  if (!(trunc_ == other.trunc_))
  {
    throw Error(ErrorKind::TruncationMismatch,
                fmt::format("truncations differ: ({},{}) vs ({},{})", trunc_.J, trunc_.K,
                            other.trunc_.J, other.trunc_.K));
  }
}

SpectralField &SpectralField::operator+=(const SpectralField &other)
{
  require_same(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
  {
    coeffs_[i] += other.coeffs_[i];
  }
  return *this;
}

SpectralField &SpectralField::operator-=(const SpectralField &other)
{
  require_same(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
  {
    coeffs_[i] -= other.coeffs_[i];
  }
  return *this;
}

SpectralField &SpectralField::operator*=(double s)
{
  for (auto &c : coeffs_)
  {
    c *= s;
  }
  return *this;
}

SplitField split(const SpectralField &u, double b)
{
  require_admissible_b(b);
  const auto &trunc = u.truncation();
  SplitField parts{SpectralField(trunc), SpectralField(trunc), SpectralField(trunc)};
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      const Complex c = u.coeff(j, k);
      switch (classify({j, k}, b))
      {
        case ModeClass::Plus:
          parts.plus.set(j, k, c);
          break;
        case ModeClass::Minus:
          parts.minus.set(j, k, c);
          break;
        case ModeClass::Kernel:
          parts.kernel.set(j, k, c);
          break;
      }
    }
  }
  return parts;
}

SpectralField range_part(const SpectralField &u)
{
  SpectralField out = u;
  for (int j = 1; j <= u.truncation().J && j <= u.truncation().K; ++j)
  {
    out.set(j, j, 0.0);
  }
  return out;
}

SpectralField kernel_part(const SpectralField &u)
{
  SpectralField out(u.truncation());
  for (int j = 1; j <= u.truncation().J && j <= u.truncation().K; ++j)
  {
    out.set(j, j, u.coeff(j, j));
  }
  return out;
}

double h_norm_squared(const SpectralField &u, double b)
{
  require_admissible_b(b);
  const auto &trunc = u.truncation();
  double sum = 0.0;
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      sum += multiplicity(k) * h_weight({j, k}, b) * std::norm(u.coeff(j, k));
    }
  }
  return kPi2 * sum;
}

double h_norm(const SpectralField &u, double b)
{
  return std::sqrt(h_norm_squared(u, b));
}

double l2_inner(const SpectralField &u, const SpectralField &v)
{
  if (!(u.truncation() == v.truncation()))
  {
    throw Error(ErrorKind::TruncationMismatch, "l2_inner needs fields on one truncation");
  }
  const auto a = u.stored();
  const auto c = v.stored();
  const int K = u.truncation().K;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    const int k = static_cast<int>(i % static_cast<std::size_t>(K + 1));
    // u_jk conj(v_jk) + u_{j,-k} conj(v_{j,-k}) = 2 Re(u_jk conj(v_jk)) for k > 0
    sum += multiplicity(k) * (a[i] * std::conj(c[i])).real();
  }
  return kPi2 * sum;
}

double l2_norm(const SpectralField &u)
{
  return std::sqrt(kPi2 * u.coefficient_energy());
}

SpectralField apply_L_plus_b(const SpectralField &u, double b)
{
  SpectralField out = u;
  const auto &trunc = u.truncation();
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      out.set(j, k, (static_cast<double>(eigenvalue({j, k})) + b) * u.coeff(j, k));
    }
  }
  return out;
}

SpectralField apply_L(const SpectralField &u)
{
  SpectralField out = u;
  const auto &trunc = u.truncation();
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      out.set(j, k, static_cast<double>(eigenvalue({j, k})) * u.coeff(j, k));
    }
  }
  return out;
}

SpectralField invert_L_plus_b(const SpectralField &h, double b)
{
  require_admissible_b(b);
  SpectralField out = h;
  const auto &trunc = h.truncation();
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      out.set(j, k, h.coeff(j, k) / (static_cast<double>(eigenvalue({j, k})) + b));
    }
  }
  return out;
}

std::size_t packed_size(const Truncation &trunc)
{
  return static_cast<std::size_t>(trunc.J) * static_cast<std::size_t>(2 * trunc.K + 1);
}

void pack(const SpectralField &u, std::span<double> out)
{
  const auto &trunc = u.truncation();
  if (out.size() != packed_size(trunc))
  {
    throw Error(ErrorKind::InvalidArgument, "packed buffer has the wrong size");
  }
  std::size_t p = 0;
  for (int j = 1; j <= trunc.J; ++j)
  {
    out[p++] = u.coeff(j, 0).real();
    for (int k = 1; k <= trunc.K; ++k)
    {
      const Complex c = u.coeff(j, k);
      out[p++] = c.real();
      out[p++] = c.imag();
    }
  }
}

SpectralField unpack(const Truncation &trunc, std::span<const double> in)
{
  if (in.size() != packed_size(trunc))
  {
    throw Error(ErrorKind::InvalidArgument, "packed buffer has the wrong size");
  }
  SpectralField u(trunc);
  std::size_t p = 0;
  for (int j = 1; j <= trunc.J; ++j)
  {
    u.set(j, 0, in[p++]);
    for (int k = 1; k <= trunc.K; ++k)
    {
      const double re = in[p++];
      const double im = in[p++];
      u.set(j, k, Complex(re, im));
    }
  }
  return u;
}

}  // namespace kgp
