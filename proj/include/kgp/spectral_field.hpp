// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_SPECTRAL_FIELD_HPP
#define KGP_SPECTRAL_FIELD_HPP

#include <complex>
#include <span>
#include <vector>
#include "kgp/modes.hpp"

namespace kgp
{

using Complex = std::complex<double>;

//
// Truncated coefficients {u_jk} of a real field u(t,x) = sum u_jk sin(jx) e^{ikt}.
// Only k >= 0 is stored; u_{j,-k} = conj(u_{j,k}) and u_{j,0} is real.
//
class SpectralField
{
public:
  SpectralField() : SpectralField(Truncation{}) {}
  explicit SpectralField(const Truncation &trunc);

  // Real mode with coefficient energy sum_{+-k} |u_jk|^2 = amplitude^2, i.e.
  // amplitude * sin(jx) for k = 0 and sqrt(2) * amplitude * sin(jx) cos(kt) otherwise.
  static SpectralField mode(const Truncation &trunc, int j, int k, double amplitude = 1.0);

  // amplitude * sin(jx) cos(kt) and amplitude * sin(jx) sin(kt), k >= 0.
  static SpectralField cos_term(const Truncation &trunc, int j, int k, double amplitude);
  static SpectralField sin_term(const Truncation &trunc, int j, int k, double amplitude);

  const Truncation &truncation() const { return trunc_; }

  // Any k in [-K, K]; negative k is derived by conjugation.
  Complex coeff(int j, int k) const;
  Complex coeff(ModeIndex m) const { return coeff(m.j, m.k); }
  // Sets (j,k) and, implicitly, (j,-k). k = 0 requires a real value.
  void set(int j, int k, Complex value);

  // Physical storage, (J) x (K+1) row-major in (j-1, k).
  std::span<const Complex> stored() const { return coeffs_; }
  std::span<Complex> stored() { return coeffs_; }

  // Point evaluation by direct summation.
  double evaluate(double t, double x) const;

  // Zero-pad or cut to another truncation.
  SpectralField resized(const Truncation &trunc) const;

  // Sum over all k in [-K, K] of |u_jk|^2 (without the pi^2 factor).
  double coefficient_energy() const;
  double max_abs_coeff() const;
  bool is_zero() const;

  SpectralField &operator+=(const SpectralField &other);
  SpectralField &operator-=(const SpectralField &other);
  SpectralField &operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField &b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField &b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend bool operator==(const SpectralField &, const SpectralField &) = default;

private:
  std::size_t index(int j, int k) const
  {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(trunc_.K + 1) +
           static_cast<std::size_t>(k);
  }
  void require_same(const SpectralField &other) const;

  Truncation trunc_;
  std::vector<Complex> coeffs_;
};

struct SplitField
{
  SpectralField plus;
  SpectralField minus;
  SpectralField kernel;
};

// Partition by ModeClass; parts sum to u and are mutually L2-orthogonal.
SplitField split(const SpectralField &u, double b);

// Restriction to range modes (plus and minus) and to kernel modes.
SpectralField range_part(const SpectralField &u);
SpectralField kernel_part(const SpectralField &u);

// ||u||_H^2 = pi^2 sum_{j != |k|} |j^2-k^2+b| |u_jk|^2 + pi^2 sum_{j = |k|} |u_jk|^2.
double h_norm_squared(const SpectralField &u, double b);
double h_norm(const SpectralField &u, double b);

// <u, v> = pi^2 sum u_jk conj(v_jk), real part (exactly real for real fields).
double l2_inner(const SpectralField &u, const SpectralField &v);
double l2_norm(const SpectralField &u);

// Diagonal action of L + b and its inverse.
SpectralField apply_L_plus_b(const SpectralField &u, double b);
SpectralField invert_L_plus_b(const SpectralField &h, double b);
// Diagonal action of L alone.
SpectralField apply_L(const SpectralField &u);

// Real packing used by the Krylov solvers: per j, re(u_j0) then (re, im) for k = 1..K.
std::size_t packed_size(const Truncation &trunc);
void pack(const SpectralField &u, std::span<double> out);
SpectralField unpack(const Truncation &trunc, std::span<const double> in);

}  // namespace kgp

#endif  // KGP_SPECTRAL_FIELD_HPP
