// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_TRANSFORM_HPP
#define KGP_TRANSFORM_HPP

#include <memory>
#include <span>
#include <vector>
#include "kgp/spectral_field.hpp"

namespace kgp
{

//
// Real values on the tensor grid t_i = 2 pi i / nt (i < nt) and x_m = (m+1) pi / (nx+1)
// (m < nx). Storage is t-major: value(i, m) = values[i * nx + m].
//
struct GridField
{
  int nt = 0;
  int nx = 0;
  std::vector<double> values;

  GridField() = default;
  GridField(int nt_, int nx_) : nt(nt_), nx(nx_), values(static_cast<std::size_t>(nt_) * nx_) {}

  double t(int i) const;
  double x(int m) const;
  double &operator()(int i, int m) { return values[static_cast<std::size_t>(i) * nx + m]; }
  double operator()(int i, int m) const { return values[static_cast<std::size_t>(i) * nx + m]; }

  // Tensor trapezoid weight (2 pi / nt) * (pi / (nx+1)); exact for the integrals of
  // products of truncated fields under the alias-free sizing rule.
  double cell_weight() const;
  double integral() const;
  double sup_abs() const;
};

// Smallest alias-free sizes for a round trip at truncation trunc.
int min_time_points(const Truncation &trunc);
int min_space_points(const Truncation &trunc);

//
// FFTW-backed Fourier (t) x sine (x) transform pair for one grid size. Instances own
// their work buffers, so one instance must not be used from two threads at once.
//
class GridTransform
{
public:
  GridTransform(int nt, int nx);
  ~GridTransform();
  GridTransform(const GridTransform &) = delete;
  GridTransform &operator=(const GridTransform &) = delete;
  GridTransform(GridTransform &&) noexcept;
  GridTransform &operator=(GridTransform &&) noexcept;

  int nt() const;
  int nx() const;

  // Throws AliasedGrid if the grid cannot represent trunc exactly.
  void require_alias_free(const Truncation &trunc) const;

  void to_grid(const SpectralField &u, GridField &out);
  GridField to_grid(const SpectralField &u);
  // Discrete Galerkin projection onto trunc.
  SpectralField from_grid(const GridField &g, const Truncation &trunc);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridField to_grid(const SpectralField &u, int nt, int nx);
SpectralField from_grid(const GridField &g, const Truncation &trunc);

}  // namespace kgp

#endif  // KGP_TRANSFORM_HPP
