// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_FUNCTIONAL_HPP
#define KGP_FUNCTIONAL_HPP

#include <optional>
#include "kgp/nonlinearity.hpp"
#include "kgp/spectral_field.hpp"
#include "kgp/transform.hpp"

namespace kgp
{

// State (u, v) of the coupled system together with its parameters b and eps.
struct FieldPair
{
  SpectralField u;
  SpectralField v;
  double b = 1.0;
  double eps = 0.0;

  FieldPair() = default;
  FieldPair(SpectralField u_, SpectralField v_, double b_, double eps_);
  static FieldPair zero(const Truncation &trunc, double b, double eps);

  const Truncation &truncation() const { return u.truncation(); }
  FieldPair resized(const Truncation &trunc) const;
};

// Optional source terms h1, h2 entering the residuals as (L+b)u + eps v + f(u) + h1 = 0.
struct Forcing
{
  std::optional<SpectralField> h1;
  std::optional<SpectralField> h2;

  static Forcing none() { return {}; }
  bool active() const { return h1.has_value() || h2.has_value(); }
  Forcing resized(const Truncation &trunc) const;
};

struct EnergyBreakdown
{
  double total = 0.0;
  double total_direct = 0.0;  // same value assembled from the unsplit quadratic form
  double quad_u_plus = 0.0;   // -1/2 ||u+||_H^2
  double quad_u_minus = 0.0;  // +1/2 ||u-||_H^2
  double quad_y = 0.0;        // -b/2 ||y||_L2^2
  double quad_v_plus = 0.0;
  double quad_v_minus = 0.0;
  double quad_z = 0.0;
  double coupling = 0.0;      // -eps int uv
  double potential_f = 0.0;   // -int F(u)
  double potential_g = 0.0;   // -int G(v)
  double forcing = 0.0;       // -int h1 u - int h2 v

  double sum_of_parts() const;
};

struct Residual
{
  SpectralField ru;
  SpectralField rv;
};

struct ResidualNorms
{
  double l2 = 0.0;
  double dual_H = 0.0;  // mode weights |lambda+b|^{-1/2}, 1 on the kernel
};

struct Decomposition
{
  double u_plus_H = 0.0;
  double u_minus_H = 0.0;
  double v_plus_H = 0.0;
  double v_minus_H = 0.0;
  double y_L2 = 0.0;
  double z_L2 = 0.0;
  double E_norm = 0.0;  // (||u||_H^2 + ||v||_H^2)^{1/2} computed directly

  // Sum of the six squared parts, equal to E_norm^2.
  double parts_squared() const;
};

struct GridSize
{
  int nt = 0;
  int nx = 0;
};

// Oversampled grid on which nonlinear products of truncated fields are projected without
// aliasing: factor p+1 for integer p (max over both nonlinearities), 4 otherwise.
GridSize dealiased_grid(const Truncation &trunc, double p);

//
// Energy, gradient and Jacobian actions for one truncation and one pair of
// nonlinearities. Nonlinear terms are evaluated pseudo-spectrally on the dealiased grid.
// Not safe for concurrent use of one instance (it owns transform buffers).
//
class Functional
{
public:
  Functional(const Truncation &trunc, Nonlinearity f, Nonlinearity g, Forcing forcing = {},
             std::optional<GridSize> grid = std::nullopt);

  const Truncation &truncation() const { return trunc_; }
  GridSize grid() const { return grid_; }
  const Nonlinearity &f() const { return f_; }
  const Nonlinearity &g() const { return g_; }
  const Forcing &forcing() const { return forcing_; }

  EnergyBreakdown energy(const FieldPair &state) const;
  // Representers of Phi'(u,v): R_u = -[(L+b)u + eps v + P f(u) + h1], likewise R_v.
  Residual gradient(const FieldPair &state) const;
  ResidualNorms residual_norms(const FieldPair &state) const;

  // Cached df(u), dg(v) on the grid for repeated Jacobian actions.
  struct Linearization
  {
    GridField dfu;
    GridField dgv;
    double b = 1.0;
    double eps = 0.0;
  };
  Linearization linearize(const FieldPair &state) const;
  // Action of the residual's derivative: -[(L+b)du + eps dv + P(df(u) du)], likewise v.
  Residual apply_jacobian(const Linearization &lin, const SpectralField &du,
                          const SpectralField &dv) const;

  // P f(u) evaluated pseudo-spectrally.
  SpectralField project_f(const SpectralField &u) const;
  SpectralField project_g(const SpectralField &v) const;

private:
  void require_truncation(const FieldPair &state) const;
  SpectralField project(const Nonlinearity &nl, const SpectralField &w) const;
  double integrate_primitive(const Nonlinearity &nl, const GridField &wg) const;

  Truncation trunc_;
  Nonlinearity f_;
  Nonlinearity g_;
  Forcing forcing_;
  GridSize grid_;
  mutable GridTransform transform_;
};

ResidualNorms norms_of(const Residual &r, double b);

// Free-function forms building a one-shot Functional.
EnergyBreakdown energy(const FieldPair &state, const Nonlinearity &f, const Nonlinearity &g,
                       const Forcing &forcing = {});
Residual gradient(const FieldPair &state, const Nonlinearity &f, const Nonlinearity &g,
                  const Forcing &forcing = {});
ResidualNorms residual_norms(const FieldPair &state, const Nonlinearity &f,
                             const Nonlinearity &g, const Forcing &forcing = {});
Decomposition decomposition_report(const FieldPair &state);

// Forcing that makes target an exact Galerkin solution:
// h1 = -[(L+b)u* + eps v* + P f(u*)], h2 likewise.
Forcing manufactured_forcing(const FieldPair &target, const Nonlinearity &f,
                             const Nonlinearity &g);

// Residual of the state zero-padded to a finer truncation, restricted to the modes
// outside the state's own truncation.
ResidualNorms tail_residual(const FieldPair &state, const Truncation &finer,
                            const Nonlinearity &f, const Nonlinearity &g,
                            const Forcing &forcing = {});

}  // namespace kgp

#endif  // KGP_FUNCTIONAL_HPP
