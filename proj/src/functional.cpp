// SPDX-License-Identifier: Apache-2.0

#include "kgp/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp
{

FieldPair::FieldPair(SpectralField u_, SpectralField v_, double b_, double eps_)
  : u(std::move(u_)), v(std::move(v_)), b(b_), eps(eps_)
{
  if (!(u.truncation() == v.truncation()))
  {
    throw Error(ErrorKind::TruncationMismatch, "u and v must share one truncation");
  }
  if (!std::isfinite(eps))
  {
    throw Error(ErrorKind::InvalidArgument, "eps must be finite");
  }
  require_admissible_b(b);
}

FieldPair FieldPair::zero(const Truncation &trunc, double b, double eps)
{
  return FieldPair(SpectralField(trunc), SpectralField(trunc), b, eps);
}

FieldPair FieldPair::resized(const Truncation &trunc) const
{
  return FieldPair(u.resized(trunc), v.resized(trunc), b, eps);
}

Forcing Forcing::resized(const Truncation &trunc) const
{
  Forcing out;
  if (h1)
  {
    out.h1 = h1->resized(trunc);
  }
  if (h2)
  {
    out.h2 = h2->resized(trunc);
  }
  return out;
}

double EnergyBreakdown::sum_of_parts() const
{
  return quad_u_plus + quad_u_minus + quad_y + quad_v_plus + quad_v_minus + quad_z + coupling +
         potential_f + potential_g + forcing;
}

double Decomposition::parts_squared() const
{
  return u_plus_H * u_plus_H + u_minus_H * u_minus_H + y_L2 * y_L2 + v_plus_H * v_plus_H +
         v_minus_H * v_minus_H + z_L2 * z_L2;
}

GridSize dealiased_grid(const Truncation &trunc, double p)
{
  int factor;
  if (p == std::round(p))
  {
    factor = static_cast<int>(p) + 1;
  }
  else
  {
    factor = std::max(4, static_cast<int>(std::ceil(p)) + 1);
  }
  return {factor * (2 * trunc.K + 1) + 1, factor * trunc.J + 1};
}

namespace
{

GridSize pick_grid(const Truncation &trunc, const Nonlinearity &f, const Nonlinearity &g,
                   std::optional<GridSize> grid)
{
  // Non-integer exponents use the factor-4 rule, so take the larger of the two rules.
  const GridSize a = dealiased_grid(trunc, f.p());
  const GridSize b = dealiased_grid(trunc, g.p());
  const GridSize need{std::max(a.nt, b.nt), std::max(a.nx, b.nx)};
  if (!grid)
  {
    return need;
  }
  if (grid->nt < need.nt || grid->nx < need.nx)
  {
    throw Error(ErrorKind::AliasedGrid,
                fmt::format("grid {}x{} below the dealiased size {}x{} for J={} K={}", grid->nt,
                            grid->nx, need.nt, need.nx, trunc.J, trunc.K));
  }
  return *grid;
}

void require_forcing_truncation(const Forcing &forcing, const Truncation &trunc)
{
  for (const auto *h : {&forcing.h1, &forcing.h2})
  {
    if (h->has_value() && !((*h)->truncation() == trunc))
    {
      throw Error(ErrorKind::TruncationMismatch, "forcing truncation differs from the state");
    }
  }
}

double dual_weight(ModeIndex m, double b)
{
  if (m.j == std::abs(m.k))
  {
    return 1.0;
  }
  return 1.0 / std::abs(static_cast<double>(eigenvalue(m)) + b);
}

double weighted_energy(const SpectralField &r, double b)
{
  const auto &trunc = r.truncation();
  double sum = 0.0;
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      sum += (k == 0 ? 1.0 : 2.0) * dual_weight({j, k}, b) * std::norm(r.coeff(j, k));
    }
  }
  return std::numbers::pi * std::numbers::pi * sum;
}

}  // namespace

Functional::Functional(const Truncation &trunc, Nonlinearity f, Nonlinearity g, Forcing forcing,
                       std::optional<GridSize> grid)
  : trunc_(trunc), f_(std::move(f)), g_(std::move(g)), forcing_(std::move(forcing)),
    grid_(pick_grid(trunc, f_, g_, grid)), transform_(grid_.nt, grid_.nx)
{
  require_forcing_truncation(forcing_, trunc_);
}

void Functional::require_truncation(const FieldPair &state) const
{
  if (!(state.truncation() == trunc_))
  {
    throw Error(ErrorKind::TruncationMismatch,
                fmt::format("state truncation ({},{}) differs from functional ({},{})",
                            state.truncation().J, state.truncation().K, trunc_.J, trunc_.K));
  }
}

SpectralField Functional::project(const Nonlinearity &nl, const SpectralField &w) const
{
  if (nl.is_zero())
  {
    return SpectralField(trunc_);
  }
  GridField wg = transform_.to_grid(w);
  for (int i = 0; i < wg.nt; ++i)
  {
    const double t = wg.t(i);
    for (int m = 0; m < wg.nx; ++m)
    {
      wg(i, m) = nl.f(t, wg.x(m), wg(i, m));
    }
  }
  return transform_.from_grid(wg, trunc_);
}

SpectralField Functional::project_f(const SpectralField &u) const
{
  return project(f_, u);
}

SpectralField Functional::project_g(const SpectralField &v) const
{
  return project(g_, v);
}

double Functional::integrate_primitive(const Nonlinearity &nl, const GridField &wg) const
{
  if (nl.is_zero())
  {
    return 0.0;
  }
  double sum = 0.0;
  for (int i = 0; i < wg.nt; ++i)
  {
    const double t = wg.t(i);
    for (int m = 0; m < wg.nx; ++m)
    {
      sum += nl.F(t, wg.x(m), wg(i, m));
    }
  }
  return sum * wg.cell_weight();
}

EnergyBreakdown Functional::energy(const FieldPair &state) const
{
  require_truncation(state);
  const double b = state.b;
  const auto su = split(state.u, b);
  const auto sv = split(state.v, b);

  EnergyBreakdown e;
  e.quad_u_plus = -0.5 * h_norm_squared(su.plus, b);
  e.quad_u_minus = 0.5 * h_norm_squared(su.minus, b);
  e.quad_y = -0.5 * b * l2_inner(su.kernel, su.kernel);
  e.quad_v_plus = -0.5 * h_norm_squared(sv.plus, b);
  e.quad_v_minus = 0.5 * h_norm_squared(sv.minus, b);
  e.quad_z = -0.5 * b * l2_inner(sv.kernel, sv.kernel);
  e.coupling = -state.eps * l2_inner(state.u, state.v);

  const GridField ug = transform_.to_grid(state.u);
  const GridField vg = transform_.to_grid(state.v);
  e.potential_f = -integrate_primitive(f_, ug);
  e.potential_g = -integrate_primitive(g_, vg);
  if (forcing_.h1)
  {
    e.forcing -= l2_inner(*forcing_.h1, state.u);
  }
  if (forcing_.h2)
  {
    e.forcing -= l2_inner(*forcing_.h2, state.v);
  }
  e.total = e.sum_of_parts();

  // Unsplit form: -1/2 <Lu,u> - b/2 int u^2 (grid quadrature) and the same for v.
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t n = 0; n < ug.values.size(); ++n)
  {
    uu += ug.values[n] * ug.values[n];
    vv += vg.values[n] * vg.values[n];
    uv += ug.values[n] * vg.values[n];
  }
  const double w = ug.cell_weight();
  e.total_direct = -0.5 * l2_inner(apply_L(state.u), state.u) - 0.5 * b * uu * w -
                   0.5 * l2_inner(apply_L(state.v), state.v) - 0.5 * b * vv * w -
                   state.eps * uv * w + e.potential_f + e.potential_g + e.forcing;
  return e;
}

Residual Functional::gradient(const FieldPair &state) const
{
  require_truncation(state);
  const double b = state.b;
  SpectralField ru = apply_L_plus_b(state.u, b) + state.eps * state.v + project_f(state.u);
  SpectralField rv = apply_L_plus_b(state.v, b) + state.eps * state.u + project_g(state.v);
  if (forcing_.h1)
  {
    ru += *forcing_.h1;
  }
  if (forcing_.h2)
  {
    rv += *forcing_.h2;
  }
  ru *= -1.0;
  rv *= -1.0;
  return {std::move(ru), std::move(rv)};
}

ResidualNorms norms_of(const Residual &r, double b)
{
  ResidualNorms n;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  n.l2 = std::sqrt(pi2 * (r.ru.coefficient_energy() + r.rv.coefficient_energy()));
  n.dual_H = std::sqrt(weighted_energy(r.ru, b) + weighted_energy(r.rv, b));
  return n;
}

ResidualNorms Functional::residual_norms(const FieldPair &state) const
{
  return norms_of(gradient(state), state.b);
}

Functional::Linearization Functional::linearize(const FieldPair &state) const
{
  require_truncation(state);
  Linearization lin;
  lin.b = state.b;
  lin.eps = state.eps;
  auto fill = [&](const Nonlinearity &nl, const SpectralField &w, GridField &out) {
    if (nl.is_zero())
    {
      return;
    }
    if (!nl.has_derivative())
    {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("nonlinearity '{}' has no derivative for an exact Jacobian", nl.name()));
    }
    out = transform_.to_grid(w);
    for (int i = 0; i < out.nt; ++i)
    {
      const double t = out.t(i);
      for (int m = 0; m < out.nx; ++m)
      {
        out(i, m) = nl.df(t, out.x(m), out(i, m));
      }
    }
  };
  fill(f_, state.u, lin.dfu);
  fill(g_, state.v, lin.dgv);
  return lin;
}

Residual Functional::apply_jacobian(const Linearization &lin, const SpectralField &du,
                                    const SpectralField &dv) const
{
  auto multiply = [&](const GridField &weights, const SpectralField &d) {
    if (weights.values.empty())
    {
      return SpectralField(trunc_);
    }
    GridField dg = transform_.to_grid(d);
    for (std::size_t n = 0; n < dg.values.size(); ++n)
    {
      dg.values[n] *= weights.values[n];
    }
    return transform_.from_grid(dg, trunc_);
  };
  SpectralField ju = apply_L_plus_b(du, lin.b) + lin.eps * dv + multiply(lin.dfu, du);
  SpectralField jv = apply_L_plus_b(dv, lin.b) + lin.eps * du + multiply(lin.dgv, dv);
  ju *= -1.0;
  jv *= -1.0;
  return {std::move(ju), std::move(jv)};
}

EnergyBreakdown energy(const FieldPair &state, const Nonlinearity &f, const Nonlinearity &g,
                       const Forcing &forcing)
{
  return Functional(state.truncation(), f, g, forcing).energy(state);
}

Residual gradient(const FieldPair &state, const Nonlinearity &f, const Nonlinearity &g,
                  const Forcing &forcing)
{
  return Functional(state.truncation(), f, g, forcing).gradient(state);
}

ResidualNorms residual_norms(const FieldPair &state, const Nonlinearity &f,
                             const Nonlinearity &g, const Forcing &forcing)
{
  return Functional(state.truncation(), f, g, forcing).residual_norms(state);
}

Decomposition decomposition_report(const FieldPair &state)
{
  const double b = state.b;
  const auto su = split(state.u, b);
  const auto sv = split(state.v, b);
  Decomposition d;
  d.u_plus_H = h_norm(su.plus, b);
  d.u_minus_H = h_norm(su.minus, b);
  d.v_plus_H = h_norm(sv.plus, b);
  d.v_minus_H = h_norm(sv.minus, b);
  d.y_L2 = l2_norm(su.kernel);
  d.z_L2 = l2_norm(sv.kernel);
  d.E_norm = std::sqrt(h_norm_squared(state.u, b) + h_norm_squared(state.v, b));
  return d;
}

Forcing manufactured_forcing(const FieldPair &target, const Nonlinearity &f,
                             const Nonlinearity &g)
{
  Functional fn(target.truncation(), f, g);
  Residual r = fn.gradient(target);
  // With no forcing, gradient = -[(L+b)u* + eps v* + P f(u*)], which is exactly h1.
  Forcing out;
  out.h1 = std::move(r.ru);
  out.h2 = std::move(r.rv);
  return out;
}

ResidualNorms tail_residual(const FieldPair &state, const Truncation &finer,
                            const Nonlinearity &f, const Nonlinearity &g, const Forcing &forcing)
{
  if (!finer.covers(state.truncation()))
  {
    throw Error(ErrorKind::InvalidArgument, "tail truncation must cover the state truncation");
  }
  Functional fn(finer, f, g, forcing.resized(finer));
  Residual r = fn.gradient(state.resized(finer));
  const auto &own = state.truncation();
  for (SpectralField *field : {&r.ru, &r.rv})
  {
    for (int j = 1; j <= own.J; ++j)
    {
      for (int k = 0; k <= own.K; ++k)
      {
        field->set(j, k, 0.0);
      }
    }
  }
  return norms_of(r, state.b);
}

}  // namespace kgp
