// SPDX-License-Identifier: Apache-2.0

#include "kgp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <fftw3.h>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp
{

namespace
{

// The FFTW planner is not reentrant.
std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}

}  // namespace

double GridField::t(int i) const
{
  return 2.0 * std::numbers::pi * i / nt;
}

double GridField::x(int m) const
{
  return std::numbers::pi * (m + 1) / (nx + 1);
}

double GridField::cell_weight() const
{
  return (2.0 * std::numbers::pi / nt) * (std::numbers::pi / (nx + 1));
}

double GridField::integral() const
{
  double sum = 0.0;
  for (double v : values)
  {
    sum += v;
  }
  return sum * cell_weight();
}

double GridField::sup_abs() const
{
  double m = 0.0;
  for (double v : values)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

int min_time_points(const Truncation &trunc)
{
  return 2 * trunc.K + 2;
}

int min_space_points(const Truncation &trunc)
{
  return trunc.J + 1;
}

struct GridTransform::Impl
{
  int nt;
  int nx;
  int nc;  // nt / 2 + 1 half-complex length
  fftw_complex *cbuf = nullptr;
  double *rbuf = nullptr;
  double *xin = nullptr;
  double *xout = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan dst = nullptr;
  std::vector<double> scratch;  // per-(j, t) intermediate, j-major

  Impl(int nt_, int nx_) : nt(nt_), nx(nx_), nc(nt_ / 2 + 1)
  {
    cbuf = fftw_alloc_complex(static_cast<std::size_t>(nc));
    rbuf = fftw_alloc_real(static_cast<std::size_t>(nt));
    xin = fftw_alloc_real(static_cast<std::size_t>(nx));
    xout = fftw_alloc_real(static_cast<std::size_t>(nx));
    std::lock_guard lock(planner_mutex());
    c2r = fftw_plan_dft_c2r_1d(nt, cbuf, rbuf, FFTW_ESTIMATE);
    r2c = fftw_plan_dft_r2c_1d(nt, rbuf, cbuf, FFTW_ESTIMATE);
    dst = fftw_plan_r2r_1d(nx, xin, xout, FFTW_RODFT00, FFTW_ESTIMATE);
  }

  ~Impl()
  {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(c2r);
      fftw_destroy_plan(r2c);
      fftw_destroy_plan(dst);
    }
    fftw_free(cbuf);
    fftw_free(rbuf);
    fftw_free(xin);
    fftw_free(xout);
  }
};

GridTransform::GridTransform(int nt, int nx)
{
  if (nt < 1 || nx < 1)
  {
    throw Error(ErrorKind::AliasedGrid, fmt::format("empty grid nt={} nx={}", nt, nx));
  }
  impl_ = std::make_unique<Impl>(nt, nx);
}

GridTransform::~GridTransform() = default;
GridTransform::GridTransform(GridTransform &&) noexcept = default;
GridTransform &GridTransform::operator=(GridTransform &&) noexcept = default;

int GridTransform::nt() const
{
  return impl_->nt;
}

int GridTransform::nx() const
{
  return impl_->nx;
}

void GridTransform::require_alias_free(const Truncation &trunc) const
{
  if (impl_->nt < min_time_points(trunc) || impl_->nx < min_space_points(trunc))
  {
    throw Error(ErrorKind::AliasedGrid,
                fmt::format("grid nt={} nx={} too small for J={} K={} (need nt>={} nx>={})",
                            impl_->nt, impl_->nx, trunc.J, trunc.K, min_time_points(trunc),
                            min_space_points(trunc)));
  }
}

void GridTransform::to_grid(const SpectralField &u, GridField &out)
{
  const auto &trunc = u.truncation();
  require_alias_free(trunc);
  auto &d = *impl_;
  const int J = trunc.J;
  d.scratch.assign(static_cast<std::size_t>(J) * d.nt, 0.0);
  // t-synthesis per j: A_j(t_i) = sum_k u_jk e^{ikt_i}
  for (int j = 1; j <= J; ++j)
  {
    for (int k = 0; k < d.nc; ++k)
    {
      const Complex c = k <= trunc.K ? u.coeff(j, k) : Complex(0.0);
      d.cbuf[k][0] = c.real();
      d.cbuf[k][1] = c.imag();
    }
    fftw_execute(d.c2r);
    std::copy(d.rbuf, d.rbuf + d.nt, d.scratch.begin() + static_cast<std::ptrdiff_t>(j - 1) * d.nt);
  }
  // x-synthesis per t: sum_j A_j sin(j x_m); RODFT00 carries a factor 2.
  out.nt = d.nt;
  out.nx = d.nx;
  out.values.resize(static_cast<std::size_t>(d.nt) * d.nx);
  for (int i = 0; i < d.nt; ++i)
  {
    std::fill(d.xin, d.xin + d.nx, 0.0);
    for (int j = 1; j <= J; ++j)
    {
      d.xin[j - 1] = 0.5 * d.scratch[static_cast<std::size_t>(j - 1) * d.nt + i];
    }
    fftw_execute(d.dst);
    std::copy(d.xout, d.xout + d.nx, out.values.begin() + static_cast<std::ptrdiff_t>(i) * d.nx);
  }
}

GridField GridTransform::to_grid(const SpectralField &u)
{
  GridField out;
  to_grid(u, out);
  return out;
}

SpectralField GridTransform::from_grid(const GridField &g, const Truncation &trunc)
{
  auto &d = *impl_;
  if (g.nt != d.nt || g.nx != d.nx)
  {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("grid {}x{} does not match transform {}x{}", g.nt, g.nx, d.nt, d.nx));
  }
  require_alias_free(trunc);
  const int J = trunc.J;
  d.scratch.assign(static_cast<std::size_t>(J) * d.nt, 0.0);
  const double xscale = 1.0 / (d.nx + 1);
  for (int i = 0; i < d.nt; ++i)
  {
    std::copy(g.values.begin() + static_cast<std::ptrdiff_t>(i) * d.nx,
              g.values.begin() + static_cast<std::ptrdiff_t>(i + 1) * d.nx, d.xin);
    fftw_execute(d.dst);
    for (int j = 1; j <= J; ++j)
    {
      d.scratch[static_cast<std::size_t>(j - 1) * d.nt + i] = d.xout[j - 1] * xscale;
    }
  }
  SpectralField u(trunc);
  const double tscale = 1.0 / d.nt;
  for (int j = 1; j <= J; ++j)
  {
    std::copy(d.scratch.begin() + static_cast<std::ptrdiff_t>(j - 1) * d.nt,
              d.scratch.begin() + static_cast<std::ptrdiff_t>(j) * d.nt, d.rbuf);
    fftw_execute(d.r2c);
    u.set(j, 0, d.cbuf[0][0] * tscale);
    for (int k = 1; k <= trunc.K; ++k)
    {
      u.set(j, k, Complex(d.cbuf[k][0], d.cbuf[k][1]) * tscale);
    }
  }
  return u;
}

GridField to_grid(const SpectralField &u, int nt, int nx)
{
  GridTransform tr(nt, nx);
  return tr.to_grid(u);
}

SpectralField from_grid(const GridField &g, const Truncation &trunc)
{
  GridTransform tr(g.nt, g.nx);
  return tr.from_grid(g, trunc);
}

}  // namespace kgp
