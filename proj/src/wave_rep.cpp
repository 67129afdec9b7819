// SPDX-License-Identifier: Apache-2.0

#include "kgp/wave_rep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include "kgp/error.hpp"
#include "kgp/parallel.hpp"

namespace kgp
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Rule = boost::math::quadrature::gauss<double, 8>;

// Composite Gauss-Legendre over [a, b] with roughly nodes_per_unit nodes per unit length.
template <class F>
double composite_gauss(F &&fn, double a, double b, int nodes_per_unit)
{
  const double len = b - a;
  if (len <= 0.0)
  {
    return 0.0;
  }
  const int panels = std::max(1, static_cast<int>(std::ceil(len * nodes_per_unit / 8.0)));
  const double width = len / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i)
  {
    const double lo = a + i * width;
    sum += Rule::integrate([&](double s) { return fn(s); }, lo, lo + width);
  }
  return sum;
}

// int_a^b h(tau, xi) dtau, exact on the Fourier series in tau.
double tau_integral(const SpectralField &h, double xi, double a, double b)
{
  const Truncation &tr = h.truncation();
  std::vector<Complex> kernel(static_cast<std::size_t>(tr.K) + 1);
  kernel[0] = b - a;
  for (int k = 1; k <= tr.K; ++k)
  {
    kernel[k] = (std::polar(1.0, k * b) - std::polar(1.0, k * a)) / Complex(0.0, k);
  }
  double sum = 0.0;
  for (int j = 1; j <= tr.J; ++j)
  {
    double row = h.coeff(j, 0).real() * kernel[0].real();
    for (int k = 1; k <= tr.K; ++k)
    {
      row += 2.0 * (h.coeff(j, k) * kernel[k]).real();
    }
    sum += row * std::sin(j * xi);
  }
  return sum;
}

// sup over t of |d(t)| for a real trigonometric polynomial given by coefficients c_k,
// d(t) = 2 Re sum_{k>=1} c_k e^{ikt}. Grid search followed by Brent polishing.
double trig_sup(const std::vector<Complex> &c)
{
  const int K = static_cast<int>(c.size()) - 1;
  if (K < 1)
  {
    return 0.0;
  }
  auto value = [&](double t) {
    double s = 0.0;
    for (int k = 1; k <= K; ++k)
    {
      s += 2.0 * (c[k] * std::polar(1.0, k * t)).real();
    }
    return std::abs(s);
  };
  const int n = std::max(64, 32 * K);
  const double dt = kTwoPi / n;
  std::vector<double> samples(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    samples[i] = value(i * dt);
  }
  double best = *std::max_element(samples.begin(), samples.end());
  for (int i = 0; i < n; ++i)
  {
    const double prev = samples[(i + n - 1) % n];
    const double next = samples[(i + 1) % n];
    if (samples[i] >= prev && samples[i] >= next && samples[i] > 0.5 * best)
    {
      const double t0 = i * dt;
      const auto r = boost::math::tools::brent_find_minima(
          [&](double t) { return -value(t); }, t0 - dt, t0 + dt, 52);
      best = std::max(best, -r.second);
    }
  }
  return best;
}

double point_value(const SpectralField &h, double t, double x)
{
  return h.evaluate(t, x);
}

}  // namespace

KernelProfile KernelProfile::from_coefficients(std::vector<Complex> coeffs)
{
  if (coeffs.empty())
  {
    coeffs.resize(1);
  }
  if (std::abs(coeffs[0]) != 0.0)
  {
    throw Error(ErrorKind::InvalidArgument, "kernel profile must have zero mean");
  }
  KernelProfile p;
  p.coeffs_ = std::move(coeffs);
  return p;
}

KernelProfile KernelProfile::sin_term(int k, double a)
{
  KernelProfile p(k);
  p.set(k, Complex(0.0, -a / 2.0));
  return p;
}

KernelProfile KernelProfile::cos_term(int k, double a)
{
  KernelProfile p(k);
  p.set(k, Complex(a / 2.0, 0.0));
  return p;
}

Complex KernelProfile::coeff(int k) const
{
  const int ak = std::abs(k);
  if (ak > K())
  {
    return {};
  }
  return k >= 0 ? coeffs_[ak] : std::conj(coeffs_[ak]);
}

void KernelProfile::set(int k, Complex value)
{
  if (k < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "profile coefficients are set for k >= 1");
  }
  if (k > K())
  {
    coeffs_.resize(static_cast<std::size_t>(k) + 1);
  }
  coeffs_[k] = value;
}

double KernelProfile::operator()(double s) const
{
  double sum = 0.0;
  for (int k = 1; k <= K(); ++k)
  {
    sum += 2.0 * (coeffs_[k] * std::polar(1.0, k * s)).real();
  }
  return sum;
}

KernelProfile &KernelProfile::operator+=(const KernelProfile &other)
{
  if (other.K() > K())
  {
    coeffs_.resize(other.coeffs_.size());
  }
  for (int k = 1; k <= other.K(); ++k)
  {
    coeffs_[k] += other.coeffs_[k];
  }
  return *this;
}

SpectralField profile_to_field(const KernelProfile &p)
{
  const int K = std::max(1, p.K());
  return profile_to_field(p, Truncation{K, K});
}

SpectralField profile_to_field(const KernelProfile &p, const Truncation &trunc)
{
  SpectralField y(trunc);
  const int top = std::min({p.K(), trunc.J, trunc.K});
  for (int k = 1; k <= top; ++k)
  {
    y.set(k, k, Complex(0.0, 2.0) * p.coeff(k));
  }
  return y;
}

KernelProfile kernel_profile(const SpectralField &y)
{
  const Truncation &tr = y.truncation();
  for (int j = 1; j <= tr.J; ++j)
  {
    for (int k = 0; k <= tr.K; ++k)
    {
      if (j != k && std::abs(y.coeff(j, k)) > 1e-12)
      {
        throw Error(ErrorKind::NotKernel,
                    fmt::format("mode ({},{}) is off the kernel (|coeff| = {:.3e})", j, k,
                                std::abs(y.coeff(j, k))));
      }
    }
  }
  const int top = std::min(tr.J, tr.K);
  KernelProfile p(top);
  for (int k = 1; k <= top; ++k)
  {
    p.set(k, y.coeff(k, k) / Complex(0.0, 2.0));
  }
  return p;
}

RangeCondition range_condition(const SpectralField &h, int nt_samples)
{
  if (nt_samples < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "nt_samples must be positive");
  }
  const Truncation &tr = h.truncation();
  // Integrand is a trigonometric polynomial of degree J + K in x.
  const int per_unit = std::max(16, 4 * (tr.J + tr.K));
  RangeCondition rc;
  rc.t.resize(static_cast<std::size_t>(nt_samples));
  rc.V.resize(rc.t.size());
  parallel_for(rc.t.size(), [&](std::size_t i) {
    const double t = kTwoPi * static_cast<double>(i) / nt_samples;
    rc.t[i] = t;
    rc.V[i] = composite_gauss(
        [&](double x) { return point_value(h, t + x, x) - point_value(h, t - x, x); }, 0.0, kPi,
        per_unit);
  });
  for (double v : rc.V)
  {
    rc.sup_violation = std::max(rc.sup_violation, std::abs(v));
  }
  return rc;
}

RangeCondition range_condition(const GridField &h, const Truncation &trunc, int nt_samples)
{
  return range_condition(from_grid(h, trunc), nt_samples);
}

double w1_formula(const SpectralField &h, double t, double x, int quad_nodes)
{
  if (quad_nodes < 1)
  {
    throw Error(ErrorKind::InvalidArgument, "quad_nodes must be positive");
  }
  const double near = composite_gauss(
      [&](double xi) { return tau_integral(h, xi, t + x - xi, t - x + xi); }, x, kPi, quad_nodes);
  const double full = composite_gauss(
      [&](double xi) { return tau_integral(h, xi, t - xi, t + xi); }, 0.0, kPi, quad_nodes);
  return -0.5 * near + (kPi - x) / kTwoPi * full;
}

RangeSolution represent_w1(const SpectralField &h, int quad_nodes)
{
  const Truncation &tr = h.truncation();
  const RangeCondition rc = range_condition(h, std::max(64, 4 * tr.K + 4));
  if (rc.sup_violation >= kRangeTolerance)
  {
    throw Error(ErrorKind::NotInRange,
                fmt::format("range condition violated: sup |V| = {:.6g}", rc.sup_violation));
  }
  // The formula can carry kernel modes (|k|, k) with |k| up to K, so the evaluation grid
  // resolves j up to max(J, K).
  const Truncation wide{std::max(tr.J, tr.K), tr.K};
  GridTransform transform(min_time_points(wide), min_space_points(wide));
  GridField grid(transform.nt(), transform.nx());
  parallel_for(grid.values.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx / grid.nx);
    const int m = static_cast<int>(idx % grid.nx);
    grid.values[idx] = w1_formula(h, grid.t(i), grid.x(m), quad_nodes);
  });
  const SpectralField coeffs = transform.from_grid(grid, wide);

  RangeSolution sol;
  sol.h = h;
  sol.kernel_leak = l2_norm(kernel_part(coeffs));
  sol.w1 = range_part(coeffs).resized(tr);
  sol.w1_grid = std::move(grid);
  sol.weak_residual = l2_norm(apply_L(sol.w1) - h);
  return sol;
}

double orthogonality_check(const KernelProfile &p, const KernelProfile &q)
{
  const int K = std::max({1, p.K(), q.K()});
  // Trapezoid sums are exact here: the t sum needs more than 2K points and the x sum
  // over [0, pi) more than K.
  const int nt = 4 * K + 4;
  const int nx = 2 * K + 2;
  const double dt = kTwoPi / nt;
  const double dx = kPi / nx;
  double sum = 0.0;
  for (int i = 0; i < nt; ++i)
  {
    for (int m = 0; m < nx; ++m)
    {
      const double t = i * dt;
      const double x = m * dx;
      sum += p(t + x) * q(t - x);
    }
  }
  return sum * dt * dx;
}

LinfReport linf_report(const FieldPair &state, const Nonlinearity &f, const Nonlinearity &g)
{
  const Truncation &tr = state.truncation();
  LinfReport rep;
  rep.nt = 4 * min_time_points(tr);
  rep.nx = 4 * (tr.J + 1) - 1;
  GridTransform transform(rep.nt, rep.nx);
  const GridField u1 = transform.to_grid(range_part(state.u));
  const GridField v1 = transform.to_grid(range_part(state.v));
  const GridField y = transform.to_grid(kernel_part(state.u));
  const GridField z = transform.to_grid(kernel_part(state.v));
  const GridField u = transform.to_grid(state.u);
  const GridField v = transform.to_grid(state.v);
  rep.norm_u1_inf = u1.sup_abs();
  rep.norm_v1_inf = v1.sup_abs();
  rep.norm_y_inf = y.sup_abs();
  rep.norm_z_inf = z.sup_abs();

  GridField h1(rep.nt, rep.nx), h2(rep.nt, rep.nx);
  for (int i = 0; i < rep.nt; ++i)
  {
    for (int m = 0; m < rep.nx; ++m)
    {
      const double t = u.t(i), x = u.x(m);
      h1(i, m) = state.b * u(i, m) + state.eps * v(i, m) + f.f(t, x, u(i, m));
      h2(i, m) = state.b * v(i, m) + state.eps * u(i, m) + g.f(t, x, v(i, m));
    }
  }
  rep.h1_inf = h1.sup_abs();
  rep.h2_inf = h2.sup_abs();
  for (std::size_t n = 0; n < h1.values.size(); ++n)
  {
    rep.h1_l1 += std::abs(h1.values[n]);
    rep.h2_l1 += std::abs(h2.values[n]);
  }
  rep.h1_l1 *= h1.cell_weight();
  rep.h2_l1 *= h2.cell_weight();
  rep.ratio_u = rep.h1_l1 > 0.0 ? rep.norm_u1_inf / rep.h1_l1 : 0.0;
  rep.ratio_v = rep.h2_l1 > 0.0 ? rep.norm_v1_inf / rep.h2_l1 : 0.0;

  auto lipschitz = [](const GridField &w) {
    const double dt = kTwoPi / w.nt;
    const double dx = kPi / (w.nx + 1);
    double best = 0.0;
    for (int i = 0; i < w.nt; ++i)
    {
      for (int m = 0; m < w.nx; ++m)
      {
        best = std::max(best, std::abs(w((i + 1) % w.nt, m) - w(i, m)) / dt);
        const double right = m + 1 < w.nx ? w(i, m + 1) : 0.0;
        best = std::max(best, std::abs(right - w(i, m)) / dx);
      }
      best = std::max(best, std::abs(w(i, 0)) / dx);
    }
    return best;
  };
  rep.lip_u1 = lipschitz(u1);
  rep.lip_v1 = lipschitz(v1);
  return rep;
}

ContinuityReport continuity_report(const KernelProfile &p, const std::vector<double> &shifts)
{
  ContinuityReport rep;
  for (double h : shifts)
  {
    if (!(h > 0.0 && h < 0.25))
    {
      throw Error(ErrorKind::InvalidArgument, fmt::format("shift {} is outside (0, 1/4)", h));
    }
  }
  const int K = p.K();
  for (double h : shifts)
  {
    std::vector<Complex> diff(static_cast<std::size_t>(K) + 1);
    for (int k = 1; k <= K; ++k)
    {
      diff[k] = p.coeff(k) * (std::polar(1.0, k * h) - 1.0);
    }
    rep.rows.push_back({h, trig_sup(diff)});
  }
  for (int k = K / 2 + 1; k <= K; ++k)
  {
    rep.tail += 2.0 * std::abs(p.coeff(k));
  }
  std::vector<ModulusRow> sorted = rep.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const ModulusRow &a, const ModulusRow &b) { return a.h > b.h; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
  {
    if (sorted[i].sup_diff > sorted[i - 1].sup_diff * (1.0 + 1e-12) + 1e-15)
    {
      rep.monotone = false;
    }
  }
  rep.pass = rep.monotone && !sorted.empty() && 10.0 * rep.tail <= sorted.back().sup_diff;
  return rep;
}

}  // namespace kgp
