// SPDX-License-Identifier: Apache-2.0

#include "kgp/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp
{

namespace
{

constexpr double kH2Tolerance = 1e-3;
// Relative slack for inequalities that hold with equality in exact arithmetic.
constexpr double kRoundoff = 1e-9;

}  // namespace

Amplitude Amplitude::constant(double a)
{
  return {[a](double, double) { return a; }, a, a, fmt::format("const:{}", a)};
}

Amplitude Amplitude::cos_t(double base, double swing)
{
  return {[base, swing](double t, double) { return base + swing * std::cos(t); },
          base - std::abs(swing), base + std::abs(swing),
          fmt::format("cos_t:{},{}", base, swing)};
}

Amplitude Amplitude::custom(std::function<double(double, double)> fn, std::string descriptor)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  constexpr int n = 64;
  for (int i = 0; i < n; ++i)
  {
    for (int m = 0; m <= n; ++m)
    {
      const double a = fn(2.0 * std::numbers::pi * i / n, std::numbers::pi * m / n);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  return {std::move(fn), lo, hi, std::move(descriptor)};
}

Nonlinearity::Nonlinearity(std::string name, Fn f, Fn F, Fn df, double p, double c0)
  : name_(std::move(name)), f_(std::move(f)), F_(std::move(F)), df_(std::move(df)), p_(p),
    c0_(c0)
{
  if (!(p_ > 1.0) || !std::isfinite(p_))
  {
    throw Error(ErrorKind::InvalidArgument, fmt::format("growth exponent must exceed 1, got {}", p_));
  }
  if (!(c0_ > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, fmt::format("growth constant must be positive, got {}", c0_));
  }
  if (!f_ || !F_)
  {
    throw Error(ErrorKind::InvalidArgument, "nonlinearity needs f and F");
  }
}

Nonlinearity Nonlinearity::power_law(double p, const Amplitude &amplitude)
{
  if (!(amplitude.lower > 0.0))
  {
    throw Error(ErrorKind::NonPositiveAmplitude,
                fmt::format("amplitude '{}' reaches {} <= 0", amplitude.descriptor, amplitude.lower));
  }
  auto a = amplitude.fn;
  Fn f = [a, p](double t, double x, double xi) {
    return a(t, x) * std::pow(std::abs(xi), p - 1.0) * xi;
  };
  Fn F = [a, p](double t, double x, double xi) {
    return a(t, x) * std::pow(std::abs(xi), p + 1.0) / (p + 1.0);
  };
  Fn df = [a, p](double t, double x, double xi) {
    return a(t, x) * p * std::pow(std::abs(xi), p - 1.0);
  };
  // Integer exponents get exact products so the dealiased projection stays exact.
  if (p == std::round(p))
  {
    const int n = static_cast<int>(p);
    auto ipow = [](double v, int e) {
      double r = 1.0;
      for (int i = 0; i < e; ++i)
      {
        r *= v;
      }
      return r;
    };
    f = [a, n, ipow](double t, double x, double xi) {
      const double m = ipow(xi, n);
      return a(t, x) * (n % 2 == 1 ? m : std::abs(xi) * ipow(xi, n - 1));
    };
    F = [a, n, ipow](double t, double x, double xi) {
      return a(t, x) * ipow(std::abs(xi), n + 1) / (n + 1);
    };
    df = [a, n, ipow](double t, double x, double xi) {
      return a(t, x) * n * ipow(std::abs(xi), n - 1);
    };
  }
  return Nonlinearity(fmt::format("power_law(p={}, a={})", p, amplitude.descriptor), f, F, df,
                      p, amplitude.upper);
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs, double p, double c0)
{
  auto horner = [](const std::vector<double> &c, double xi) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
    {
      r = r * xi + *it;
    }
    return r;
  };
  std::vector<double> prim(coeffs.size() + 1, 0.0);
  std::vector<double> deriv(coeffs.size() > 1 ? coeffs.size() - 1 : 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
  {
    prim[i + 1] = coeffs[i] / static_cast<double>(i + 1);
    if (i > 0)
    {
      deriv[i - 1] = coeffs[i] * static_cast<double>(i);
    }
  }
  std::string name = "polynomial(";
  for (std::size_t i = 0; i < coeffs.size(); ++i)
  {
    name += fmt::format("{}{}", i ? "," : "", coeffs[i]);
  }
  name += fmt::format("; p={})", p);
  return Nonlinearity(
      name, [coeffs, horner](double, double, double xi) { return horner(coeffs, xi); },
      [prim, horner](double, double, double xi) { return horner(prim, xi); },
      [deriv, horner](double, double, double xi) { return horner(deriv, xi); }, p, c0);
}

Nonlinearity Nonlinearity::zero()
{
  Nonlinearity nl("zero", [](double, double, double) { return 0.0; },
                  [](double, double, double) { return 0.0; },
                  [](double, double, double) { return 0.0; }, 2.0, 1.0);
  nl.zero_ = true;
  return nl;
}

Nonlinearity Nonlinearity::from_function(std::string name, Fn f, double p, double c0, Fn df)
{
  Fn F = [f](double t, double x, double xi) {
    if (xi == 0.0)
    {
      return 0.0;
    }
    auto integrand = [&](double s) { return f(t, x, s); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, xi, 15,
                                                                         1e-10);
  };
  return Nonlinearity(std::move(name), std::move(f), std::move(F), std::move(df), p, c0);
}

bool Nonlinearity::integer_exponent() const
{
  return p_ == std::round(p_);
}

SampleSet SampleSet::standard(std::uint64_t seed, int extra_xi)
{
  SampleSet s;
  constexpr int n = 17;
  for (int i = 0; i < n; ++i)
  {
    s.t.push_back(2.0 * std::numbers::pi * i / n);
    s.x.push_back(std::numbers::pi * i / (n - 1));
  }
  constexpr int levels = 41;
  for (int i = 0; i < levels; ++i)
  {
    const double mag = std::pow(10.0, -6.0 + 7.0 * i / (levels - 1));
    s.xi.push_back(mag);
    s.xi.push_back(-mag);
  }
  if (extra_xi > 0)
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> expo(-6.0, 1.0);
    std::bernoulli_distribution sign(0.5);
    for (int i = 0; i < extra_xi; ++i)
    {
      const double mag = std::pow(10.0, expo(rng));
      s.xi.push_back(sign(rng) ? mag : -mag);
    }
  }
  std::sort(s.xi.begin(), s.xi.end());
  return s;
}

std::string_view to_string(CheckStatus s)
{
  switch (s)
  {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Unchecked:
      return "unchecked";
  }
  return "unknown";
}

bool HypothesisReport::all_pass() const
{
  return h1.status == CheckStatus::Pass && h2.status == CheckStatus::Pass &&
         h3.status == CheckStatus::Pass && h4.status == CheckStatus::Pass &&
         growth.status == CheckStatus::Pass;
}

HypothesisEntry check_h1(const Nonlinearity &nl, const SampleSet &s)
{
  HypothesisEntry e{.name = "h1"};
  double worst = -std::numeric_limits<double>::infinity();
  Witness w;
  for (double t : s.t)
  {
    for (double x : s.x)
    {
      for (double xi : s.xi)
      {
        const double bound = nl.c0() * (1.0 + std::pow(std::abs(xi), nl.p()));
        const double excess = (std::abs(nl.f(t, x, xi)) - bound) / bound;
        if (excess > worst)
        {
          worst = excess;
          w = {t, x, xi, 0.0, excess};
        }
      }
    }
  }
  e.samples = s.size();
  e.worst = worst;
  e.status = worst <= kRoundoff ? CheckStatus::Pass : CheckStatus::Fail;
  if (e.status == CheckStatus::Fail)
  {
    e.witness = w;
    e.note = fmt::format("|f| exceeds c0(1+|xi|^p) by relative {:.3g} at xi={}", worst, w.xi);
  }
  return e;
}

namespace
{

// Ratio sequence judged along xi = 10^-1 .. 10^-6: it must not increase, and must either
// fall below the tolerance or still be decaying at a log-slope of at least the tolerance
// over the last decade.
bool decays_to_zero(const std::vector<double> &r)
{
  for (std::size_t n = 0; n + 1 < r.size(); ++n)
  {
    if (r[n + 1] > r[n] * (1.0 + kRoundoff))
    {
      return false;
    }
  }
  const double last = r.back();
  if (last < kH2Tolerance)
  {
    return true;
  }
  const double slope = std::log10(r[r.size() - 2] / last);
  return slope >= kH2Tolerance;
}

}  // namespace

HypothesisEntry check_h2(const Nonlinearity &nl, const SampleSet &s)
{
  HypothesisEntry e{.name = "h2"};
  std::vector<double> rf, rF;
  Witness wf, wF;
  for (int n = 1; n <= 6; ++n)
  {
    const double mag = std::pow(10.0, -n);
    double mf = 0.0, mF = 0.0;
    for (double t : s.t)
    {
      for (double x : s.x)
      {
        for (double xi : {mag, -mag})
        {
          const double a = std::abs(nl.f(t, x, xi)) / mag;
          const double b = std::abs(nl.F(t, x, xi)) / (mag * mag);
          if (a >= mf)
          {
            mf = a;
            wf = {t, x, xi, 0.0, a};
          }
          if (b >= mF)
          {
            mF = b;
            wF = {t, x, xi, 0.0, b};
          }
          e.samples += 1;
        }
      }
    }
    rf.push_back(mf);
    rF.push_back(mF);
  }
  const bool ok_f = decays_to_zero(rf);
  const bool ok_F = decays_to_zero(rF);
  e.worst = std::max(rf.back(), rF.back());
  e.status = ok_f && ok_F ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok_f)
  {
    e.witness = wf;
    e.note = fmt::format("|f|/|xi| does not vanish: {:.3g} at xi={}", rf.back(), wf.xi);
  }
  else if (!ok_F)
  {
    e.witness = wF;
    e.note = fmt::format("|F|/xi^2 does not vanish: {:.3g} at xi={}", rF.back(), wF.xi);
  }
  return e;
}

HypothesisEntry check_h3(const Nonlinearity &nl, const SampleSet &s)
{
  HypothesisEntry e{.name = "h3"};
  double worst = -std::numeric_limits<double>::infinity();
  Witness w;
  for (double t : s.t)
  {
    for (double x : s.x)
    {
      for (double xi : s.xi)
      {
        const double lhs = (nl.p() + 1.0) * nl.F(t, x, xi);
        const double rhs = nl.f(t, x, xi) * xi;
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        const double excess = (lhs - rhs) / scale;
        if (excess > worst)
        {
          worst = excess;
          w = {t, x, xi, 0.0, lhs - rhs};
        }
      }
    }
  }
  e.samples = s.size();
  e.worst = worst;
  e.status = worst <= kRoundoff ? CheckStatus::Pass : CheckStatus::Fail;
  if (e.status == CheckStatus::Fail)
  {
    e.witness = w;
    e.note = fmt::format("(p+1)F exceeds f*xi by {:.6g} at xi={}", w.magnitude, w.xi);
  }
  return e;
}

HypothesisEntry check_h4(const Nonlinearity &nl, const SampleSet &s)
{
  HypothesisEntry e{.name = "h4"};
  std::vector<double> xs = s.xi;
  xs.push_back(0.0);
  std::sort(xs.begin(), xs.end());
  double worst = 0.0;
  Witness w;
  bool failed = false;
  for (double t : s.t)
  {
    for (double x : s.x)
    {
      double prev = nl.f(t, x, xs.front());
      for (std::size_t i = 1; i < xs.size(); ++i)
      {
        const double cur = nl.f(t, x, xs[i]);
        const double drop = prev - cur;
        const double slack = kRoundoff * std::max(std::abs(prev), std::abs(cur));
        if (drop > slack && drop > worst)
        {
          worst = drop;
          w = {t, x, xs[i - 1], xs[i], drop};
          failed = true;
        }
        prev = cur;
      }
    }
  }
  e.samples = s.t.size() * s.x.size() * xs.size();
  e.worst = worst;
  e.status = failed ? CheckStatus::Fail : CheckStatus::Pass;
  if (failed)
  {
    e.witness = w;
    e.note = fmt::format("f decreases by {:.6g} between xi={} and xi={}", worst, w.xi, w.xi2);
  }
  return e;
}

GrowthFit check_growth(const Nonlinearity &nl, const SampleSet &s)
{
  GrowthFit fit;
  const double q = nl.p() + 1.0;
  bool all_zero = true;
  double c1 = std::numeric_limits<double>::infinity();
  double max_abs_xi = 0.0;
  for (double xi : s.xi)
  {
    max_abs_xi = std::max(max_abs_xi, std::abs(xi));
  }
  const double far = std::min(1.0, max_abs_xi);
  for (double t : s.t)
  {
    for (double x : s.x)
    {
      for (double xi : s.xi)
      {
        const double F = nl.F(t, x, xi);
        if (F != 0.0)
        {
          all_zero = false;
        }
        if (std::abs(xi) >= far)
        {
          c1 = std::min(c1, F / std::pow(std::abs(xi), q));
        }
      }
    }
  }
  if (all_zero)
  {
    fit.status = CheckStatus::Pass;
    fit.degenerate = true;
    fit.note = "F vanishes on all samples: c1 undefined (superlinear lower bound cannot hold "
               "together with h2 for this f)";
    return fit;
  }
  if (!(c1 > 0.0))
  {
    fit.status = CheckStatus::Fail;
    fit.note = fmt::format("no positive c1: min F/|xi|^(p+1) over |xi|>={} is {:.6g}", far, c1);
    return fit;
  }
  fit.c1 = c1;
  fit.c3 = 0.5 * c1;
  double c2 = 0.0;
  double C_nu = 0.0;
  std::vector<double> mags;
  for (double xi : s.xi)
  {
    mags.push_back(std::abs(xi));
  }
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  // Smallest threshold such that F >= c3 |xi|^{p+1} for all sampled |xi| above it.
  double r_bar = mags.back();
  bool holds_above = true;
  for (auto it = mags.rbegin(); it != mags.rend() && holds_above; ++it)
  {
    for (double t : s.t)
    {
      for (double x : s.x)
      {
        for (double sign : {1.0, -1.0})
        {
          if (nl.F(t, x, sign * *it) < fit.c3 * std::pow(*it, q))
          {
            holds_above = false;
          }
        }
      }
    }
    if (holds_above)
    {
      r_bar = *it;
    }
  }
  for (double t : s.t)
  {
    for (double x : s.x)
    {
      for (double xi : s.xi)
      {
        const double F = nl.F(t, x, xi);
        const double a = std::pow(std::abs(xi), q);
        c2 = std::max(c2, c1 * a - F);
        C_nu = std::max(C_nu, (std::abs(F) - fit.nu * xi * xi) / a);
      }
    }
  }
  fit.c2 = c2;
  fit.r_bar = r_bar;
  fit.C_nu = C_nu;
  fit.status = std::isfinite(c2) && std::isfinite(C_nu) ? CheckStatus::Pass : CheckStatus::Fail;
  return fit;
}

HypothesisReport check_all(const Nonlinearity &nl, const SampleSet &s)
{
  HypothesisReport r;
  r.nonlinearity = nl.name();
  r.h1 = check_h1(nl, s);
  r.h2 = check_h2(nl, s);
  r.h3 = check_h3(nl, s);
  r.h4 = check_h4(nl, s);
  r.growth = check_growth(nl, s);
  return r;
}

}  // namespace kgp
