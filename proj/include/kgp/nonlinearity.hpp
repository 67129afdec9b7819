// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_NONLINEARITY_HPP
#define KGP_NONLINEARITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgp
{

// Positive, 2pi-periodic-in-t coefficient a(t, x) with certified bounds.
struct Amplitude
{
  std::function<double(double, double)> fn;
  double lower = 1.0;
  double upper = 1.0;
  std::string descriptor;

  static Amplitude constant(double a);
  // a(t, x) = base + swing * cos(t)
  static Amplitude cos_t(double base, double swing);
  // Bounds estimated on a 64 x 64 sample of [0, 2pi] x [0, pi].
  static Amplitude custom(std::function<double(double, double)> fn, std::string descriptor);
};

//
// Forced term f(t, x, xi) with primitive F(t, x, xi) = int_0^xi f(t, x, s) ds, declared
// growth exponent p > 1 and growth constant c0 > 0. The derivative df/dxi is optional;
// without it the solver falls back to finite-difference Jacobian actions.
//
class Nonlinearity
{
public:
  using Fn = std::function<double(double t, double x, double xi)>;

  Nonlinearity(std::string name, Fn f, Fn F, Fn df, double p, double c0);

  // f = a(t,x) |xi|^{p-1} xi, F = a |xi|^{p+1} / (p+1). Throws NonPositiveAmplitude.
  static Nonlinearity power_law(double p, const Amplitude &amplitude);
  // f = sum_i c_i xi^i with closed-form primitive and derivative.
  static Nonlinearity polynomial(std::vector<double> coeffs, double p, double c0);
  static Nonlinearity zero();
  // User-supplied f without primitive: F by adaptive Gauss-Kronrod quadrature (1e-10).
  static Nonlinearity from_function(std::string name, Fn f, double p, double c0, Fn df = {});

  double f(double t, double x, double xi) const { return f_(t, x, xi); }
  double F(double t, double x, double xi) const { return F_(t, x, xi); }
  double df(double t, double x, double xi) const { return df_(t, x, xi); }
  bool has_derivative() const { return static_cast<bool>(df_); }
  double p() const { return p_; }
  double c0() const { return c0_; }
  const std::string &name() const { return name_; }
  // True when p is an integer, so the pseudo-spectral product rule is exact.
  bool integer_exponent() const;
  bool is_zero() const { return zero_; }

private:
  std::string name_;
  Fn f_;
  Fn F_;
  Fn df_;
  double p_;
  double c0_;
  bool zero_ = false;
};

//
// Sampling-based hypothesis checks. These falsify rather than prove: a pass means no
// counterexample among the samples.
//
struct SampleSet
{
  std::vector<double> t;   // time samples in [0, 2pi)
  std::vector<double> x;   // space samples in [0, pi]
  std::vector<double> xi;  // amplitude samples, both signs, sorted ascending, no zero

  // 17 x 17 (t, x) grid and 41 log-spaced |xi| in [1e-6, 10] with sign reflection. A
  // nonzero extra count appends seeded random xi values.
  static SampleSet standard(std::uint64_t seed = 0, int extra_xi = 0);
  std::size_t size() const { return t.size() * x.size() * xi.size(); }
};

enum class CheckStatus
{
  Pass,
  Fail,
  Unchecked
};

std::string_view to_string(CheckStatus s);

struct Witness
{
  double t = 0.0;
  double x = 0.0;
  double xi = 0.0;
  double xi2 = 0.0;  // second point of a pair (monotonicity)
  double magnitude = 0.0;
};

struct HypothesisEntry
{
  std::string name;
  CheckStatus status = CheckStatus::Unchecked;
  std::optional<Witness> witness;  // always set on Fail
  double worst = 0.0;              // largest observed violation measure
  std::size_t samples = 0;
  std::string note;
};

struct GrowthFit
{
  CheckStatus status = CheckStatus::Unchecked;
  bool degenerate = false;  // F vanishes on all samples; c1 undefined
  double c1 = 0.0;          // F >= c1 |xi|^{p+1} - c2
  double c2 = 0.0;
  double c3 = 0.0;          // F >= c3 |xi|^{p+1} for |xi| >= r_bar
  double r_bar = 0.0;
  double nu = 0.1;          // |F| <= nu xi^2 + C_nu |xi|^{p+1}
  double C_nu = 0.0;
  std::string note;
};

struct HypothesisReport
{
  std::string nonlinearity;
  HypothesisEntry h1;
  HypothesisEntry h2;
  HypothesisEntry h3;
  HypothesisEntry h4;
  GrowthFit growth;

  bool all_pass() const;
};

// |f| <= c0 (1 + |xi|^p)
HypothesisEntry check_h1(const Nonlinearity &nl, const SampleSet &s);
// f = o(|xi|) and F = o(xi^2) as xi -> 0, judged on xi = 10^-1 .. 10^-6
HypothesisEntry check_h2(const Nonlinearity &nl, const SampleSet &s);
// (p + 1) F <= f xi
HypothesisEntry check_h3(const Nonlinearity &nl, const SampleSet &s);
// f nondecreasing in xi
HypothesisEntry check_h4(const Nonlinearity &nl, const SampleSet &s);
// Empirical constants of the growth consequences F >= c1|xi|^{p+1} - c2 and
// |F| <= nu xi^2 + C_nu |xi|^{p+1}.
GrowthFit check_growth(const Nonlinearity &nl, const SampleSet &s);

HypothesisReport check_all(const Nonlinearity &nl, const SampleSet &s);

}  // namespace kgp

#endif  // KGP_NONLINEARITY_HPP
