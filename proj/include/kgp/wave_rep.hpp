// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_WAVE_REP_HPP
#define KGP_WAVE_REP_HPP

#include <vector>
#include "kgp/functional.hpp"
#include "kgp/nonlinearity.hpp"
#include "kgp/spectral_field.hpp"
#include "kgp/transform.hpp"

namespace kgp
{

//
// Zero-mean 2 pi-periodic profile p(s) = sum_{k != 0} p_k e^{iks}, stored for k = 0..K
// with p_0 = 0 and p_{-k} = conj(p_k).
//
class KernelProfile
{
public:
  KernelProfile() : coeffs_(1) {}
  explicit KernelProfile(int K) : coeffs_(static_cast<std::size_t>(K) + 1) {}
  // coeffs[0] must vanish.
  static KernelProfile from_coefficients(std::vector<Complex> coeffs);
  // a sin(ks) and a cos(ks).
  static KernelProfile sin_term(int k, double a);
  static KernelProfile cos_term(int k, double a);

  int K() const { return static_cast<int>(coeffs_.size()) - 1; }
  Complex coeff(int k) const;
  void set(int k, Complex value);
  const std::vector<Complex> &coefficients() const { return coeffs_; }

  double operator()(double s) const;
  // Mean over one period; zero by construction.
  double mean() const { return coeffs_[0].real(); }
  KernelProfile &operator+=(const KernelProfile &other);
  friend bool operator==(const KernelProfile &, const KernelProfile &) = default;

private:
  std::vector<Complex> coeffs_;
};

// y(t,x) = p(t+x) - p(t-x) as a field of kernel modes (j = |k|). Modes beyond the
// truncation are dropped; the default truncation is (K, K).
SpectralField profile_to_field(const KernelProfile &p);
SpectralField profile_to_field(const KernelProfile &p, const Truncation &trunc);

// Inverse of profile_to_field. Throws NotKernel if y has a mode off the kernel above 1e-12.
KernelProfile kernel_profile(const SpectralField &y);

struct RangeCondition
{
  std::vector<double> t;
  std::vector<double> V;  // V(t) = int_0^pi [h(t+x,x) - h(t-x,x)] dx
  double sup_violation = 0.0;
};

// V sampled at t_i = 2 pi i / nt_samples.
RangeCondition range_condition(const SpectralField &h, int nt_samples = 64);
RangeCondition range_condition(const GridField &h, const Truncation &trunc, int nt_samples = 64);

constexpr double kRangeTolerance = 1e-8;

// Pointwise value of
//   -1/2 int_x^pi dxi int_{t+x-xi}^{t-x+xi} h dtau + (pi-x)/(2 pi) int_0^pi dxi int_{t-xi}^{t+xi} h dtau.
// The tau integrals are done exactly on the Fourier series of h, the xi integrals by
// composite Gauss-Legendre with about quad_nodes nodes per unit length.
double w1_formula(const SpectralField &h, double t, double x, int quad_nodes = 64);

struct RangeSolution
{
  SpectralField h;
  SpectralField w1;      // Fourier-sine coefficients of the formula, kernel modes removed
  GridField w1_grid;     // formula values on the evaluation grid
  double kernel_leak = 0.0;    // L2 norm of the removed kernel component
  double weak_residual = 0.0;  // ||L w1 - h||_L2
};

// Throws NotInRange if the range condition fails by kRangeTolerance or more.
RangeSolution represent_w1(const SpectralField &h, int quad_nodes = 64);

// Double integral of p(t+x) q(t-x) over [0, 2 pi] x [0, pi].
double orthogonality_check(const KernelProfile &p, const KernelProfile &q);

struct LinfReport
{
  double norm_u1_inf = 0.0;  // range part of u
  double norm_v1_inf = 0.0;
  double norm_y_inf = 0.0;   // kernel part of u
  double norm_z_inf = 0.0;
  double h1_l1 = 0.0;        // ||b u + eps v + f(u)||_L1
  double h2_l1 = 0.0;
  double h1_inf = 0.0;
  double h2_inf = 0.0;
  double ratio_u = 0.0;      // norm_u1_inf / h1_l1, 0 when h1 vanishes
  double ratio_v = 0.0;
  double lip_u1 = 0.0;       // largest grid difference quotient of u1
  double lip_v1 = 0.0;
  int nt = 0;
  int nx = 0;
};

// Sup norms on a grid oversampled by 4 that contains t = k pi / 2 and x = pi / 2.
LinfReport linf_report(const FieldPair &state, const Nonlinearity &f, const Nonlinearity &g);

struct ModulusRow
{
  double h = 0.0;
  double sup_diff = 0.0;
};

struct ContinuityReport
{
  std::vector<ModulusRow> rows;  // ordered as given
  double tail = 0.0;             // 2 sum_{k > K/2} |p_k|
  bool monotone = true;          // sup_diff non-increasing as h decreases
  bool pass = false;             // monotone and 10 * tail <= sup_diff at the smallest h
};

// sup_t |p(t+h) - p(t)| for each shift; every h must lie in (0, 1/4).
ContinuityReport continuity_report(const KernelProfile &p, const std::vector<double> &shifts);

}  // namespace kgp

#endif  // KGP_WAVE_REP_HPP
