// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one line per criterion, exit status 0 iff every criterion passes.
//

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>
#include <fmt/format.h>
#include "kgp/error.hpp"
#include "kgp/solver.hpp"
#include "kgp/wave_rep.hpp"
#include "support.hpp"

namespace
{

using namespace kgp;
using kgp::testing::Gen;
using kgp::testing::kPi;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

struct Criterion
{
  int id;
  const char *name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

const Nonlinearity cubic = Nonlinearity::power_law(3.0, Amplitude::constant(1.0));

Outcome spectral_identities()
{
  constexpr double kTol = 1e-10;
  Gen gen(101);
  const Truncation tr{8, 8};
  double worst_form = 0.0, worst_norm = 0.0;
  const double bs[] = {1.0, 0.5, 2.5, 6.3};
  for (int i = 0; i < 100; ++i)
  {
    const double b = bs[i % 4];
    const auto u = gen.field(tr), v = gen.field(tr);
    const auto s = split(u, b);
    const double lhs = l2_inner(apply_L_plus_b(u, b), u);
    const double rhs = h_norm_squared(s.plus, b) - h_norm_squared(s.minus, b) +
                       b * std::pow(l2_norm(s.kernel), 2);
    worst_form = std::max(worst_form, std::abs(lhs - rhs) / std::abs(lhs));
    const auto d = decomposition_report(FieldPair(u, v, b, 0.0));
    const double e2 = d.E_norm * d.E_norm;
    worst_norm = std::max(worst_norm, std::abs(d.parts_squared() - e2) / e2);
  }
  return {worst_form < kTol && worst_norm < kTol,
          fmt::format("quadratic form rel err {:.2e}, E-norm rel err {:.2e} (limit {:.0e})",
                      worst_form, worst_norm, kTol)};
}

Outcome gradient_consistency()
{
  constexpr double kTol = 1e-6;
  Gen gen(102);
  const Truncation tr{8, 8};
  const Functional fn(tr, cubic, cubic);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const FieldPair s(gen.field(tr, 0.6), gen.field(tr, 0.6), 1.0, 0.05);
    const auto du = gen.field(tr), dv = gen.field(tr);
    const auto r = fn.gradient(s);
    const double analytic = l2_inner(r.ru, du) + l2_inner(r.rv, dv);
    const double h = 1e-5;
    auto phi = [&](double a) {
      return fn.energy(FieldPair(s.u + a * du, s.v + a * dv, s.b, s.eps)).total;
    };
    const double fd = (phi(h) - phi(-h)) / (2 * h);
    worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
  }
  return {worst < kTol, fmt::format("max rel err {:.2e} over 50 states (limit {:.0e})", worst, kTol)};
}

FieldPair manufactured_target(const Truncation &tr, double eps)
{
  return FieldPair(SpectralField::mode(tr, 1, 1, 0.3), SpectralField::mode(tr, 2, 1, 0.3), 1.0, eps);
}

SolveConfig base_config(const Truncation &tr, double eps)
{
  SolveConfig cfg;
  cfg.b = 1.0;
  cfg.eps = eps;
  cfg.trunc = tr;
  cfg.tol_residual = 1e-11;
  return cfg;
}

Outcome manufactured_recovery()
{
  constexpr double kTol = 1e-9;
  constexpr int kMaxIterations = 10;
  const Truncation tr{8, 8};
  const FieldPair target = manufactured_target(tr, 0.05);
  try
  {
    const auto rep = newton_solve(base_config(tr, 0.05), cubic, cubic,
                                  manufactured_forcing(target, cubic, cubic));
    const double err = std::hypot(l2_norm(rep.state.u - target.u), l2_norm(rep.state.v - target.v));
    return {err < kTol && rep.iterations <= kMaxIterations,
            fmt::format("L2 error {:.2e} (limit {:.0e}) in {} Newton iterations (limit {})", err,
                        kTol, rep.iterations, kMaxIterations)};
  }
  catch (const SolveFailure &e)
  {
    return {false, e.what()};
  }
}

Outcome eps_convergence()
{
  constexpr double kResidualTol = 1e-9;
  const Truncation tr{8, 8};
  const FieldPair target = manufactured_target(tr, 0.0);
  const auto sweep = continuation_in_epsilon({0.2, 0.1, 0.05, 0.025, 0.0}, base_config(tr, 0.0),
                                             cubic, cubic, manufactured_forcing(target, cubic, cubic));
  if (!sweep.completed)
  {
    return {false, "sweep stopped: " + sweep.failure};
  }
  bool ok = true;
  std::string ratios;
  for (std::size_t i = 1; i + 1 < sweep.rows.size(); ++i)
  {
    const double r = sweep.rows[i].err_u_l2 / sweep.rows[i - 1].err_u_l2;
    ok = ok && r >= 0.4 && r <= 0.6;
    ratios += fmt::format("{}{:.3f}", ratios.empty() ? "" : ",", r);
  }
  const double ru = *sweep.decoupled_residual_u, rv = *sweep.decoupled_residual_v;
  ok = ok && ru <= kResidualTol && rv <= kResidualTol;
  return {ok, fmt::format("halving ratios [{}] (band [0.4,0.6]), decoupled residuals {:.1e}/{:.1e} "
                          "(limit {:.0e})",
                          ratios, ru, rv, kResidualTol)};
}

Outcome representation_oracle()
{
  constexpr double kTol = 1e-8;
  constexpr double kExact = 1e-12;
  Gen gen(105);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const Truncation tr{gen.integer(1, 8), gen.integer(0, 8)};
    const auto h = gen.range_field(tr);
    SpectralField oracle(tr);
    for (int j = 1; j <= tr.J; ++j)
    {
      for (int k = 0; k <= tr.K; ++k)
      {
        if (j != k)
        {
          oracle.set(j, k, h.coeff(j, k) / static_cast<double>(j * j - k * k));
        }
      }
    }
    worst = std::max(worst, l2_norm(represent_w1(h).w1 - oracle));
  }
  const Truncation tr{4, 2};
  const double a = l2_norm(represent_w1(SpectralField::cos_term(tr, 2, 0, 1.0)).w1 -
                           SpectralField::cos_term(tr, 2, 0, 0.25));
  const double b = l2_norm(represent_w1(SpectralField::cos_term(tr, 2, 1, 1.0)).w1 -
                           SpectralField::cos_term(tr, 2, 1, 1.0 / 3.0));
  bool rejected = false;
  try
  {
    (void)represent_w1(SpectralField::cos_term(tr, 1, 1, 1.0));
  }
  catch (const Error &e)
  {
    rejected = e.kind() == ErrorKind::NotInRange;
  }
  return {worst < kTol && a < kExact && b < kExact && rejected,
          fmt::format("random max L2 err {:.2e} (limit {:.0e}); sin2x err {:.1e}, sin2x cos t err "
                      "{:.1e} (limit {:.0e}); kernel input {}",
                      worst, kTol, a, b, kExact, rejected ? "NotInRange" : "accepted")};
}

Outcome range_condition_check()
{
  constexpr double kRangeTol = 1e-10;
  constexpr double kPiTol = 1e-8;
  Gen gen(106);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const Truncation tr{gen.integer(1, 8), gen.integer(0, 8)};
    worst = std::max(worst, range_condition(gen.range_field(tr)).sup_violation);
  }
  const double sup = range_condition(SpectralField::cos_term(Truncation{4, 4}, 1, 1, 1.0)).sup_violation;
  return {worst < kRangeTol && std::abs(sup - kPi) < kPiTol,
          fmt::format("range fields max sup {:.2e} (limit {:.0e}); sin x cos t sup - pi = {:.1e} "
                      "(limit {:.0e})",
                      worst, kRangeTol, sup - kPi, kPiTol)};
}

Outcome orthogonality()
{
  constexpr double kTol = 1e-9;
  Gen gen(107);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
  {
    const auto p = gen.profile(gen.integer(1, 16));
    const auto q = gen.profile(gen.integer(1, 16));
    worst = std::max(worst, std::abs(orthogonality_check(p, q)));
  }
  return {worst < kTol, fmt::format("max |integral| {:.2e} over 100 pairs (limit {:.0e})", worst, kTol)};
}

Outcome hypothesis_checkers()
{
  const SampleSet s = SampleSet::standard();
  const bool power = check_all(cubic, s).all_pass();
  const auto linear = check_h3(Nonlinearity::polynomial({0.0, 1.0}, 2.0, 1.0), s);
  const auto negative = check_h4(Nonlinearity::polynomial({0.0, 0.0, 0.0, -1.0}, 3.0, 1.0), s);
  const bool linear_fails = linear.status == CheckStatus::Fail && linear.witness.has_value();
  const bool negative_fails = negative.status == CheckStatus::Fail && negative.witness.has_value();
  bool collision = false;
  try
  {
    require_admissible_b(3.0);
  }
  catch (const Error &e)
  {
    collision = e.kind() == ErrorKind::SpectrumCollision;
  }
  return {power && linear_fails && negative_fails && collision,
          fmt::format("xi^3 all pass: {}; linear h3 fail with witness: {}; -xi^3 h4 fail with "
                      "witness: {}; b=3 rejected: {}",
                      power, linear_fails, negative_fails, collision)};
}

Outcome kernel_profiles()
{
  constexpr double kRoundTrip = 1e-12;
  constexpr double kModulus = 1e-10;
  Gen gen(109);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i)
  {
    const int n = gen.integer(1, 8);
    const Truncation tr{n, gen.integer(n, 8)};
    const auto y = gen.kernel_field(tr);
    worst = std::max(worst, l2_norm(profile_to_field(kernel_profile(y), tr) - y));
  }
  const auto p = kernel_profile(SpectralField::cos_term(Truncation{2, 2}, 1, 1, 1.0));
  const auto rep = continuity_report(p, {0.2, 0.1, 0.05});
  double modulus_err = 0.0;
  for (const auto &row : rep.rows)
  {
    modulus_err = std::max(modulus_err, std::abs(row.sup_diff - std::abs(std::sin(row.h / 2))));
  }
  return {worst < kRoundTrip && modulus_err < kModulus,
          fmt::format("round trip max err {:.1e} (limit {:.0e}); modulus err {:.1e} (limit {:.0e})",
                      worst, kRoundTrip, modulus_err, kModulus)};
}

Outcome nontriviality_structure()
{
  int searches = 0, found = 0, semi = 0;
  for (double eps : {0.1, -0.1, 0.3})
  {
    for (const Truncation tr : {Truncation{6, 6}, Truncation{8, 8}})
    {
      const auto result = nontrivial_search(base_config(tr, eps), cubic, cubic, 4);
      ++searches;
      for (const auto &s : result.solutions)
      {
        ++found;
        const bool u_on = l2_norm(s.state.u) > 0.0;
        const bool v_on = l2_norm(s.state.v) > 0.0;
        if (u_on != v_on || is_semi_trivial(s.state))
        {
          ++semi;
        }
      }
    }
  }
  return {semi == 0, fmt::format("{} searches, {} nontrivial states, {} semi-trivial (must be 0)",
                                 searches, found, semi)};
}

}  // namespace

int main()
{
  const std::vector<Criterion> criteria = {
      {1, "spectral identities", 5.0, spectral_identities},
      {2, "gradient consistency", 30.0, gradient_consistency},
      {3, "manufactured-solution recovery", 10.0, manufactured_recovery},
      {4, "convergence as eps -> 0", 60.0, eps_convergence},
      {5, "w1 representation vs diagonal inverse", 60.0, representation_oracle},
      {6, "range condition", 5.0, range_condition_check},
      {7, "orthogonality identity", 10.0, orthogonality},
      {8, "hypothesis checkers", 5.0, hypothesis_checkers},
      {9, "kernel profile round trip and modulus", 5.0, kernel_profiles},
      {10, "nontriviality structure", 120.0, nontriviality_structure},
  };
  int failures = 0;
  for (const auto &c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try
    {
      out = c.run();
    }
    catch (const std::exception &e)
    {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit;
    const bool pass = out.pass && in_time;
    failures += pass ? 0 : 1;
    fmt::print("criterion {:>2} {}: {} | {} | {:.2f} s (limit {:.0f} s)\n", c.id, c.name,
               pass ? "PASS" : "FAIL", out.detail, seconds, c.time_limit);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
