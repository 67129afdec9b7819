// SPDX-License-Identifier: Apache-2.0

#include "kgp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <fmt/format.h>
#include "kgp/krylov.hpp"

namespace kgp
{

InitialGuess InitialGuess::single_mode(int j, int k, double amplitude)
{
  InitialGuess g;
  g.kind = Kind::SingleMode;
  g.mode = {j, k};
  g.amplitude = amplitude;
  return g;
}

InitialGuess InitialGuess::from_state(const FieldPair &state)
{
  InitialGuess g;
  g.kind = Kind::FromFile;
  g.u = state.u;
  g.v = state.v;
  return g;
}

bool SolveConfig::coupling_warning() const
{
  return kgp::coupling_warning(b, eps);
}

void SolveConfig::validate() const
{
  require_admissible_b(b);
  if (!(tol_residual > 0.0))
  {
    throw Error(ErrorKind::InvalidConfig, "tol_residual must be positive");
  }
  if (max_newton < 0 || krylov_maxit < 1 || !(krylov_tol > 0.0))
  {
    throw Error(ErrorKind::InvalidConfig, "iteration limits and krylov_tol must be positive");
  }
  if (!std::isfinite(eps))
  {
    throw Error(ErrorKind::InvalidConfig, "eps must be finite");
  }
}

SolveFailure::SolveFailure(ErrorKind kind, const std::string &message, SolveReport report)
  : Error(kind, message), report_(std::move(report))
{
}

bool is_semi_trivial(const FieldPair &state)
{
  const bool u_on = l2_norm(state.u) > kNontrivialThreshold;
  const bool v_on = l2_norm(state.v) > kNontrivialThreshold;
  return u_on != v_on;
}

namespace
{

FieldPair initial_state(const SolveConfig &cfg)
{
  FieldPair s = FieldPair::zero(cfg.trunc, cfg.b, cfg.eps);
  switch (cfg.initial_guess.kind)
  {
    case InitialGuess::Kind::Zero:
      break;
    case InitialGuess::Kind::SingleMode:
    {
      const auto m = cfg.initial_guess.mode;
      if (!cfg.trunc.contains(m))
      {
        throw Error(ErrorKind::InvalidConfig,
                    fmt::format("initial mode ({},{}) outside the truncation", m.j, m.k));
      }
      s.u = SpectralField::mode(cfg.trunc, m.j, std::abs(m.k), cfg.initial_guess.amplitude);
      s.v = s.u;
      break;
    }
    case InitialGuess::Kind::FromFile:
      if (cfg.initial_guess.u)
      {
        s.u = cfg.initial_guess.u->resized(cfg.trunc);
      }
      if (cfg.initial_guess.v)
      {
        s.v = cfg.initial_guess.v->resized(cfg.trunc);
      }
      break;
  }
  return s;
}

// Per-entry data in the packed layout of one field.
struct PackedWeights
{
  std::vector<double> shift;  // lambda + b
  std::vector<double> dual;   // pi^2 * multiplicity * dual weight
};

PackedWeights packed_weights(const Truncation &trunc, double b)
{
  PackedWeights w;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int j = 1; j <= trunc.J; ++j)
  {
    for (int k = 0; k <= trunc.K; ++k)
    {
      const double shift = static_cast<double>(eigenvalue({j, k})) + b;
      const double dual = (j == k ? 1.0 : 1.0 / std::abs(shift)) * pi2 * (k == 0 ? 1.0 : 2.0);
      const int copies = k == 0 ? 1 : 2;
      for (int c = 0; c < copies; ++c)
      {
        w.shift.push_back(shift);
        w.dual.push_back(dual);
      }
    }
  }
  return w;
}

//
// Newton on a packed unknown vector. The Problem supplies the residual, a linearization
// returning the Jacobian action, and the (L+b) shift for preconditioning.
//
struct NewtonProblem
{
  std::size_t size = 0;
  std::function<std::vector<double>(std::span<const double>)> residual;
  std::function<LinearMap(std::span<const double>, std::span<const double>)> linearize;
  std::vector<double> shift;
  std::vector<double> dual;
};

struct NewtonOutcome
{
  std::vector<double> x;
  std::vector<double> history;
  int iterations = 0;
  int krylov_iterations = 0;
  bool converged = false;
  ErrorKind failure_kind = ErrorKind::MaxIterations;
  std::string failure;
};

double dual_norm(const NewtonProblem &p, std::span<const double> r)
{
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
  {
    s += p.dual[i] * r[i] * r[i];
  }
  return std::sqrt(s);
}

NewtonOutcome run_newton(const NewtonProblem &p, std::vector<double> x, const SolveConfig &cfg)
{
  NewtonOutcome out;
  std::vector<double> r = p.residual(x);
  double rn = dual_norm(p, r);
  out.history.push_back(rn);
  LinearMap precond = [&p](std::span<const double> in, std::span<double> y) {
    // Jacobian is -(L+b) + lower order, so precondition with -(L+b)^{-1}.
    for (std::size_t i = 0; i < in.size(); ++i)
    {
      y[i] = -in[i] / p.shift[i];
    }
  };
  std::vector<double> step(p.size), rhs(p.size), trial(p.size);
  while (rn > cfg.tol_residual)
  {
    if (!std::isfinite(rn))
    {
      out.failure = "residual became non-finite";
      break;
    }
    if (out.iterations >= cfg.max_newton)
    {
      out.failure = fmt::format("no convergence in {} Newton iterations (residual {:.3e})",
                                cfg.max_newton, rn);
      break;
    }
    ++out.iterations;
    const LinearMap J = p.linearize(x, r);
    for (std::size_t i = 0; i < p.size; ++i)
    {
      rhs[i] = -r[i];
    }
    std::fill(step.begin(), step.end(), 0.0);
    const KrylovResult kr = gmres(J, precond, rhs, step, cfg.krylov_tol, cfg.krylov_maxit);
    out.krylov_iterations += kr.iterations;
    if (!std::isfinite(kr.relative_residual) || kr.relative_residual > 0.5)
    {
      out.failure_kind = ErrorKind::LinearSolveBreakdown;
      out.failure = fmt::format("GMRES reduced the linear residual only to {:.3e}",
                                kr.relative_residual);
      break;
    }
    double alpha = 1.0;
    std::vector<double> r_trial;
    double rn_trial = 0.0;
    for (int halving = 0;; ++halving)
    {
      for (std::size_t i = 0; i < p.size; ++i)
      {
        trial[i] = x[i] + alpha * step[i];
      }
      r_trial = p.residual(trial);
      rn_trial = dual_norm(p, r_trial);
      if (cfg.linesearch == LineSearch::None || (std::isfinite(rn_trial) && rn_trial < rn) ||
          halving == 20)
      {
        break;
      }
      alpha *= 0.5;
    }
    x = trial;
    r = std::move(r_trial);
    rn = rn_trial;
    out.history.push_back(rn);
  }
  out.converged = rn <= cfg.tol_residual;
  out.x = std::move(x);
  return out;
}

std::vector<double> concat(const SpectralField &a, const SpectralField &b)
{
  const std::size_t n = packed_size(a.truncation());
  std::vector<double> x(2 * n);
  pack(a, std::span<double>(x).first(n));
  pack(b, std::span<double>(x).subspan(n));
  return x;
}

// Finite-difference Jacobian action around x with residual r.
LinearMap fd_jacobian(const NewtonProblem &p, std::vector<double> x, std::vector<double> r)
{
  return [&p, x = std::move(x), r = std::move(r)](std::span<const double> d, std::span<double> y) {
    double xn = 0.0, dn = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
    {
      xn += x[i] * x[i];
      dn += d[i] * d[i];
    }
    if (dn == 0.0)
    {
      std::fill(y.begin(), y.end(), 0.0);
      return;
    }
    const double delta = 1e-7 * std::max(1.0, std::sqrt(xn)) / std::sqrt(dn);
    std::vector<double> shifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
      shifted[i] = x[i] + delta * d[i];
    }
    const std::vector<double> rs = p.residual(shifted);
    for (std::size_t i = 0; i < y.size(); ++i)
    {
      y[i] = (rs[i] - r[i]) / delta;
    }
  };
}

SolveReport finish_report(const Functional &fn, FieldPair state, const SolveConfig &cfg)
{
  SolveReport rep;
  rep.final_residual = fn.residual_norms(state);
  rep.energy = fn.energy(state);
  rep.decomposition = decomposition_report(state);
  rep.nontrivial =
      std::min(l2_norm(state.u), l2_norm(state.v)) > kNontrivialThreshold;
  rep.coupling_warning = cfg.coupling_warning();
  rep.state = std::move(state);
  return rep;
}

}  // namespace

SolveReport newton_solve(const SolveConfig &cfg, const Nonlinearity &f, const Nonlinearity &g,
                         const Forcing &forcing)
{
  cfg.validate();
  const Truncation &trunc = cfg.trunc;
  const Forcing forced = forcing.resized(trunc);
  Functional fn(trunc, f, g, forced);
  const FieldPair start = initial_state(cfg);
  const std::size_t n = packed_size(trunc);
  const PackedWeights weights = packed_weights(trunc, cfg.b);
  const bool exact = cfg.jacobian == JacobianKind::Exact;

  SolveReport rep;
  FieldPair state = start;
  bool converged = false;
  ErrorKind failure_kind = ErrorKind::MaxIterations;
  std::string failure;

  if (cfg.eps == 0.0)
  {
    // Decoupled: each field solves its own scalar equation.
    std::vector<std::vector<double>> histories;
    converged = true;
    for (int field = 0; field < 2; ++field)
    {
      NewtonProblem p;
      p.size = n;
      p.shift = weights.shift;
      p.dual = weights.dual;
      auto as_state = [&, field](std::span<const double> x) {
        SpectralField w = unpack(trunc, x);
        SpectralField zero(trunc);
        return field == 0 ? FieldPair(std::move(w), std::move(zero), cfg.b, 0.0)
                          : FieldPair(std::move(zero), std::move(w), cfg.b, 0.0);
      };
      p.residual = [&, field, as_state](std::span<const double> x) {
        const Residual r = fn.gradient(as_state(x));
        std::vector<double> out(n);
        pack(field == 0 ? r.ru : r.rv, out);
        return out;
      };
      p.linearize = [&, field, as_state](std::span<const double> x,
                                         std::span<const double> r) -> LinearMap {
        if (!exact)
        {
          return fd_jacobian(p, {x.begin(), x.end()}, {r.begin(), r.end()});
        }
        auto lin = std::make_shared<Functional::Linearization>(fn.linearize(as_state(x)));
        return [&, field, lin](std::span<const double> d, std::span<double> y) {
          SpectralField dw = unpack(trunc, d);
          SpectralField zero(trunc);
          const Residual jr = field == 0 ? fn.apply_jacobian(*lin, dw, zero)
                                         : fn.apply_jacobian(*lin, zero, dw);
          pack(field == 0 ? jr.ru : jr.rv, y);
        };
      };
      std::vector<double> x0(n);
      pack(field == 0 ? start.u : start.v, x0);
      NewtonOutcome o = run_newton(p, std::move(x0), cfg);
      (field == 0 ? state.u : state.v) = unpack(trunc, o.x);
      rep.iterations = std::max(rep.iterations, o.iterations);
      rep.krylov_iterations += o.krylov_iterations;
      histories.push_back(std::move(o.history));
      if (!o.converged && converged)
      {
        converged = false;
        failure_kind = o.failure_kind;
        failure = fmt::format("{} equation: {}", field == 0 ? "u" : "v", o.failure);
      }
    }
    const std::size_t len = std::max(histories[0].size(), histories[1].size());
    for (std::size_t i = 0; i < len; ++i)
    {
      const double a = histories[0][std::min(i, histories[0].size() - 1)];
      const double b = histories[1][std::min(i, histories[1].size() - 1)];
      rep.residual_history.push_back(std::hypot(a, b));
    }
    rep.decoupled = true;
  }
  else
  {
    NewtonProblem p;
    p.size = 2 * n;
    p.shift = weights.shift;
    p.shift.insert(p.shift.end(), weights.shift.begin(), weights.shift.end());
    p.dual = weights.dual;
    p.dual.insert(p.dual.end(), weights.dual.begin(), weights.dual.end());
    auto as_state = [&](std::span<const double> x) {
      return FieldPair(unpack(trunc, x.first(n)), unpack(trunc, x.subspan(n)), cfg.b, cfg.eps);
    };
    p.residual = [&, as_state](std::span<const double> x) {
      const Residual r = fn.gradient(as_state(x));
      return concat(r.ru, r.rv);
    };
    p.linearize = [&, as_state](std::span<const double> x, std::span<const double> r) -> LinearMap {
      if (!exact)
      {
        return fd_jacobian(p, {x.begin(), x.end()}, {r.begin(), r.end()});
      }
      auto lin = std::make_shared<Functional::Linearization>(fn.linearize(as_state(x)));
      return [&, lin](std::span<const double> d, std::span<double> y) {
        const Residual jr = fn.apply_jacobian(*lin, unpack(trunc, d.first(n)),
                                              unpack(trunc, d.subspan(n)));
        pack(jr.ru, y.first(n));
        pack(jr.rv, y.subspan(n));
      };
    };
    NewtonOutcome o = run_newton(p, concat(start.u, start.v), cfg);
    state = as_state(o.x);
    rep.iterations = o.iterations;
    rep.krylov_iterations = o.krylov_iterations;
    rep.residual_history = std::move(o.history);
    converged = o.converged;
    failure_kind = o.failure_kind;
    failure = o.failure;
  }

  SolveReport done = finish_report(fn, std::move(state), cfg);
  done.iterations = rep.iterations;
  done.krylov_iterations = rep.krylov_iterations;
  done.residual_history = std::move(rep.residual_history);
  done.decoupled = rep.decoupled;
  done.converged = converged && done.final_residual.dual_H <= cfg.tol_residual;
  if (!done.converged)
  {
    done.failure = failure.empty() ? "residual above tolerance" : failure;
    throw SolveFailure(failure_kind, done.failure, std::move(done));
  }
  return done;
}

SolveReport fixed_point_solve(const SolveConfig &cfg, const Nonlinearity &f,
                              const Nonlinearity &g, const Forcing &forcing)
{
  cfg.validate();
  const Forcing forced = forcing.resized(cfg.trunc);
  Functional fn(cfg.trunc, f, g, forced);
  FieldPair state = initial_state(cfg);
  std::vector<double> history;
  double rn = fn.residual_norms(state).dual_H;
  history.push_back(rn);
  const double start = std::max(rn, 1e-300);
  int sweeps = 0;
  std::string failure;
  while (rn > cfg.tol_residual)
  {
    if (!std::isfinite(rn) || rn > 1e8 * start)
    {
      failure = fmt::format("fixed-point iteration diverged after {} sweeps", sweeps);
      break;
    }
    if (sweeps >= cfg.max_newton)
    {
      failure = fmt::format("no convergence in {} fixed-point sweeps (residual {:.3e})",
                            cfg.max_newton, rn);
      break;
    }
    ++sweeps;
    SpectralField su = cfg.eps * state.v + fn.project_f(state.u);
    SpectralField sv = cfg.eps * state.u + fn.project_g(state.v);
    if (forced.h1)
    {
      su += *forced.h1;
    }
    if (forced.h2)
    {
      sv += *forced.h2;
    }
    state = FieldPair(-1.0 * invert_L_plus_b(su, cfg.b), -1.0 * invert_L_plus_b(sv, cfg.b),
                      cfg.b, cfg.eps);
    rn = fn.residual_norms(state).dual_H;
    history.push_back(rn);
  }
  SolveReport rep = finish_report(fn, std::move(state), cfg);
  rep.iterations = sweeps;
  rep.residual_history = std::move(history);
  rep.converged = rn <= cfg.tol_residual;
  if (!rep.converged)
  {
    rep.failure = failure;
    throw SolveFailure(ErrorKind::MaxIterations, failure, std::move(rep));
  }
  return rep;
}

std::vector<RefinementStage> refine(const RefinementSchedule &schedule, const SolveConfig &cfg,
                                    const Nonlinearity &f, const Nonlinearity &g,
                                    const Forcing &forcing)
{
  for (std::size_t i = 1; i < schedule.size(); ++i)
  {
    if (!schedule[i].covers(schedule[i - 1]))
    {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("refinement schedule is not monotone at stage {}", i));
    }
  }
  std::vector<RefinementStage> stages;
  std::optional<FieldPair> previous;
  for (const Truncation &trunc : schedule)
  {
    SolveConfig stage_cfg = cfg;
    stage_cfg.trunc = trunc;
    if (previous)
    {
      stage_cfg.initial_guess = InitialGuess::from_state(*previous);
    }
    RefinementStage stage{newton_solve(stage_cfg, f, g, forcing), std::nullopt};
    if (previous)
    {
      const FieldPair padded = previous->resized(trunc);
      const double du = l2_norm(stage.report.state.u - padded.u);
      const double dv = l2_norm(stage.report.state.v - padded.v);
      stage.increment = std::hypot(du, dv);
    }
    previous = stage.report.state;
    stages.push_back(std::move(stage));
  }
  return stages;
}

SweepReport continuation_in_epsilon(const std::vector<double> &eps_list, const SolveConfig &cfg,
                                    const Nonlinearity &f, const Nonlinearity &g,
                                    const Forcing &forcing)
{
  std::vector<double> list = eps_list;
  for (std::size_t i = 1; i < list.size(); ++i)
  {
    if (std::abs(list[i]) > std::abs(list[i - 1]))
    {
      throw Error(ErrorKind::InvalidArgument, "eps_list must be non-increasing in |eps|");
    }
  }
  if (list.empty() || list.back() != 0.0)
  {
    list.push_back(0.0);
  }
  SweepReport sweep;
  std::optional<FieldPair> previous;
  for (double eps : list)
  {
    SolveConfig stage_cfg = cfg;
    stage_cfg.eps = eps;
    if (previous)
    {
      stage_cfg.initial_guess = InitialGuess::from_state(*previous);
    }
    SweepRow row;
    row.eps = eps;
    row.coupling_warning = stage_cfg.coupling_warning();
    try
    {
      SolveReport rep = newton_solve(stage_cfg, f, g, forcing);
      row.phi = rep.energy.total;
      row.res_dual = rep.final_residual.dual_H;
      previous = rep.state;
      sweep.reports.push_back(std::move(rep));
      sweep.rows.push_back(row);
    }
    catch (const SolveFailure &e)
    {
      row.phi = e.report().energy.total;
      row.res_dual = e.report().final_residual.dual_H;
      row.err_u_l2 = row.err_v_l2 = std::numeric_limits<double>::quiet_NaN();
      sweep.reports.push_back(e.report());
      sweep.rows.push_back(row);
      sweep.failure = fmt::format("stage eps={} failed: {}", eps, e.what());
      break;
    }
  }
  sweep.completed = sweep.failure.empty();
  if (sweep.completed)
  {
    const FieldPair &limit = sweep.reports.back().state;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i)
    {
      sweep.rows[i].err_u_l2 = l2_norm(sweep.reports[i].state.u - limit.u);
      sweep.rows[i].err_v_l2 = l2_norm(sweep.reports[i].state.v - limit.v);
    }
    // Decoupled residuals checked on each equation separately.
    const Forcing forced = forcing.resized(cfg.trunc);
    Functional fn(cfg.trunc, f, g, forced);
    const Residual r = fn.gradient(FieldPair(limit.u, limit.v, limit.b, 0.0));
    sweep.decoupled_residual_u = norms_of({r.ru, SpectralField(cfg.trunc)}, limit.b).dual_H;
    sweep.decoupled_residual_v = norms_of({SpectralField(cfg.trunc), r.rv}, limit.b).dual_H;
  }
  else
  {
    for (auto &row : sweep.rows)
    {
      row.err_u_l2 = row.err_v_l2 = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return sweep;
}

NontrivialSearchResult nontrivial_search(const SolveConfig &cfg, const Nonlinearity &f,
                                         const Nonlinearity &g, int max_solutions,
                                         const SearchOptions &options)
{
  NontrivialSearchResult result;
  if (max_solutions <= 0)
  {
    return result;
  }
  std::vector<SolveReport> kept;
  for (const ModeIndex &m : options.modes)
  {
    if (!cfg.trunc.contains(m))
    {
      continue;
    }
    for (double amplitude : options.amplitudes)
    {
      SolveConfig launch = cfg;
      launch.initial_guess = InitialGuess::single_mode(m.j, m.k, amplitude);
      ++result.launches;
      SolveReport rep;
      try
      {
        rep = newton_solve(launch, f, g, Forcing::none());
      }
      catch (const SolveFailure &)
      {
        ++result.diverged;
        continue;
      }
      if (cfg.eps != 0.0 && is_semi_trivial(rep.state))
      {
        ++result.rejected_semi_trivial;
        continue;
      }
      if (!rep.nontrivial)
      {
        ++result.collapsed;
        continue;
      }
      bool duplicate = false;
      for (auto &k : kept)
      {
        const double d = std::hypot(l2_norm(k.state.u - rep.state.u), l2_norm(k.state.v - rep.state.v));
        if (d <= options.dedup_distance)
        {
          duplicate = true;
          if (std::abs(rep.energy.total) < std::abs(k.energy.total))
          {
            k = rep;
          }
          break;
        }
      }
      if (!duplicate)
      {
        kept.push_back(std::move(rep));
      }
    }
  }
  if (kept.size() > static_cast<std::size_t>(max_solutions))
  {
    kept.resize(static_cast<std::size_t>(max_solutions));
  }
  result.solutions = std::move(kept);
  result.none_found = result.solutions.empty();
  return result;
}

}  // namespace kgp
