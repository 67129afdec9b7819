// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include "kgp/error.hpp"
#include "kgp/io.hpp"
#include "kgp/wave_rep.hpp"
#include "run_config.hpp"

namespace kgp::cli
{

namespace fs = std::filesystem;

namespace
{

int exit_code_for(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::MaxIterations:
    case ErrorKind::LinearSolveBreakdown:
    case ErrorKind::NotInRange:
    case ErrorKind::NotKernel:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

RunConfig load(const CommandOptions &opt)
{
  RunConfig cfg = load_run_config(opt.config);
  if (opt.out)
  {
    cfg.out_dir = *opt.out;
  }
  if (opt.seed)
  {
    cfg.seed = *opt.seed;
  }
  return cfg;
}

int guarded(const CommandOptions &opt, std::ostream &log,
            const std::function<int(const RunConfig &)> &body)
{
  RunConfig cfg;
  try
  {
    cfg = load(opt);
  }
  catch (const Error &e)
  {
    fmt::print(log, "config error: {}\n", e.what());
    return kExitConfig;
  }
  try
  {
    return body(cfg);
  }
  catch (const Error &e)
  {
    fmt::print(log, "error: {}\n", e.what());
    return exit_code_for(e.kind());
  }
  catch (const std::exception &e)
  {
    fmt::print(log, "error: {}\n", e.what());
    return kExitNumerical;
  }
}

void write_json(const fs::path &path, const Json &j)
{
  write_file_atomic(path, j.dump(2) + "\n");
}

Json spectral_json(double b, double eps, const Truncation &trunc)
{
  const SpectralGapInfo gap = spectral_gap(b);
  int kernel_modes = 0;
  for (const ModeIndex &m : trunc.modes())
  {
    kernel_modes += m.j == std::abs(m.k) ? 1 : 0;
  }
  return Json{{"b", b},
              {"eps", eps},
              {"eta", gap.eta},
              {"kappa", gap.kappa},
              {"in_spectrum", gap.in_spectrum},
              {"coupling_threshold", coupling_threshold(b)},
              {"coupling_warning", coupling_warning(b, eps)},
              {"kernel_modes", kernel_modes},
              {"J", trunc.J},
              {"K", trunc.K}};
}

SolveReport run_solver(const RunConfig &cfg, const SolveConfig &sc, const Forcing &forcing)
{
  return cfg.method == SolveMethod::Newton ? newton_solve(sc, *cfg.f, *cfg.g, forcing)
                                           : fixed_point_solve(sc, *cfg.f, *cfg.g, forcing);
}

}  // namespace

int cmd_check(const CommandOptions &opt, std::ostream &log)
{
  return guarded(opt, log, [&](const RunConfig &cfg) {
    const SampleSet samples = SampleSet::standard(cfg.seed, cfg.seed != 0 ? 64 : 0);
    const HypothesisReport rf = check_all(*cfg.f, samples);
    const HypothesisReport rg = check_all(*cfg.g, samples);
    const bool pass = rf.all_pass() && rg.all_pass();
    Json out{{"f", to_json(rf)},
             {"g", to_json(rg)},
             {"spectrum", spectral_json(cfg.b, cfg.eps, cfg.trunc)},
             {"seed", cfg.seed},
             {"all_pass", pass}};
    write_json(cfg.out_dir / "check.json", out);
    for (const auto *r : {&rf, &rg})
    {
      for (const auto *h : {&r->h1, &r->h2, &r->h3, &r->h4})
      {
        fmt::print(log, "{} {}: {}", r == &rf ? "f" : "g", h->name, to_string(h->status));
        if (h->witness)
        {
          fmt::print(log, " (witness t={:.6g} x={:.6g} xi={:.6g})", h->witness->t, h->witness->x,
                     h->witness->xi);
        }
        fmt::print(log, "\n");
      }
    }
    if (coupling_warning(cfg.b, cfg.eps))
    {
      fmt::print(log, "warning: |eps| = {} is at or above the coupling threshold {}\n",
                 std::abs(cfg.eps), coupling_threshold(cfg.b));
    }
    return pass ? kExitOk : kExitNumerical;
  });
}

int cmd_solve(const CommandOptions &opt, std::ostream &log)
{
  return guarded(opt, log, [&](const RunConfig &cfg) {
    const Forcing forcing = build_forcing(cfg);
    SolveReport rep;
    int code = kExitOk;
    try
    {
      rep = run_solver(cfg, cfg.solver, forcing);
    }
    catch (const SolveFailure &e)
    {
      rep = e.report();
      code = kExitNumerical;
      fmt::print(log, "solve failed: {}\n", e.what());
    }
    Json out{{"solve", to_json(rep)},
             {"spectrum", spectral_json(cfg.b, cfg.eps, cfg.trunc)},
             {"method", cfg.method == SolveMethod::Newton ? "newton" : "fixed_point"},
             {"linf", to_json(linf_report(rep.state, *cfg.f, *cfg.g))}};
    const Truncation finer{cfg.trunc.J + 2, cfg.trunc.K + 2};
    out["tail_residual"] =
        to_json(tail_residual(rep.state, finer, *cfg.f, *cfg.g, forcing.resized(finer)));
    if (cfg.forcing.kind == ForcingSpec::Kind::Manufactured)
    {
      const FieldPair &target = *cfg.forcing.target;
      out["manufactured_error_l2"] =
          std::hypot(l2_norm(rep.state.u - target.u), l2_norm(rep.state.v - target.v));
      out["manufactured_eps_ref"] = cfg.forcing.eps_ref;
    }
    write_coefficients(cfg.out_dir / "solution.csv", rep.state);
    write_json(cfg.out_dir / "report.json", out);
    fmt::print(log, "{} after {} iterations, residual {:.3e}\n",
               rep.converged ? "converged" : "not converged", rep.iterations,
               rep.final_residual.dual_H);
    if (rep.coupling_warning)
    {
      fmt::print(log, "warning: |eps| at or above the coupling threshold {}\n",
                 coupling_threshold(cfg.b));
    }
    return code;
  });
}

int cmd_sweep(const CommandOptions &opt, std::ostream &log)
{
  return guarded(opt, log, [&](const RunConfig &cfg) {
    if (!cfg.eps_list)
    {
      throw Error(ErrorKind::InvalidConfig, "eps_list: required by sweep");
    }
    const Forcing forcing = build_forcing(cfg);
    const SweepReport sweep = continuation_in_epsilon(*cfg.eps_list, cfg.solver, *cfg.f, *cfg.g,
                                                      forcing);
    Json rows = Json::array();
    for (std::size_t i = 0; i < sweep.rows.size(); ++i)
    {
      rows.push_back(Json{{"eps", sweep.rows[i].eps},
                          {"coupling_warning", sweep.rows[i].coupling_warning},
                          {"solve", to_json(sweep.reports[i])}});
    }
    Json out{{"stages", rows},
             {"completed", sweep.completed},
             {"failure", sweep.failure},
             {"coupling_threshold", coupling_threshold(cfg.b)}};
    if (sweep.decoupled_residual_u)
    {
      out["decoupled_residual_u"] = *sweep.decoupled_residual_u;
      out["decoupled_residual_v"] = *sweep.decoupled_residual_v;
    }
    write_file_atomic(cfg.out_dir / "sweep.csv", sweep_csv(sweep));
    if (!sweep.reports.empty())
    {
      write_coefficients(cfg.out_dir / "solution.csv", sweep.reports.back().state);
    }
    write_json(cfg.out_dir / "report.json", out);
    for (const auto &r : sweep.rows)
    {
      if (r.coupling_warning)
      {
        fmt::print(log, "warning: eps = {} is at or above the coupling threshold {}\n", r.eps,
                   coupling_threshold(cfg.b));
      }
    }
    if (!sweep.completed)
    {
      fmt::print(log, "sweep stopped: {}\n", sweep.failure);
      return kExitNumerical;
    }
    fmt::print(log, "sweep completed over {} stages\n", sweep.rows.size());
    return kExitOk;
  });
}

int cmd_represent(const CommandOptions &opt, std::ostream &log)
{
  return guarded(opt, log, [&](const RunConfig &cfg) {
    if (!cfg.represent.h)
    {
      throw Error(ErrorKind::InvalidConfig, "represent.h: required by represent (or represent.file)");
    }
    const RepresentSpec &spec = cfg.represent;
    const SpectralField &h = *spec.h;
    const RangeCondition rc = range_condition(h, spec.nt_samples);
    write_file_atomic(cfg.out_dir / "range_condition.csv", range_condition_csv(rc));
    const KernelProfile profile = kernel_profile(kernel_part(h));
    write_file_atomic(cfg.out_dir / "profile_p.csv", profile_csv(profile));
    Json out{{"sup_violation", rc.sup_violation},
             {"tolerance", kRangeTolerance},
             {"in_range", rc.sup_violation < kRangeTolerance}};
    if (!spec.shifts.empty())
    {
      const ContinuityReport cr = continuity_report(profile, spec.shifts);
      write_file_atomic(cfg.out_dir / "modulus.csv", modulus_csv(cr));
      out["continuity"] = Json{{"tail", cr.tail}, {"monotone", cr.monotone}, {"pass", cr.pass}};
    }
    int code = kExitOk;
    if (spec.w1)
    {
      try
      {
        const RangeSolution sol = represent_w1(h, spec.quad_nodes);
        write_file_atomic(cfg.out_dir / "w1.csv", grid_csv(sol.w1_grid));
        write_coefficients(cfg.out_dir / "w1_coeffs.csv",
                           FieldPair(sol.w1, SpectralField(sol.w1.truncation()), cfg.b, 0.0));
        out["w1"] = Json{{"kernel_leak", sol.kernel_leak},
                         {"weak_residual", sol.weak_residual},
                         {"l2", l2_norm(sol.w1)},
                         {"quad_nodes", spec.quad_nodes}};
      }
      catch (const Error &e)
      {
        if (e.kind() != ErrorKind::NotInRange)
        {
          throw;
        }
        fmt::print(log, "{}\n", e.what());
        out["w1"] = Json{{"error", e.what()}};
        code = kExitNumerical;
      }
    }
    write_json(cfg.out_dir / "represent.json", out);
    fmt::print(log, "range condition sup |V| = {}\n", format_double(rc.sup_violation));
    return code;
  });
}

int cmd_spectrum(const CommandOptions &opt, std::ostream &log)
{
  return guarded(opt, log, [&](const RunConfig &cfg) {
    write_file_atomic(cfg.out_dir / "spectrum.csv", spectrum_csv(cfg.trunc, cfg.b));
    const Json s = spectral_json(cfg.b, cfg.eps, cfg.trunc);
    fmt::print(log, "eta={} kappa={} kernel_modes={} coupling_threshold={}\n",
               format_double(s["eta"].get<double>()), format_double(s["kappa"].get<double>()),
               s["kernel_modes"].get<int>(), format_double(s["coupling_threshold"].get<double>()));
    return kExitOk;
  });
}

}  // namespace kgp::cli
