// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <cmath>
#include <set>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp::cli
{

namespace fs = std::filesystem;

namespace
{

[[noreturn]] void invalid(const std::string &field, const std::string &what)
{
  throw Error(ErrorKind::InvalidConfig, fmt::format("{}: {}", field, what));
}

void reject_unknown(const Json &j, const std::string &where, const std::set<std::string> &known)
{
  for (const auto &item : j.items())
  {
    if (!known.contains(item.key()))
    {
      invalid(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

const Json *member(const Json &j, const char *key)
{
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_number(const Json &j, const char *key, const std::string &field, double fallback)
{
  const Json *v = member(j, key);
  if (!v)
  {
    return fallback;
  }
  if (!v->is_number())
  {
    invalid(field, "expected a number");
  }
  const double x = v->get<double>();
  if (!std::isfinite(x))
  {
    invalid(field, "must be finite");
  }
  return x;
}

int get_int(const Json &j, const char *key, const std::string &field, int fallback)
{
  const Json *v = member(j, key);
  if (!v)
  {
    return fallback;
  }
  if (!v->is_number_integer())
  {
    invalid(field, "expected an integer");
  }
  return v->get<int>();
}

bool get_bool(const Json &j, const char *key, const std::string &field, bool fallback)
{
  const Json *v = member(j, key);
  if (!v)
  {
    return fallback;
  }
  if (!v->is_boolean())
  {
    invalid(field, "expected true or false");
  }
  return v->get<bool>();
}

std::string get_string(const Json &j, const char *key, const std::string &field,
                       const std::string &fallback)
{
  const Json *v = member(j, key);
  if (!v)
  {
    return fallback;
  }
  if (!v->is_string())
  {
    invalid(field, "expected a string");
  }
  return v->get<std::string>();
}

fs::path resolve(const fs::path &p, const fs::path &base)
{
  return p.is_absolute() ? p : base / p;
}

// [{"j":1,"k":1,"amplitude":0.3}] (mode normalization) or [{"j":1,"k":1,"re":..,"im":..}].
SpectralField parse_modes(const Json &list, const Truncation &trunc, const std::string &field)
{
  if (!list.is_array())
  {
    invalid(field, "expected an array of modes");
  }
  SpectralField w(trunc);
  for (std::size_t i = 0; i < list.size(); ++i)
  {
    const Json &e = list[i];
    const std::string where = fmt::format("{}[{}]", field, i);
    if (!e.is_object())
    {
      invalid(where, "expected an object");
    }
    reject_unknown(e, where, {"j", "k", "amplitude", "re", "im"});
    const int j = get_int(e, "j", where + ".j", 0);
    const int k = get_int(e, "k", where + ".k", -1);
    if (j < 1 || j > trunc.J || k < 0 || k > trunc.K)
    {
      invalid(where, fmt::format("mode ({},{}) outside truncation J={}, K={}", j, k, trunc.J,
                                 trunc.K));
    }
    if (e.contains("amplitude"))
    {
      w += SpectralField::mode(trunc, j, k, get_number(e, "amplitude", where + ".amplitude", 0));
    }
    else
    {
      const double re = get_number(e, "re", where + ".re", 0.0);
      const double im = get_number(e, "im", where + ".im", 0.0);
      if (k == 0 && im != 0.0)
      {
        invalid(where + ".im", "k = 0 coefficients must be real");
      }
      w.set(j, k, w.coeff(j, k) + Complex(re, im));
    }
  }
  return w;
}

// {"terms":[{"j":2,"k":1,"amp":1,"kind":"cos"}]}: amp * sin(jx) cos(kt) or sin(kt).
SpectralField parse_terms(const Json &j, const Truncation &trunc, const std::string &field)
{
  reject_unknown(j, field, {"terms"});
  const Json *terms = member(j, "terms");
  if (!terms || !terms->is_array())
  {
    invalid(field + ".terms", "expected an array");
  }
  SpectralField h(trunc);
  for (std::size_t i = 0; i < terms->size(); ++i)
  {
    const Json &e = (*terms)[i];
    const std::string where = fmt::format("{}.terms[{}]", field, i);
    if (!e.is_object())
    {
      invalid(where, "expected an object");
    }
    reject_unknown(e, where, {"j", "k", "amp", "kind"});
    const int jj = get_int(e, "j", where + ".j", 0);
    const int k = get_int(e, "k", where + ".k", 0);
    if (jj < 1 || jj > trunc.J || k < 0 || k > trunc.K)
    {
      invalid(where, fmt::format("mode ({},{}) outside truncation J={}, K={}", jj, k, trunc.J,
                                 trunc.K));
    }
    const double amp = get_number(e, "amp", where + ".amp", 1.0);
    const std::string kind = get_string(e, "kind", where + ".kind", "cos");
    if (kind == "cos")
    {
      h += SpectralField::cos_term(trunc, jj, k, amp);
    }
    else if (kind == "sin")
    {
      h += SpectralField::sin_term(trunc, jj, k, amp);
    }
    else
    {
      invalid(where + ".kind", "expected \"cos\" or \"sin\"");
    }
  }
  return h;
}

FieldPair read_coefficients_field(const fs::path &path, const std::string &field)
{
  try
  {
    return read_coefficients(path);
  }
  catch (const Error &e)
  {
    invalid(field, fmt::format("{} ({})", e.what(), path.string()));
  }
}

void parse_solver(const Json &j, RunConfig &cfg, const fs::path &base)
{
  const std::string w = "solver";
  if (!j.is_object())
  {
    invalid(w, "expected an object");
  }
  reject_unknown(j, w,
                 {"tol_residual", "max_newton", "linesearch", "jacobian", "krylov_tol",
                  "krylov_maxit", "initial_guess", "method"});
  SolveConfig &s = cfg.solver;
  s.tol_residual = get_number(j, "tol_residual", w + ".tol_residual", s.tol_residual);
  if (!(s.tol_residual > 0))
  {
    invalid(w + ".tol_residual", "must be positive");
  }
  s.max_newton = get_int(j, "max_newton", w + ".max_newton", s.max_newton);
  if (s.max_newton < 0)
  {
    invalid(w + ".max_newton", "must be non-negative");
  }
  s.krylov_tol = get_number(j, "krylov_tol", w + ".krylov_tol", s.krylov_tol);
  if (!(s.krylov_tol > 0 && s.krylov_tol < 1))
  {
    invalid(w + ".krylov_tol", "must lie in (0, 1)");
  }
  s.krylov_maxit = get_int(j, "krylov_maxit", w + ".krylov_maxit", s.krylov_maxit);
  if (s.krylov_maxit < 1)
  {
    invalid(w + ".krylov_maxit", "must be at least 1");
  }
  const std::string ls = get_string(j, "linesearch", w + ".linesearch", "backtracking");
  if (ls == "backtracking")
  {
    s.linesearch = LineSearch::Backtracking;
  }
  else if (ls == "none")
  {
    s.linesearch = LineSearch::None;
  }
  else
  {
    invalid(w + ".linesearch", "expected \"backtracking\" or \"none\"");
  }
  const std::string jac = get_string(j, "jacobian", w + ".jacobian", "exact");
  if (jac == "exact")
  {
    s.jacobian = JacobianKind::Exact;
  }
  else if (jac == "fd")
  {
    s.jacobian = JacobianKind::FiniteDifference;
  }
  else
  {
    invalid(w + ".jacobian", "expected \"exact\" or \"fd\"");
  }
  const std::string method = get_string(j, "method", w + ".method", "newton");
  if (method == "newton")
  {
    cfg.method = SolveMethod::Newton;
  }
  else if (method == "fixed_point")
  {
    cfg.method = SolveMethod::FixedPoint;
  }
  else
  {
    invalid(w + ".method", "expected \"newton\" or \"fixed_point\"");
  }
  if (const Json *g = member(j, "initial_guess"))
  {
    const std::string gw = w + ".initial_guess";
    if (!g->is_object())
    {
      invalid(gw, "expected an object");
    }
    reject_unknown(*g, gw, {"kind", "j", "k", "amplitude", "path"});
    const std::string kind = get_string(*g, "kind", gw + ".kind", "zero");
    if (kind == "zero")
    {
      s.initial_guess = InitialGuess::zero();
    }
    else if (kind == "single_mode")
    {
      const int jj = get_int(*g, "j", gw + ".j", 1);
      const int k = get_int(*g, "k", gw + ".k", 0);
      if (!cfg.trunc.contains({jj, k}) || k < 0)
      {
        invalid(gw, fmt::format("mode ({},{}) outside the truncation", jj, k));
      }
      s.initial_guess =
          InitialGuess::single_mode(jj, k, get_number(*g, "amplitude", gw + ".amplitude", 1.0));
    }
    else if (kind == "from_file")
    {
      const std::string p = get_string(*g, "path", gw + ".path", "");
      if (p.empty())
      {
        invalid(gw + ".path", "required for from_file");
      }
      s.initial_guess = InitialGuess::from_state(read_coefficients_field(resolve(p, base), gw + ".path"));
    }
    else
    {
      invalid(gw + ".kind", "expected \"zero\", \"single_mode\" or \"from_file\"");
    }
  }
}

void parse_forcing(const Json &j, RunConfig &cfg, const fs::path &base)
{
  const std::string w = "forcing";
  if (!j.is_object())
  {
    invalid(w, "expected an object");
  }
  const std::string kind = get_string(j, "kind", w + ".kind", "none");
  ForcingSpec &fs_ = cfg.forcing;
  if (kind == "none")
  {
    reject_unknown(j, w, {"kind"});
    fs_.kind = ForcingSpec::Kind::None;
  }
  else if (kind == "manufactured")
  {
    reject_unknown(j, w, {"kind", "u", "v", "eps_ref"});
    fs_.kind = ForcingSpec::Kind::Manufactured;
    SpectralField u(cfg.trunc), v(cfg.trunc);
    if (const Json *m = member(j, "u"))
    {
      u = parse_modes(*m, cfg.trunc, w + ".u");
    }
    if (const Json *m = member(j, "v"))
    {
      v = parse_modes(*m, cfg.trunc, w + ".v");
    }
    fs_.eps_ref = get_number(j, "eps_ref", w + ".eps_ref", cfg.eps);
    fs_.target = FieldPair(std::move(u), std::move(v), cfg.b, fs_.eps_ref);
  }
  else if (kind == "file")
  {
    reject_unknown(j, w, {"kind", "path"});
    fs_.kind = ForcingSpec::Kind::File;
    const std::string p = get_string(j, "path", w + ".path", "");
    if (p.empty())
    {
      invalid(w + ".path", "required for kind \"file\"");
    }
    fs_.path = resolve(p, base);
    fs_.target = read_coefficients_field(fs_.path, w + ".path");
  }
  else
  {
    invalid(w + ".kind", "expected \"none\", \"manufactured\" or \"file\"");
  }
}

void parse_represent(const Json &j, RunConfig &cfg, const fs::path &base)
{
  const std::string w = "represent";
  if (!j.is_object())
  {
    invalid(w, "expected an object");
  }
  reject_unknown(j, w, {"h", "file", "quad_nodes", "w1", "nt_samples", "shifts"});
  RepresentSpec &r = cfg.represent;
  if (j.contains("h") && j.contains("file"))
  {
    invalid(w, "give either \"h\" or \"file\", not both");
  }
  if (const Json *h = member(j, "h"))
  {
    if (!h->is_object())
    {
      invalid(w + ".h", "expected an object with \"terms\"");
    }
    r.h = parse_terms(*h, cfg.trunc, w + ".h");
  }
  if (const Json *p = member(j, "file"))
  {
    if (!p->is_string())
    {
      invalid(w + ".file", "expected a path string");
    }
    r.h = read_coefficients_field(resolve(p->get<std::string>(), base), w + ".file").u;
  }
  r.quad_nodes = get_int(j, "quad_nodes", w + ".quad_nodes", r.quad_nodes);
  if (r.quad_nodes < 1)
  {
    invalid(w + ".quad_nodes", "must be at least 1");
  }
  r.nt_samples = get_int(j, "nt_samples", w + ".nt_samples", r.nt_samples);
  if (r.nt_samples < 1)
  {
    invalid(w + ".nt_samples", "must be at least 1");
  }
  r.w1 = get_bool(j, "w1", w + ".w1", r.w1);
  if (const Json *s = member(j, "shifts"))
  {
    if (!s->is_array())
    {
      invalid(w + ".shifts", "expected an array of numbers");
    }
    for (const auto &x : *s)
    {
      if (!x.is_number() || !(x.get<double>() > 0.0 && x.get<double>() < 0.25))
      {
        invalid(w + ".shifts", "every shift must be a number in (0, 0.25)");
      }
      r.shifts.push_back(x.get<double>());
    }
  }
}

}  // namespace

RunConfig parse_run_config(const Json &j, const fs::path &base_dir)
{
  if (!j.is_object())
  {
    invalid("config", "expected a JSON object");
  }
  reject_unknown(j, "",
                 {"b", "eps", "eps_list", "truncation", "f", "g", "forcing", "solver",
                  "represent", "seed", "out"});
  RunConfig cfg;
  cfg.b = get_number(j, "b", "b", cfg.b);
  if (!(cfg.b > 0.0))
  {
    invalid("b", fmt::format("must be positive (got {})", cfg.b));
  }
  require_admissible_b(cfg.b);
  cfg.eps = get_number(j, "eps", "eps", cfg.eps);
  if (const Json *list = member(j, "eps_list"))
  {
    if (!list->is_array() || list->empty())
    {
      invalid("eps_list", "expected a non-empty array of numbers");
    }
    std::vector<double> eps;
    for (const auto &e : *list)
    {
      if (!e.is_number())
      {
        invalid("eps_list", "expected a non-empty array of numbers");
      }
      eps.push_back(e.get<double>());
    }
    for (std::size_t i = 1; i < eps.size(); ++i)
    {
      if (std::abs(eps[i]) > std::abs(eps[i - 1]))
      {
        invalid("eps_list", "entries must be non-increasing in |eps|");
      }
    }
    cfg.eps_list = std::move(eps);
  }
  if (const Json *t = member(j, "truncation"))
  {
    if (!t->is_object())
    {
      invalid("truncation", "expected {\"J\": .., \"K\": ..}");
    }
    reject_unknown(*t, "truncation", {"J", "K"});
    const int J = get_int(*t, "J", "truncation.J", cfg.trunc.J);
    const int K = get_int(*t, "K", "truncation.K", cfg.trunc.K);
    if (J < 1)
    {
      invalid("truncation.J", "must be at least 1");
    }
    if (K < 0)
    {
      invalid("truncation.K", "must be non-negative");
    }
    cfg.trunc = Truncation{J, K};
  }
  const Json default_nl = {{"kind", "power_law"}, {"p", 3.0}, {"amplitude", "const:1"}};
  cfg.f_descriptor = j.contains("f") ? j["f"] : default_nl;
  cfg.g_descriptor = j.contains("g") ? j["g"] : default_nl;
  cfg.f = parse_nonlinearity(cfg.f_descriptor, "f");
  cfg.g = parse_nonlinearity(cfg.g_descriptor, "g");

  cfg.solver.b = cfg.b;
  cfg.solver.eps = cfg.eps;
  cfg.solver.trunc = cfg.trunc;
  if (const Json *s = member(j, "solver"))
  {
    parse_solver(*s, cfg, base_dir);
  }
  if (const Json *f = member(j, "forcing"))
  {
    parse_forcing(*f, cfg, base_dir);
  }
  if (const Json *r = member(j, "represent"))
  {
    parse_represent(*r, cfg, base_dir);
  }
  if (const Json *s = member(j, "seed"))
  {
    if (!s->is_number_unsigned())
    {
      invalid("seed", "expected a non-negative integer");
    }
    cfg.seed = s->get<std::uint64_t>();
  }
  if (const Json *o = member(j, "out"))
  {
    if (!o->is_string())
    {
      invalid("out", "expected a path string");
    }
    cfg.out_dir = resolve(o->get<std::string>(), base_dir);
  }
  return cfg;
}

RunConfig load_run_config(const fs::path &path)
{
  std::string text;
  try
  {
    text = read_file(path);
  }
  catch (const Error &e)
  {
    invalid("config", e.what());
  }
  Json j;
  try
  {
    j = Json::parse(text);
  }
  catch (const Json::parse_error &e)
  {
    invalid("config", fmt::format("JSON parse error: {}", e.what()));
  }
  return parse_run_config(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

Forcing build_forcing(const RunConfig &cfg)
{
  switch (cfg.forcing.kind)
  {
    case ForcingSpec::Kind::None:
      return Forcing::none();
    case ForcingSpec::Kind::Manufactured:
      return manufactured_forcing(*cfg.forcing.target, *cfg.f, *cfg.g);
    case ForcingSpec::Kind::File:
    {
      Forcing f;
      f.h1 = cfg.forcing.target->u.resized(cfg.trunc);
      f.h2 = cfg.forcing.target->v.resized(cfg.trunc);
      return f;
    }
  }
  return Forcing::none();
}

}  // namespace kgp::cli
