// SPDX-License-Identifier: Apache-2.0

#include "kgp/io.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <fmt/format.h>
#include "kgp/error.hpp"

namespace kgp
{

namespace fs = std::filesystem;

namespace
{

std::vector<std::string> split_on(const std::string &s, char sep)
{
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
  {
    parts.push_back(cur);
  }
  if (!s.empty() && s.back() == sep)
  {
    parts.emplace_back();
  }
  return parts;
}

double parse_number(const std::string &s, const std::string &what)
{
  std::size_t used = 0;
  double v = 0.0;
  try
  {
    v = std::stod(s, &used);
  }
  catch (const std::exception &)
  {
    throw Error(ErrorKind::InvalidConfig, fmt::format("{}: '{}' is not a number", what, s));
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used])))
  {
    ++used;
  }
  if (used != s.size())
  {
    throw Error(ErrorKind::InvalidConfig, fmt::format("{}: '{}' is not a number", what, s));
  }
  return v;
}

int parse_int(const std::string &s, const std::string &what)
{
  const double v = parse_number(s, what);
  if (v != std::floor(v))
  {
    throw Error(ErrorKind::InvalidConfig, fmt::format("{}: '{}' is not an integer", what, s));
  }
  return static_cast<int>(v);
}

Json number_or_null(double v)
{
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

std::string_view csv_line_view(std::string &line)
{
  if (!line.empty() && line.back() == '\r')
  {
    line.pop_back();
  }
  return line;
}

}  // namespace

std::string format_double(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  return fmt::format("{:.17g}", v);
}

void write_file_atomic(const fs::path &path, const std::string &content)
{
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw Error(ErrorKind::Io, fmt::format("cannot open {} for writing", tmp.string()));
    }
    out << content;
    if (!out.flush())
    {
      throw Error(ErrorKind::Io, fmt::format("write to {} failed", tmp.string()));
    }
  }
  fs::rename(tmp, path, ec);
  if (ec)
  {
    throw Error(ErrorKind::Io, fmt::format("cannot move {} into place: {}", path.string(),
                                           ec.message()));
  }
}

std::string read_file(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorKind::Io, fmt::format("cannot open {}", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string coefficients_csv(const FieldPair &state)
{
  const Truncation &tr = state.truncation();
  std::string out = fmt::format("# kg-periodic coeffs v1, J={}, K={}, b={}, eps={}\n", tr.J, tr.K,
                                format_double(state.b), format_double(state.eps));
  out += "j,k,re_u,im_u,re_v,im_v\n";
  for (int j = 1; j <= tr.J; ++j)
  {
    for (int k = 0; k <= tr.K; ++k)
    {
      const Complex u = state.u.coeff(j, k);
      const Complex v = state.v.coeff(j, k);
      out += fmt::format("{},{},{},{},{},{}\n", j, k, format_double(u.real()),
                         format_double(u.imag()), format_double(v.real()),
                         format_double(v.imag()));
    }
  }
  return out;
}

FieldPair parse_coefficients_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
  {
    throw Error(ErrorKind::InvalidConfig, "coefficient file is empty");
  }
  static const std::regex header(
      R"(#\s*kg-periodic coeffs v1,\s*J=(\d+),\s*K=(\d+),\s*b=([^,\s]+),\s*eps=([^,\s]+)\s*)");
  std::smatch m;
  const std::string first(csv_line_view(line));
  if (!std::regex_match(first, m, header))
  {
    throw Error(ErrorKind::InvalidConfig, "coefficient file: unrecognized header line");
  }
  const Truncation tr{std::stoi(m[1]), std::stoi(m[2])};
  const double b = parse_number(m[3], "coefficient file header b");
  const double eps = parse_number(m[4], "coefficient file header eps");
  SpectralField u(tr), v(tr);
  int line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    const std::string row(csv_line_view(line));
    if (row.empty() || row[0] == '#' || row.rfind("j,", 0) == 0)
    {
      continue;
    }
    const auto cells = split_on(row, ',');
    const std::string where = fmt::format("coefficient file line {}", line_no);
    if (cells.size() != 6)
    {
      throw Error(ErrorKind::InvalidConfig, where + ": expected 6 columns");
    }
    const int j = parse_int(cells[0], where);
    const int k = parse_int(cells[1], where);
    if (j < 1 || j > tr.J || k < 0 || k > tr.K)
    {
      throw Error(ErrorKind::TruncationMismatch,
                  fmt::format("{}: mode ({},{}) outside J={}, K={}", where, j, k, tr.J, tr.K));
    }
    const Complex cu(parse_number(cells[2], where), parse_number(cells[3], where));
    const Complex cv(parse_number(cells[4], where), parse_number(cells[5], where));
    if (k == 0 && (cu.imag() != 0.0 || cv.imag() != 0.0))
    {
      throw Error(ErrorKind::InvalidConfig, where + ": k = 0 coefficients must be real");
    }
    u.set(j, k, cu);
    v.set(j, k, cv);
  }
  return FieldPair(std::move(u), std::move(v), b, eps);
}

void write_coefficients(const fs::path &path, const FieldPair &state)
{
  write_file_atomic(path, coefficients_csv(state));
}

FieldPair read_coefficients(const fs::path &path)
{
  return parse_coefficients_csv(read_file(path));
}

Amplitude parse_amplitude(const std::string &descriptor)
{
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos)
  {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("amplitude '{}': expected const:<a> or cos_t:<base>,<swing>",
                            descriptor));
  }
  const std::string kind = descriptor.substr(0, colon);
  const auto args = split_on(descriptor.substr(colon + 1), ',');
  const std::string what = fmt::format("amplitude '{}'", descriptor);
  if (kind == "const" && args.size() == 1)
  {
    return Amplitude::constant(parse_number(args[0], what));
  }
  if (kind == "cos_t" && args.size() == 2)
  {
    return Amplitude::cos_t(parse_number(args[0], what), parse_number(args[1], what));
  }
  throw Error(ErrorKind::InvalidConfig,
              fmt::format("{}: expected const:<a> or cos_t:<base>,<swing>", what));
}

Nonlinearity parse_nonlinearity(const Json &j, const std::string &field)
{
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
  {
    throw Error(ErrorKind::InvalidConfig, field + ": expected an object with a \"kind\" string");
  }
  auto number = [&](const char *key) {
    if (!j.contains(key) || !j[key].is_number())
    {
      throw Error(ErrorKind::InvalidConfig, fmt::format("{}.{}: expected a number", field, key));
    }
    return j[key].get<double>();
  };
  auto checked_p = [&] {
    const double p = number("p");
    if (!(p > 1.0))
    {
      throw Error(ErrorKind::InvalidConfig,
                  fmt::format("{}.p: growth exponent must exceed 1 (got {})", field, p));
    }
    return p;
  };
  const std::string kind = j["kind"].get<std::string>();
  try
  {
    if (kind == "power_law")
    {
      const double p = checked_p();
      std::string amp = "const:1";
      if (j.contains("amplitude"))
      {
        if (!j["amplitude"].is_string())
        {
          throw Error(ErrorKind::InvalidConfig, field + ".amplitude: expected a string");
        }
        amp = j["amplitude"].get<std::string>();
      }
      return Nonlinearity::power_law(p, parse_amplitude(amp));
    }
    if (kind == "polynomial")
    {
      if (!j.contains("coeffs") || !j["coeffs"].is_array())
      {
        throw Error(ErrorKind::InvalidConfig, field + ".coeffs: expected an array of numbers");
      }
      std::vector<double> coeffs;
      for (const auto &c : j["coeffs"])
      {
        if (!c.is_number())
        {
          throw Error(ErrorKind::InvalidConfig, field + ".coeffs: expected an array of numbers");
        }
        coeffs.push_back(c.get<double>());
      }
      const double p = checked_p();
      const double c0 = j.contains("c0") ? number("c0") : 1.0;
      return Nonlinearity::polynomial(std::move(coeffs), p, c0);
    }
    if (kind == "zero")
    {
      return Nonlinearity::zero();
    }
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::InvalidConfig)
    {
      throw;
    }
    throw Error(ErrorKind::InvalidConfig, fmt::format("{}: {}", field, e.what()));
  }
  throw Error(ErrorKind::InvalidConfig,
              fmt::format("{}.kind: unknown nonlinearity '{}' (power_law, polynomial, zero)",
                          field, kind));
}

Json to_json(const EnergyBreakdown &e)
{
  return Json{{"total", e.total},
              {"total_direct", e.total_direct},
              {"quad_u_plus", e.quad_u_plus},
              {"quad_u_minus", e.quad_u_minus},
              {"quad_y", e.quad_y},
              {"quad_v_plus", e.quad_v_plus},
              {"quad_v_minus", e.quad_v_minus},
              {"quad_z", e.quad_z},
              {"coupling", e.coupling},
              {"potential_f", e.potential_f},
              {"potential_g", e.potential_g},
              {"forcing", e.forcing}};
}

Json to_json(const ResidualNorms &r)
{
  return Json{{"l2", r.l2}, {"dual_H", r.dual_H}};
}

Json to_json(const Decomposition &d)
{
  return Json{{"u_plus_H", d.u_plus_H}, {"u_minus_H", d.u_minus_H}, {"v_plus_H", d.v_plus_H},
              {"v_minus_H", d.v_minus_H}, {"y_L2", d.y_L2},         {"z_L2", d.z_L2},
              {"E_norm", d.E_norm}};
}

Json to_json(const HypothesisEntry &h)
{
  Json j{{"name", h.name},
         {"status", std::string(to_string(h.status))},
         {"worst", number_or_null(h.worst)},
         {"samples", h.samples},
         {"note", h.note}};
  if (h.witness)
  {
    j["witness"] = Json{{"t", h.witness->t},
                        {"x", h.witness->x},
                        {"xi", h.witness->xi},
                        {"xi2", h.witness->xi2},
                        {"magnitude", number_or_null(h.witness->magnitude)}};
  }
  return j;
}

Json to_json(const GrowthFit &g)
{
  return Json{{"status", std::string(to_string(g.status))},
              {"degenerate", g.degenerate},
              {"c1", number_or_null(g.c1)},
              {"c2", number_or_null(g.c2)},
              {"c3", number_or_null(g.c3)},
              {"r_bar", number_or_null(g.r_bar)},
              {"nu", g.nu},
              {"C_nu", number_or_null(g.C_nu)},
              {"note", g.note}};
}

Json to_json(const HypothesisReport &r)
{
  return Json{{"nonlinearity", r.nonlinearity}, {"h1", to_json(r.h1)},         {"h2", to_json(r.h2)},
              {"h3", to_json(r.h3)},            {"h4", to_json(r.h4)},         {"growth", to_json(r.growth)},
              {"all_pass", r.all_pass()}};
}

Json to_json(const SolveReport &r)
{
  Json history = Json::array();
  for (double h : r.residual_history)
  {
    history.push_back(number_or_null(h));
  }
  const Truncation &tr = r.state.truncation();
  return Json{{"converged", r.converged},
              {"iterations", r.iterations},
              {"krylov_iterations", r.krylov_iterations},
              {"residual_history", history},
              {"final_residual", to_json(r.final_residual)},
              {"energy", to_json(r.energy)},
              {"decomposition", to_json(r.decomposition)},
              {"nontrivial", r.nontrivial},
              {"coupling_warning", r.coupling_warning},
              {"decoupled", r.decoupled},
              {"failure", r.failure},
              {"b", r.state.b},
              {"eps", r.state.eps},
              {"J", tr.J},
              {"K", tr.K},
              {"u_l2", l2_norm(r.state.u)},
              {"v_l2", l2_norm(r.state.v)}};
}

Json to_json(const LinfReport &r)
{
  return Json{{"norm_u1_inf", r.norm_u1_inf}, {"norm_v1_inf", r.norm_v1_inf},
              {"norm_y_inf", r.norm_y_inf},   {"norm_z_inf", r.norm_z_inf},
              {"h1_l1", r.h1_l1},             {"h2_l1", r.h2_l1},
              {"h1_inf", r.h1_inf},           {"h2_inf", r.h2_inf},
              {"ratio_u", r.ratio_u},         {"ratio_v", r.ratio_v},
              {"lip_u1", r.lip_u1},           {"lip_v1", r.lip_v1},
              {"nt", r.nt},                   {"nx", r.nx}};
}

std::string sweep_csv(const SweepReport &sweep)
{
  std::string out = "eps,err_u_l2,err_v_l2,phi,res_dual\n";
  for (const auto &r : sweep.rows)
  {
    out += fmt::format("{},{},{},{},{}\n", format_double(r.eps), format_double(r.err_u_l2),
                       format_double(r.err_v_l2), format_double(r.phi),
                       format_double(r.res_dual));
  }
  return out;
}

std::string profile_csv(const KernelProfile &p)
{
  std::string out = "k,re_p,im_p\n";
  for (int k = 1; k <= p.K(); ++k)
  {
    out += fmt::format("{},{},{}\n", k, format_double(p.coeff(k).real()),
                       format_double(p.coeff(k).imag()));
  }
  return out;
}

KernelProfile parse_profile_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  KernelProfile p;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    const std::string row(csv_line_view(line));
    if (row.empty() || row[0] == '#' || row.rfind("k,", 0) == 0)
    {
      continue;
    }
    const auto cells = split_on(row, ',');
    const std::string where = fmt::format("profile line {}", line_no);
    if (cells.size() != 3)
    {
      throw Error(ErrorKind::InvalidConfig, where + ": expected 3 columns");
    }
    const int k = parse_int(cells[0], where);
    if (k < 1)
    {
      throw Error(ErrorKind::InvalidConfig, where + ": k must be at least 1");
    }
    p.set(k, Complex(parse_number(cells[1], where), parse_number(cells[2], where)));
  }
  return p;
}

std::string modulus_csv(const ContinuityReport &report)
{
  std::string out = "h,sup_diff\n";
  for (const auto &r : report.rows)
  {
    out += fmt::format("{},{}\n", format_double(r.h), format_double(r.sup_diff));
  }
  return out;
}

std::string range_condition_csv(const RangeCondition &rc)
{
  std::string out = "t,V\n";
  for (std::size_t i = 0; i < rc.t.size(); ++i)
  {
    out += fmt::format("{},{}\n", format_double(rc.t[i]), format_double(rc.V[i]));
  }
  return out;
}

std::string grid_csv(const GridField &g)
{
  std::string out = "t,x,value\n";
  for (int i = 0; i < g.nt; ++i)
  {
    for (int m = 0; m < g.nx; ++m)
    {
      out += fmt::format("{},{},{}\n", format_double(g.t(i)), format_double(g.x(m)),
                         format_double(g(i, m)));
    }
  }
  return out;
}

std::string spectrum_csv(const Truncation &trunc, double b)
{
  std::string out = "j,k,lambda,class\n";
  for (const ModeIndex &m : trunc.modes())
  {
    out += fmt::format("{},{},{},{}\n", m.j, m.k, eigenvalue(m), to_string(classify(m, b)));
  }
  return out;
}

}  // namespace kgp
