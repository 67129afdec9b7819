// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_TOOLS_RUN_CONFIG_HPP
#define KGP_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>
#include "kgp/io.hpp"
#include "kgp/solver.hpp"

namespace kgp::cli
{

enum class SolveMethod
{
  Newton,
  FixedPoint
};

struct ForcingSpec
{
  enum class Kind
  {
    None,
    Manufactured,  // forcing built so that target solves the system at eps_ref
    File           // h1, h2 from the u and v columns of a coefficient file
  };
  Kind kind = Kind::None;
  std::optional<FieldPair> target;
  double eps_ref = 0.0;
  std::filesystem::path path;
};

struct RepresentSpec
{
  std::optional<SpectralField> h;
  int quad_nodes = 64;
  bool w1 = true;
  int nt_samples = 64;
  std::vector<double> shifts;
};

struct RunConfig
{
  double b = 1.0;
  double eps = 0.0;
  std::optional<std::vector<double>> eps_list;
  Truncation trunc{8, 8};
  Json f_descriptor;
  Json g_descriptor;
  std::optional<Nonlinearity> f;
  std::optional<Nonlinearity> g;
  ForcingSpec forcing;
  SolveConfig solver;
  SolveMethod method = SolveMethod::Newton;
  RepresentSpec represent;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
};

// Parses and validates; relative paths resolve against base_dir. Every failure is an
// Error of kind InvalidConfig naming the offending field, except an admissibility failure
// of b, which keeps its SpectrumCollision kind.
RunConfig parse_run_config(const Json &j, const std::filesystem::path &base_dir = ".");
RunConfig load_run_config(const std::filesystem::path &path);

// Forcing for the configured truncation.
Forcing build_forcing(const RunConfig &cfg);

}  // namespace kgp::cli

#endif  // KGP_TOOLS_RUN_CONFIG_HPP
