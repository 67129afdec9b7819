// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_TOOLS_COMMANDS_HPP
#define KGP_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace kgp::cli
{

// Exit codes: 0 success, 1 numerical failure, 2 configuration error.
constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct CommandOptions
{
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // overrides the config's "out"
  std::optional<std::uint64_t> seed;         // overrides the config's "seed"
};

// Hypothesis checks for f and g plus spectral validation; writes check.json.
int cmd_check(const CommandOptions &opt, std::ostream &log);
// Writes solution.csv and report.json.
int cmd_solve(const CommandOptions &opt, std::ostream &log);
// Continuation over eps_list; writes sweep.csv, solution.csv (last stage) and report.json.
int cmd_sweep(const CommandOptions &opt, std::ostream &log);
// Writes range_condition.csv, profile_p.csv, w1.csv (when requested and in range),
// modulus.csv (when shifts are given) and represent.json.
int cmd_represent(const CommandOptions &opt, std::ostream &log);
// Writes spectrum.csv and prints the eta / kappa / kernel-count summary line.
int cmd_spectrum(const CommandOptions &opt, std::ostream &log);

}  // namespace kgp::cli

#endif  // KGP_TOOLS_COMMANDS_HPP
