// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <string>
#include <CLI11.hpp>
#include "commands.hpp"

int main(int argc, char **argv)
{
  using namespace kgp::cli;
  CLI::App app{"Time-periodic solutions of coupled Klein-Gordon systems"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;

  struct Entry
  {
    const char *name;
    const char *help;
    int (*run)(const CommandOptions &, std::ostream &);
  };
  const Entry entries[] = {
      {"check", "Check the nonlinearity hypotheses and spectral data", cmd_check},
      {"solve", "Solve for a time-periodic state", cmd_solve},
      {"sweep", "Continue a solution in eps down to eps = 0", cmd_sweep},
      {"represent", "Range condition, w1 representation and kernel profile", cmd_represent},
      {"spectrum", "Tabulate the modes of the wave operator", cmd_spectrum},
  };
  std::vector<std::pair<CLI::App *, const Entry *>> subs;
  for (const Entry &e : entries)
  {
    CLI::App *sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config, "JSON configuration file")->required();
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Seed for randomized sampling");
    subs.emplace_back(sub, &e);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  opt.config = config;
  for (const auto &[sub, entry] : subs)
  {
    if (sub->parsed())
    {
      if (!out.empty())
      {
        opt.out = out;
      }
      if (sub->count("--seed") > 0)
      {
        opt.seed = seed;
      }
      return entry->run(opt, std::cout);
    }
  }
  return kExitConfig;
}
