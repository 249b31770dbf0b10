#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Partition modulus, envelope and counterexample toolkit"};
  app.require_subcommand(1);

  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  for (const char* name : {"omega-eta", "envelope", "construct", "reduce", "pipeline"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : funnel::cli::kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return funnel::cli::run_command(name, config, out, seed).exit_code;
}
