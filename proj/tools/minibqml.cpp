// Command-line entry point: `minibqml run <script.sql>` and `minibqml repl`.
#include "minibqml/cli/session.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <unistd.h>

using namespace minibqml;

int main(int argc, char **argv) {
  CLI::App app{"minibqml: SQL analytics engine with in-database model training"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  std::string format = "table";
  std::string model_dir;
  std::string script;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--seed", seed, "Default seed for models without a seed option");
    cmd->add_option("--format", format, "Result format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--model-dir", model_dir,
                    "Directory for model files (MINIBQML_MODEL_DIR overrides)");
  };

  auto *run = app.add_subcommand("run", "Execute a ;-separated SQL script");
  run->add_option("script", script, "Path to the script")->required();
  add_common(run);
  auto *repl = app.add_subcommand("repl", "Interactive session");
  add_common(repl);

  CLI11_PARSE(app, argc, argv);

  cli::SessionConfig config;
  config.seed = seed;
  config.output_format = *cli::parse_output_format(format);
  if (const char *env = std::getenv("MINIBQML_MODEL_DIR"); env && *env)
    config.model_dir = env;
  else if (!model_dir.empty())
    config.model_dir = model_dir;

  if (*run)
    return cli::run_script(script, config, std::cout, std::cerr);

  cli::Repl session(config, std::cout, std::cerr);
  session.run(std::cin, isatty(STDIN_FILENO) != 0);
  return 0;
}
