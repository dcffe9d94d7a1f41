// nctorus: batch front end for Yang-Mills computations on the noncommutative torus.
//
//   nctorus validate|ym|make-projection|optimize --config PATH [--out DIR] [--tol X] [--seed N]
//
// The report is printed to stdout and, when an output directory is given
// (--out, or NCTORUS_OUT_DIR), written there as report.json next to any
// command-specific artifacts.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace nctorus;

  CLI::App app{"Yang-Mills functionals on the smooth noncommutative torus"};
  app.require_subcommand(1);

  std::string config_path;
  cli::CommandOptions opts;
  double tol = 0.0;
  std::uint64_t seed = 0;

  for (const char* name : {"validate", "ym", "make-projection", "optimize"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON job config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--seed", seed, "random seed override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--tol")) opts.tol = tol;
  if (sub->count("--seed")) opts.seed = seed;
  if (opts.out_dir.empty())
    if (const char* env = std::getenv("NCTORUS_OUT_DIR")) opts.out_dir = env;

  json config;
  try {
    std::ifstream is(config_path);
    config = json::parse(is);
  } catch (const json::exception& e) {
    std::cerr << "nctorus: cannot parse " << config_path << ": " << e.what() << '\n';
    return cli::kConfigError;
  }

  cli::CommandResult res = cli::run_command(sub->get_name(), config, opts);
  std::cout << res.report.dump(2) << '\n';
  if (res.exit_code != cli::kSuccess && res.report.contains("error"))
    std::cerr << "nctorus: " << res.report["error"].get<std::string>() << '\n';
  return res.exit_code;
}
