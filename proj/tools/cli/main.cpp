#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "semiflat/error.hpp"

namespace semiflat::cli {

void add_common_flags(CLI::App* sub, CommonFlags& f, unsigned mask) {
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  if (mask & kWithTol) sub->add_option("--tol", f.tol, "tolerance")->capture_default_str();
  if (mask & kWithGrid) sub->add_option("--grid", f.grid, "grid size NX,NY");
  if (mask & kWithRefine) sub->add_option("--refine", f.refine, "number of grids, each halving h")->capture_default_str();
  if (mask & kWithSeed) sub->add_option("--seed", f.seed, "seed of the random sample points")->capture_default_str();
  sub->add_flag("--svg", f.svg, "also write SVG figures");
}

}  // namespace semiflat::cli

namespace {

// CLI11 reads config files at the top level only, so move "--config FILE"
// in front of the subcommand name.
std::vector<std::string> hoist_config(int argc, char** argv) {
  std::vector<std::string> rest, config;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--config" && k + 1 < argc) {
      config = {a, argv[++k]};
    } else if (a.rfind("--config=", 0) == 0) {
      config = {a};
    } else {
      rest.push_back(a);
    }
  }
  config.insert(config.end(), rest.begin(), rest.end());
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = semiflat::cli;
  CLI::App app{"semiflat: affine spheres, Hitchin data and semi-flat Calabi-Yau metrics"};
  app.footer("Config files are INI: put keys under a section named after the subcommand,\n"
             "e.g. [solve-pde] then grid = \"33,33\". Flags on the command line win.\n\n" +
             cli::exit_code_help());
  app.set_config("--config", "", "INI file with per-subcommand sections");
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, cli::Runner>> commands;
  auto add = [&](cli::Runner (*f)(CLI::App&)) {
    cli::Runner r = f(app);
    commands.emplace_back(app.get_subcommands({}).back(), std::move(r));
  };
  add(cli::add_solve_pde);
  add(cli::add_tzitzeica);
  add(cli::add_painleve);
  add(cli::add_build_metric);
  add(cli::add_hessian);
  add(cli::add_verify);
  for (auto& [sub, run] : commands) sub->footer(cli::exit_code_help());

  auto args = hoist_config(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::FileError& e) {
    std::cerr << e.what() << "\n";
    return cli::kIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  try {
    for (auto& [sub, run] : commands)
      if (sub->parsed()) return run();
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const semiflat::Error& e) {
    std::cerr << e.what() << "\n";
    return cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kDomain;
  }
  return cli::kUsage;
}
