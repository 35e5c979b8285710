#pragma once

#include <functional>
#include <string>

#include <CLI11.hpp>

namespace semiflat::cli {

using Runner = std::function<int()>;

/// Flags shared by the subcommands; each subcommand sets its own defaults.
struct CommonFlags {
  std::string out = "out";
  double tol = 1e-10;
  std::string grid;
  int refine = 1;
  unsigned long long seed = 1;
  bool svg = false;
};

enum CommonMask : unsigned {
  kWithTol = 1u,
  kWithGrid = 2u,
  kWithRefine = 4u,
  kWithSeed = 8u,
};
void add_common_flags(CLI::App* sub, CommonFlags& f, unsigned mask);

// Each adds its subcommand and returns the function that runs it once parsed.
Runner add_solve_pde(CLI::App& app);
Runner add_tzitzeica(CLI::App& app);
Runner add_painleve(CLI::App& app);
Runner add_build_metric(CLI::App& app);
Runner add_hessian(CLI::App& app);
Runner add_verify(CLI::App& app);

}  // namespace semiflat::cli
