#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace qp2::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitPole = 2,
  kExitFit = 3,
  kExitNoNearPeriod = 4,
};

// Each command writes its main output to config.out (or `out`) and
// diagnostics to `err`.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_approx(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_average(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_critical(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command line (without argv[0]): subcommand plus flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qp2::cli
