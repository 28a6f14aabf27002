#pragma once

#include <iosfwd>

namespace scenedirector::cli {

/// Process exit statuses. Each pipeline stage fails with its own code.
enum ExitCode : int {
  ok = 0,
  internal = 1,
  usage = 2,
  io_error = 3,
  scene_error = 4,
  config_error = 5,
  provider_error = 6,
  plan_parse_error = 7,
  plan_invalid = 8,
  simulation_error = 9,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scenedirector::cli
