#pragma once

#include <string>

#include "bhflow/io.hpp"

namespace bhflow {

/// Everything a CLI task run needs, after flag and config-file merging
/// (explicit flags win over config values).
struct RunConfig {
  std::string task;
  std::string mesh_a;
  std::string mesh_b;
  std::string param_a;
  std::string param_b;
  std::string landmarks;
  std::string field_a;
  std::string field_b;
  std::string bc;
  std::string config_path;
  std::string out_dir;
  EnergyParams params;
  FlowSchedule schedule;
  double mask_radius = -1.0;
  long seed = 0;
};

/// Drives one task end to end. Exit status: 0 success, 2 bad input or
/// configuration, 3 numerical failure (fold, failed step, lost admissibility).
/// Failures print `error_code=<name>: <message>` on standard error.
int run_cli(int argc, const char* const* argv);

}  // namespace bhflow
