#pragma once

#include <filesystem>

#include "pointflow/blowup.hpp"

namespace pointflow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlowupConfig {
  bool enabled = false;
  std::size_t base_particle = 0;  // defaults to the last particle at parse time
  BlowupSelection selection;      // empty = desingularize every coordinate
  double s_end = 10.0;
};

struct OutputConfig {
  std::filesystem::path trajectory_path = "trajectory.csv";
  std::filesystem::path events_path = "events.csv";
  std::filesystem::path report_path = "report.json";
  std::filesystem::path plot_path;  // empty = no plot
};

struct RunConfig {
  SystemState initial;  // at time 0
  double t_end = 0.0;
  IntegratorOptions integrator;
  BlowupConfig blowup;
  OutputConfig outputs;
  std::size_t sample_stride = 1;
};

/// Parses and validates the JSON run configuration. Unknown keys are errors.
RunConfig parse_run_config(const std::string& json_text);

/// Normalized echo with every key explicit; re-parses to an identical config.
std::string print_run_config(const RunConfig& config);

}  // namespace pointflow
