#pragma once

#include <filesystem>

#include "pointflow/diagnostics.hpp"

namespace pointflow::io {

/// 17-significant-digit formatting; round-trips every double exactly and
/// keeps output bytes deterministic.
std::string format_double(double v);

/// Header `t,particle_id,x,y,gamma_re,gamma_im`, one row per particle per
/// retained sample. The stride keeps every k-th sample plus the final one.
std::string trajectory_csv(const Trajectory& traj, std::size_t sample_stride = 1);

/// Header `t,kind,participants,x,y`; participant indices joined by ';'.
std::string events_csv(const std::vector<Event>& events);

std::string report_json(const InvariantReport& report, double t_start, double t_end,
                        std::size_t sample_count);

/// Polyline plot of the particle paths, one path element per particle,
/// viewBox fitted to the data with a 5% margin.
std::string trajectory_svg(const Trajectory& traj);

/// Inverse of trajectory_csv. Throws std::invalid_argument on a malformed
/// header, malformed rows, or an empty table.
Trajectory parse_trajectory_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace pointflow::io
