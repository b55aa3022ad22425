#include "pointflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pointflow::io {

namespace {

const char* kTrajectoryHeader = "t,particle_id,x,y,gamma_re,gamma_im";
const char* kEventsHeader = "t,kind,participants,x,y";

std::string event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::collision:
      return "collision";
    case EventKind::merge:
      return "merge";
    case EventKind::termination:
      return "termination";
  }
  return "unknown";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::invalid_argument("malformed number: '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw std::invalid_argument("malformed integer: '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj, std::size_t sample_stride) {
  if (sample_stride == 0) throw std::invalid_argument("sample stride must be positive");
  std::string out = kTrajectoryHeader;
  out.push_back('\n');
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const bool retained =
        i % sample_stride == 0 || i + 1 == traj.samples.size();
    if (!retained) continue;
    const SystemState& s = traj.samples[i];
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto& p = s.particles[k];
      out += format_double(s.time);
      out.push_back(',');
      out += std::to_string(k);
      out.push_back(',');
      out += format_double(p.position.real());
      out.push_back(',');
      out += format_double(p.position.imag());
      out.push_back(',');
      out += format_double(p.intensity.value().real());
      out.push_back(',');
      out += format_double(p.intensity.value().imag());
      out.push_back('\n');
    }
  }
  return out;
}

std::string events_csv(const std::vector<Event>& events) {
  std::string out = kEventsHeader;
  out.push_back('\n');
  for (const auto& evt : events) {
    out += format_double(evt.time);
    out.push_back(',');
    out += event_kind_name(evt.kind);
    out.push_back(',');
    for (std::size_t i = 0; i < evt.participants.size(); ++i) {
      if (i > 0) out.push_back(';');
      out += std::to_string(evt.participants[i]);
    }
    out.push_back(',');
    out += format_double(evt.location.real());
    out.push_back(',');
    out += format_double(evt.location.imag());
    out.push_back('\n');
  }
  return out;
}

std::string report_json(const InvariantReport& report, double t_start, double t_end,
                        std::size_t sample_count) {
  nlohmann::ordered_json j;
  j["span"] = {{"t_start", t_start}, {"t_end", t_end}, {"samples", sample_count}};
  j["scope"] = report.scope;
  j["z_drift"] = report.z_drift;
  j["max_abs_A"] = report.max_abs_a;
  j["idot_slope"] = report.idot_slope;
  j["idot_residual"] = report.idot_residual;
  j["idot_predicted"] = report.idot_predicted;
  j["idot_applicable"] = report.idot_applicable;
  j["virial"] = report.virial_weights;
  j["virial_intensity"] = {{"re", report.virial_intensity.real()},
                           {"im", report.virial_intensity.imag()}};
  j["H_start"] = report.h_start;
  j["H_end"] = report.h_end;
  j["G_start"] = report.g_start;
  j["G_end"] = report.g_end;
  nlohmann::ordered_json winding = nlohmann::ordered_json::array();
  for (const auto& pw : report.winding) {
    winding.push_back({{"pair", {pw.first, pw.second}},
                       {"delta_theta", pw.delta_theta}});
  }
  j["winding"] = std::move(winding);
  j["g_drift"] = report.g_drift;
  j["conjecture_holds"] = report.conjecture_holds;
  return j.dump(2) + "\n";
}

std::string trajectory_svg(const Trajectory& traj) {
  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#bcbd22", "#17becf"};
  std::size_t max_particles = 0;
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool first = true;
  for (const auto& s : traj.samples) {
    max_particles = std::max(max_particles, s.size());
    for (const auto& p : s.particles) {
      const double x = p.position.real();
      const double y = -p.position.imag();  // svg y grows downward
      if (first) {
        min_x = max_x = x;
        min_y = max_y = y;
        first = false;
      } else {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  double width = max_x - min_x;
  double height = max_y - min_y;
  const double pad_x = width > 0.0 ? 0.05 * width : 0.5;
  const double pad_y = height > 0.0 ? 0.05 * height : 0.5;
  min_x -= pad_x;
  min_y -= pad_y;
  width += 2.0 * pad_x;
  height += 2.0 * pad_y;
  const double stroke = 0.008 * std::max(width, height);

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.8g %.8g %.8g %.8g\">\n",
                min_x, min_y, width, height);
  out += buf;
  for (std::size_t k = 0; k < max_particles; ++k) {
    std::string d;
    bool started = false;
    for (const auto& s : traj.samples) {
      if (k >= s.size()) continue;
      std::snprintf(buf, sizeof(buf), "%s%.8g %.8g", started ? " L " : "M ",
                    s.particles[k].position.real(), -s.particles[k].position.imag());
      d += buf;
      started = true;
    }
    if (!started) continue;
    std::snprintf(buf, sizeof(buf),
                  "  <path fill=\"none\" stroke=\"%s\" stroke-width=\"%.8g\" d=\"",
                  kPalette[k % 10], stroke);
    out += buf;
    out += d;
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

Trajectory parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::invalid_argument("trajectory file: missing or malformed header");
  }

  Trajectory traj;
  SystemState current;
  bool have_current = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw std::invalid_argument("trajectory file: bad row at line " +
                                  std::to_string(line_no));
    }
    const double t = parse_double(fields[0]);
    const long id = parse_long(fields[1]);
    const Complex pos{parse_double(fields[2]), parse_double(fields[3])};
    const Complex gamma{parse_double(fields[4]), parse_double(fields[5])};

    if (!have_current || t != current.time) {
      if (have_current) traj.samples.push_back(std::move(current));
      current = SystemState{};
      current.time = t;
      have_current = true;
    }
    if (id != static_cast<long>(current.size())) {
      throw std::invalid_argument("trajectory file: particle ids not sequential at line " +
                                  std::to_string(line_no));
    }
    current.particles.push_back(Particle{pos, Intensity(gamma)});
  }
  if (have_current) traj.samples.push_back(std::move(current));
  if (traj.samples.empty()) {
    throw std::invalid_argument("trajectory file: no samples");
  }
  return traj;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

}  // namespace pointflow::io
