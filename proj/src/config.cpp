#include "pointflow/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace pointflow {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

double number_at(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  if (!obj.at(key).is_number()) {
    throw ConfigError(std::string("key '") + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

SystemState parse_particles(const json& j) {
  if (!j.contains("particles") || !j.at("particles").is_array()) {
    throw ConfigError("'particles' must be an array");
  }
  const auto& arr = j.at("particles");
  if (arr.empty()) throw ConfigError("at least one particle is required");

  SystemState state;
  state.time = 0.0;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& p = arr[k];
    if (!p.is_object()) throw ConfigError("particle " + std::to_string(k) + ": not an object");
    check_keys(p, ("particle " + std::to_string(k)).c_str(),
               {"x", "y", "gamma_re", "gamma_im"});
    const Complex pos{number_at(p, "x"), number_at(p, "y")};
    const Complex gamma{number_at(p, "gamma_re"), number_at(p, "gamma_im")};
    if (gamma == Complex{0.0, 0.0}) {
      throw ConfigError("particle " + std::to_string(k) + ": gamma must be nonzero");
    }
    state.particles.push_back(Particle{pos, Intensity(gamma)});
  }
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (std::size_t j2 = i + 1; j2 < state.size(); ++j2) {
      if (std::abs(state.particles[i].position - state.particles[j2].position) <
          kMinSeparation) {
        throw ConfigError("particles " + std::to_string(i) + " and " +
                          std::to_string(j2) + " coincide");
      }
    }
  }
  return state;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j, "config",
             {"particles", "t_end", "time_direction", "integrator", "blowup",
              "outputs", "sample_stride"});

  RunConfig cfg;
  cfg.initial = parse_particles(j);

  cfg.t_end = number_at(j, "t_end");
  if (cfg.t_end == 0.0) throw ConfigError("t_end must be nonzero");

  std::string direction = "forward";
  if (j.contains("time_direction")) {
    if (!j.at("time_direction").is_string()) {
      throw ConfigError("'time_direction' must be \"forward\" or \"backward\"");
    }
    direction = j.at("time_direction").get<std::string>();
  }
  if (direction == "forward") {
    cfg.integrator.direction = TimeDirection::forward;
    if (cfg.t_end < 0.0) throw ConfigError("forward runs need t_end > 0");
  } else if (direction == "backward") {
    cfg.integrator.direction = TimeDirection::backward;
    if (cfg.t_end > 0.0) throw ConfigError("backward runs need t_end < 0");
  } else {
    throw ConfigError("'time_direction' must be \"forward\" or \"backward\"");
  }

  if (j.contains("integrator")) {
    const auto& ji = j.at("integrator");
    if (!ji.is_object()) throw ConfigError("'integrator' must be an object");
    check_keys(ji, "integrator",
               {"initial_step", "abs_tol", "rel_tol", "collision_radius",
                "step_floor", "max_steps"});
    if (ji.contains("initial_step")) cfg.integrator.initial_step = number_at(ji, "initial_step");
    if (ji.contains("abs_tol")) cfg.integrator.abs_tol = number_at(ji, "abs_tol");
    if (ji.contains("rel_tol")) cfg.integrator.rel_tol = number_at(ji, "rel_tol");
    if (ji.contains("collision_radius")) {
      cfg.integrator.collision_radius = number_at(ji, "collision_radius");
    }
    if (ji.contains("step_floor")) cfg.integrator.step_floor = number_at(ji, "step_floor");
    if (ji.contains("max_steps")) {
      cfg.integrator.max_steps = static_cast<long>(number_at(ji, "max_steps"));
    }
  }
  try {
    cfg.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }

  cfg.blowup.base_particle = cfg.initial.size() - 1;
  if (j.contains("blowup")) {
    const auto& jb = j.at("blowup");
    if (!jb.is_object()) throw ConfigError("'blowup' must be an object");
    check_keys(jb, "blowup", {"enabled", "base_particle", "selection", "s_end"});
    if (jb.contains("enabled")) {
      if (!jb.at("enabled").is_boolean()) throw ConfigError("'blowup.enabled' must be a bool");
      cfg.blowup.enabled = jb.at("enabled").get<bool>();
    }
    if (jb.contains("base_particle")) {
      const double b = number_at(jb, "base_particle");
      if (b < 0 || b != std::floor(b) || b >= static_cast<double>(cfg.initial.size())) {
        throw ConfigError("'blowup.base_particle' out of range");
      }
      cfg.blowup.base_particle = static_cast<std::size_t>(b);
    }
    if (jb.contains("selection")) {
      if (!jb.at("selection").is_array()) {
        throw ConfigError("'blowup.selection' must be an array of indices");
      }
      for (const auto& item : jb.at("selection")) {
        if (!item.is_number_integer()) {
          throw ConfigError("'blowup.selection' must contain integers");
        }
        const long v = item.get<long>();
        if (v < 0 || v + 1 >= static_cast<long>(cfg.initial.size())) {
          throw ConfigError("'blowup.selection' index out of range");
        }
        cfg.blowup.selection.push_back(static_cast<std::size_t>(v));
      }
    }
    if (jb.contains("s_end")) {
      cfg.blowup.s_end = number_at(jb, "s_end");
      if (!(cfg.blowup.s_end > 0.0)) throw ConfigError("'blowup.s_end' must be positive");
    }
  }

  if (j.contains("outputs")) {
    const auto& jo = j.at("outputs");
    if (!jo.is_object()) throw ConfigError("'outputs' must be an object");
    check_keys(jo, "outputs",
               {"trajectory_path", "events_path", "report_path", "plot_path"});
    auto path_at = [&](const char* key, std::filesystem::path& dest) {
      if (!jo.contains(key)) return;
      if (!jo.at(key).is_string()) {
        throw ConfigError(std::string("'outputs.") + key + "' must be a string");
      }
      dest = jo.at(key).get<std::string>();
    };
    path_at("trajectory_path", cfg.outputs.trajectory_path);
    path_at("events_path", cfg.outputs.events_path);
    path_at("report_path", cfg.outputs.report_path);
    path_at("plot_path", cfg.outputs.plot_path);
  }
  {
    std::set<std::string> seen;
    for (const auto& p :
         {cfg.outputs.trajectory_path, cfg.outputs.events_path, cfg.outputs.report_path,
          cfg.outputs.plot_path}) {
      if (p.empty()) continue;
      if (!seen.insert(p.string()).second) {
        throw ConfigError("output paths must be distinct: '" + p.string() + "'");
      }
    }
  }

  if (j.contains("sample_stride")) {
    const double s = number_at(j, "sample_stride");
    if (s < 1 || s != std::floor(s)) {
      throw ConfigError("'sample_stride' must be a positive integer");
    }
    cfg.sample_stride = static_cast<std::size_t>(s);
  }
  return cfg;
}

std::string print_run_config(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["particles"] = nlohmann::ordered_json::array();
  for (const auto& p : config.initial.particles) {
    j["particles"].push_back({{"x", p.position.real()},
                              {"y", p.position.imag()},
                              {"gamma_re", p.intensity.value().real()},
                              {"gamma_im", p.intensity.value().imag()}});
  }
  j["t_end"] = config.t_end;
  j["time_direction"] =
      config.integrator.direction == TimeDirection::forward ? "forward" : "backward";
  j["integrator"] = {{"initial_step", config.integrator.initial_step},
                     {"abs_tol", config.integrator.abs_tol},
                     {"rel_tol", config.integrator.rel_tol},
                     {"collision_radius", config.integrator.collision_radius},
                     {"step_floor", config.integrator.step_floor},
                     {"max_steps", config.integrator.max_steps}};
  j["blowup"] = {{"enabled", config.blowup.enabled},
                 {"base_particle", config.blowup.base_particle},
                 {"selection", config.blowup.selection},
                 {"s_end", config.blowup.s_end}};
  j["outputs"] = {{"trajectory_path", config.outputs.trajectory_path.string()},
                  {"events_path", config.outputs.events_path.string()},
                  {"report_path", config.outputs.report_path.string()}};
  if (!config.outputs.plot_path.empty()) {
    j["outputs"]["plot_path"] = config.outputs.plot_path.string();
  }
  j["sample_stride"] = config.sample_stride;
  return j.dump(2) + "\n";
}

}  // namespace pointflow
