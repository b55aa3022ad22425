#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pointflow/analytic.hpp"
#include "pointflow/blowup.hpp"
#include "pointflow/config.hpp"
#include "pointflow/diagnostics.hpp"
#include "pointflow/io.hpp"

namespace py = pybind11;
using namespace pointflow;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planar point-source / point-vortex interaction dynamics";

  py::class_<Intensity>(m, "Intensity")
      .def(py::init<Complex>(), py::arg("value"))
      .def_static("from_source_strength", &Intensity::from_source_strength, py::arg("q"))
      .def_static("from_vorticity", &Intensity::from_vorticity, py::arg("omega"))
      .def_property_readonly("value", &Intensity::value)
      .def("__repr__", [](const Intensity& i) {
        return "Intensity(" + std::to_string(i.value().real()) + (i.value().imag() < 0 ? "-" : "+") +
               std::to_string(std::abs(i.value().imag())) + "j)";
      });

  py::class_<Particle>(m, "Particle")
      .def(py::init<Complex, Intensity>(), py::arg("position"), py::arg("intensity"))
      .def_readwrite("position", &Particle::position)
      .def_readwrite("intensity", &Particle::intensity);

  py::class_<SystemState>(m, "SystemState")
      .def(py::init([](std::vector<Particle> particles, double time) {
             SystemState s;
             s.time = time;
             s.particles = std::move(particles);
             return s;
           }),
           py::arg("particles"), py::arg("time") = 0.0)
      .def_readwrite("time", &SystemState::time)
      .def_readwrite("particles", &SystemState::particles)
      .def("positions", &SystemState::positions)
      .def("intensity_values", &SystemState::intensity_values)
      .def("__len__", &SystemState::size);

  m.def("make_state", &make_state, py::arg("positions"), py::arg("gammas"),
        py::arg("time") = 0.0);

  // model
  m.def("velocity_field", &velocity_field, py::arg("state"));
  m.def("hamiltonian_h", &hamiltonian_h, py::arg("state"), py::arg("vorticities"));
  m.def("potential_g", &potential_g, py::arg("state"), py::arg("sources"));
  m.def("linear_momentum", &linear_momentum, py::arg("state"));
  m.def("total_intensity", &total_intensity, py::arg("state"));
  m.def("equivalent_center", &equivalent_center, py::arg("state"));
  m.def(
      "angular_momentum",
      [](const std::vector<Complex>& z, const std::vector<Complex>& v,
         const WeightVector& w) { return angular_momentum(z, v, w); },
      py::arg("positions"), py::arg("velocities"), py::arg("weights"));
  m.def("moment_of_inertia", &moment_of_inertia, py::arg("state"), py::arg("weights"));
  m.def("virial", py::overload_cast<const WeightVector&>(&virial), py::arg("weights"));
  m.def("virial", py::overload_cast<const std::vector<Intensity>&>(&virial),
        py::arg("intensities"));

  py::class_<FieldDecomposition>(m, "FieldDecomposition")
      .def_readonly("vortex", &FieldDecomposition::vortex)
      .def_readonly("source", &FieldDecomposition::source);
  m.def("decompose_field", &decompose_field, py::arg("state"));
  m.def("source_weights", &source_weights, py::arg("state"));
  m.def("vortex_weights", &vortex_weights, py::arg("state"));
  m.def("is_pure_source", &is_pure_source, py::arg("state"));

  // integrate
  py::enum_<TimeDirection>(m, "TimeDirection")
      .value("forward", TimeDirection::forward)
      .value("backward", TimeDirection::backward);

  py::class_<IntegratorOptions>(m, "IntegratorOptions")
      .def(py::init<>())
      .def_readwrite("initial_step", &IntegratorOptions::initial_step)
      .def_readwrite("abs_tol", &IntegratorOptions::abs_tol)
      .def_readwrite("rel_tol", &IntegratorOptions::rel_tol)
      .def_readwrite("collision_radius", &IntegratorOptions::collision_radius)
      .def_readwrite("step_floor", &IntegratorOptions::step_floor)
      .def_readwrite("max_steps", &IntegratorOptions::max_steps)
      .def_readwrite("direction", &IntegratorOptions::direction);

  py::enum_<EventKind>(m, "EventKind")
      .value("collision", EventKind::collision)
      .value("merge", EventKind::merge)
      .value("termination", EventKind::termination);

  py::class_<Event>(m, "Event")
      .def_readonly("kind", &Event::kind)
      .def_readonly("time", &Event::time)
      .def_readonly("participants", &Event::participants)
      .def_readonly("location", &Event::location)
      .def_readonly("detail", &Event::detail);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("samples", &Trajectory::samples)
      .def_readonly("events", &Trajectory::events);

  m.def("rk4_step", &rk4_step, py::arg("state"), py::arg("h"));
  m.def("integrate_adaptive", &integrate_adaptive, py::arg("state"), py::arg("t_end"),
        py::arg("options") = IntegratorOptions{});
  m.def("locate_collision", &locate_collision, py::arg("step_start"), py::arg("step"),
        py::arg("options") = IntegratorOptions{});
  m.def("merge_particles", &merge_particles, py::arg("state"), py::arg("participants"));
  m.def("simulate", &simulate, py::arg("state"), py::arg("t_end"),
        py::arg("options") = IntegratorOptions{});

  // blowup
  py::class_<RelativeState>(m, "RelativeState")
      .def(py::init<>())
      .def_readwrite("momentum", &RelativeState::momentum)
      .def_readwrite("intensities", &RelativeState::intensities)
      .def_readwrite("xi", &RelativeState::xi)
      .def_readwrite("s", &RelativeState::s)
      .def_readwrite("t", &RelativeState::t)
      .def("particle_count", &RelativeState::particle_count);

  py::class_<BlowupTrajectory>(m, "BlowupTrajectory")
      .def_readonly("samples", &BlowupTrajectory::samples)
      .def_readonly("events", &BlowupTrajectory::events);

  py::class_<TauChartPoint>(m, "TauChartPoint")
      .def_readonly("z", &TauChartPoint::z)
      .def_readonly("t", &TauChartPoint::t);

  m.def("to_relative", &to_relative, py::arg("state"));
  m.def("with_base_last", &with_base_last, py::arg("state"), py::arg("base"));
  m.def("from_relative", py::overload_cast<const RelativeState&>(&from_relative),
        py::arg("relative"));
  m.def("from_relative",
        py::overload_cast<const RelativeState&, Complex>(&from_relative),
        py::arg("relative"), py::arg("base_position"));
  m.def("relative_field", &relative_field, py::arg("relative"));
  m.def("blowup_field", &blowup_field, py::arg("relative"), py::arg("selection"));
  m.def("integrate_blowup", &integrate_blowup, py::arg("relative"), py::arg("selection"),
        py::arg("s_end"), py::arg("options") = IntegratorOptions{});
  m.def("tau_regularize_two_body", &tau_regularize_two_body, py::arg("intensity_sum"),
        py::arg("z0"), py::arg("tau0"), py::arg("tau"));

  // analytic
  py::class_<TwoBodySolution>(m, "TwoBodySolution")
      .def(py::init<Complex, double, double>(), py::arg("intensity_sum"), py::arg("r0"),
           py::arg("theta0") = 0.0)
      .def_readonly("intensity_sum", &TwoBodySolution::intensity_sum)
      .def_readonly("r0", &TwoBodySolution::r0)
      .def_readonly("theta0", &TwoBodySolution::theta0)
      .def_property_readonly("collision", &TwoBodySolution::collision);

  py::class_<PolarPoint>(m, "PolarPoint")
      .def_readonly("r", &PolarPoint::r)
      .def_readonly("theta", &PolarPoint::theta);

  m.def("collision_time", &collision_time, py::arg("intensity_sum"), py::arg("r0"));
  m.def("two_body_state", &two_body_state, py::arg("solution"), py::arg("t"));
  m.def("two_body_polar", &two_body_polar, py::arg("solution"), py::arg("t"));
  m.def("single_source_radius", &single_source_radius, py::arg("gamma"), py::arg("r0"),
        py::arg("t"));
  m.def("blowup_two_body", &blowup_two_body, py::arg("K"), py::arg("S"), py::arg("s"));
  m.def("blowup_two_body_time", &blowup_two_body_time, py::arg("K"), py::arg("S"),
        py::arg("s"));

  // diagnostics
  py::class_<PairWinding>(m, "PairWinding")
      .def_readonly("first", &PairWinding::first)
      .def_readonly("second", &PairWinding::second)
      .def_readonly("delta_theta", &PairWinding::delta_theta);

  py::class_<WindingResult>(m, "WindingResult")
      .def_readonly("pairs", &WindingResult::pairs)
      .def_readonly("g_drift", &WindingResult::g_drift);

  py::class_<InvariantReport>(m, "InvariantReport")
      .def_readonly("scope", &InvariantReport::scope)
      .def_readonly("z_drift", &InvariantReport::z_drift)
      .def_readonly("max_abs_a", &InvariantReport::max_abs_a)
      .def_readonly("idot_slope", &InvariantReport::idot_slope)
      .def_readonly("idot_residual", &InvariantReport::idot_residual)
      .def_readonly("idot_predicted", &InvariantReport::idot_predicted)
      .def_readonly("idot_applicable", &InvariantReport::idot_applicable)
      .def_readonly("virial_weights", &InvariantReport::virial_weights)
      .def_readonly("virial_intensity", &InvariantReport::virial_intensity)
      .def_readonly("h_start", &InvariantReport::h_start)
      .def_readonly("h_end", &InvariantReport::h_end)
      .def_readonly("g_start", &InvariantReport::g_start)
      .def_readonly("g_end", &InvariantReport::g_end)
      .def_readonly("winding", &InvariantReport::winding)
      .def_readonly("g_drift", &InvariantReport::g_drift)
      .def_readonly("conjecture_holds", &InvariantReport::conjecture_holds);

  m.def("winding_probe", &winding_probe, py::arg("trajectory"));
  m.def("invariant_drift_report", &invariant_drift_report, py::arg("trajectory"),
        py::arg("weights"));
  m.def("gradient_check", &gradient_check, py::arg("state"), py::arg("weights"));

  // io
  m.def("trajectory_csv", &io::trajectory_csv, py::arg("trajectory"),
        py::arg("sample_stride") = 1);
  m.def("events_csv", &io::events_csv, py::arg("events"));
  m.def("trajectory_svg", &io::trajectory_svg, py::arg("trajectory"));
  m.def("parse_trajectory_csv", &io::parse_trajectory_csv, py::arg("text"));

#ifdef VERSION_INFO
#define POINTFLOW_STR2(x) #x
#define POINTFLOW_STR(x) POINTFLOW_STR2(x)
  m.attr("__version__") = POINTFLOW_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
