// pybind11 bindings exposing the core pipeline: system construction, value
// iteration, greedy policies and rollouts, tubes, certificates and the
// Monte-Carlo harness.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "racert/io.hpp"

namespace py = pybind11;
using namespace racert;

namespace {

SystemModel system_from_json_str(const std::string& text) {
  return system_from_json(Json::parse(text));
}

Grid make_grid(const std::vector<std::tuple<double, double, int>>& axes) {
  std::vector<GridAxis> ga;
  for (auto [lo, hi, count] : axes) ga.push_back({lo, hi, count});
  return Grid(std::move(ga));
}

py::dict report_to_dict(const CertReport& rep) {
  py::dict d;
  d["center"] = rep.center;
  d["eps_x"] = rep.eps_x;
  d["horizon"] = rep.horizon;
  d["gamma"] = rep.gamma;
  if (rep.lipschitz_value) {
    d["lipschitz_value"] = *rep.lipschitz_value;
    d["lipschitz_certified"] = rep.certified(CertMethod::lipschitz);
  }
  if (rep.socp_value) {
    d["socp_value"] = *rep.socp_value;
    d["socp_certified"] = rep.certified(CertMethod::socp);
  }
  py::list controls;
  for (const auto& u : rep.certified_controls) controls.append(u);
  d["certified_controls"] = controls;
  d["tube_radii"] = rep.tube.radii;
  d["wall_time_seconds"] = rep.wall_time_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(racert, m) {
  m.doc() = "grid reach-avoid value iteration and deterministic set certification";

  py::enum_<Mode>(m, "Mode")
      .value("reach_avoid", Mode::reach_avoid)
      .value("viability", Mode::viability)
      .value("reach", Mode::reach);

  py::enum_<CertMethod>(m, "CertMethod")
      .value("lipschitz", CertMethod::lipschitz)
      .value("socp", CertMethod::socp)
      .value("both", CertMethod::both);

  py::class_<SystemModel, std::shared_ptr<SystemModel>>(m, "SystemModel")
      .def_readonly("name", &SystemModel::name)
      .def_readonly("n", &SystemModel::n)
      .def_readonly("m_u", &SystemModel::m_u)
      .def_readonly("m_d", &SystemModel::m_d)
      .def_readonly("eps_d", &SystemModel::eps_d)
      .def_readonly("lip_fx", &SystemModel::lip_fx)
      .def_readonly("lip_fd", &SystemModel::lip_fd)
      .def_property_readonly("mode", [](const SystemModel& s) { return s.mode; })
      .def("step", &SystemModel::step, py::arg("x"), py::arg("u"), py::arg("d"))
      .def("reward", [](const SystemModel& s, const Vec& x) { return s.reward(x); })
      .def("constraint",
           [](const SystemModel& s, const Vec& x) { return s.constraint(x); });

  m.def(
      "builtin_system",
      [](const std::string& name, const ParamMap& params, const std::string& mode) {
        return std::make_shared<SystemModel>(
            builtin_system(name, params, mode_from_string(mode)));
      },
      py::arg("name"), py::arg("params") = ParamMap{},
      py::arg("mode") = "reach_avoid");
  m.def("system_from_json", [](const std::string& text) {
    return std::make_shared<SystemModel>(system_from_json_str(text));
  });

  py::class_<Grid>(m, "Grid")
      .def(py::init(&make_grid), py::arg("axes"))
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", [](const Grid& g) { return g.size(); })
      .def("node", [](const Grid& g, std::size_t i) { return g.node(i); });

  py::class_<ActionLattice>(m, "ActionLattice")
      .def_static("build", &ActionLattice::build, py::arg("model"),
                  py::arg("per_control_dim") = 11,
                  py::arg("per_disturbance_dim") = 5)
      .def_readonly("controls", &ActionLattice::controls)
      .def_readonly("disturbances", &ActionLattice::disturbances);

  py::class_<ValueField, std::shared_ptr<ValueField>>(m, "ValueField")
      .def_property_readonly("gamma", [](const ValueField& f) { return f.gamma; })
      .def_property_readonly("mode", [](const ValueField& f) { return f.mode; })
      .def_property_readonly("iterations",
                             [](const ValueField& f) { return f.stats.iterations; })
      .def_property_readonly("residual",
                             [](const ValueField& f) { return f.stats.residual; })
      .def_property_readonly("converged",
                             [](const ValueField& f) { return f.stats.converged; })
      .def_property_readonly("values",
                             [](const ValueField& f) {
                               return py::array_t<double>(
                                   static_cast<py::ssize_t>(f.values.size()),
                                   f.values.data());
                             })
      .def("interpolate", &ValueField::interpolate, py::arg("x"))
      .def("level_intervals_1d", [](const ValueField& f) { return level_intervals_1d(f); })
      .def("save", [](const ValueField& f, const std::filesystem::path& p) { save_field(f, p); });
  m.def("load_field", [](const std::filesystem::path& p) {
    return std::make_shared<ValueField>(load_field(p));
  });

  m.def(
      "value_iteration",
      [](std::shared_ptr<SystemModel> model, const Grid& grid, double gamma,
         const ActionLattice& lattice, double tol, int max_iter,
         int stable_window, int threads) {
        SolveOptions opts{tol, max_iter, stable_window, threads};
        return std::make_shared<ValueField>(
            value_iteration(*model, grid, gamma, lattice, opts));
      },
      py::arg("model"), py::arg("grid"), py::arg("gamma"), py::arg("lattice"),
      py::arg("tol") = 1e-6, py::arg("max_iter") = 5000,
      py::arg("stable_window") = 100, py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());

  m.def("greedy_control",
        [](std::shared_ptr<ValueField> field, std::shared_ptr<SystemModel> model,
           const ActionLattice& lattice, const Vec& x) {
          return greedy_control(*field, *model, lattice, x);
        });
  m.def("worst_case_disturbance",
        [](std::shared_ptr<ValueField> field, std::shared_ptr<SystemModel> model,
           const ActionLattice& lattice, const Vec& x, const Vec& u) {
          return worst_case_disturbance(*field, *model, lattice, x, u);
        });

  m.def(
      "greedy_rollout",
      [](std::shared_ptr<SystemModel> model, std::shared_ptr<ValueField> field,
         const ActionLattice& lattice, const Vec& x0, int horizon,
         const std::string& disturbance, std::uint64_t seed) {
        Policy policy = Policy::grid_greedy(field, model, lattice);
        DisturbancePolicy dist =
            disturbance == "worst_case"
                ? DisturbancePolicy::grid_worst_case(field, model, lattice)
                : DisturbancePolicy::uniform_sampler();
        Trajectory traj = rollout(*model, policy, dist, x0, horizon, seed);
        py::list states, controls, disturbances;
        for (const auto& x : traj.states) states.append(x);
        for (const auto& u : traj.controls) controls.append(u);
        for (const auto& d : traj.disturbances) disturbances.append(d);
        return py::make_tuple(states, controls, disturbances);
      },
      py::arg("model"), py::arg("field"), py::arg("lattice"), py::arg("x0"),
      py::arg("horizon"), py::arg("disturbance") = "uniform", py::arg("seed") = 0);

  m.def("lipschitz_tube_radii",
        [](std::shared_ptr<SystemModel> model, double eps_x, int horizon) {
          return lipschitz_tube_radii(*model, eps_x, horizon);
        });

  m.def("min_linear_over_ball", &min_linear_over_ball, py::arg("p"), py::arg("k"),
        py::arg("center"), py::arg("radius"));
  m.def(
      "min_convex_quadratic_over_ball",
      [](const Mat& Q, const Vec& q, double b, const Vec& center, double radius,
         double tol) {
        auto res = min_convex_quadratic_over_ball(Q, q, b, center, radius, tol);
        return py::make_tuple(res.value, res.minimizer);
      },
      py::arg("Q"), py::arg("q"), py::arg("b"), py::arg("center"),
      py::arg("radius"), py::arg("tol") = 1e-10);

  m.def(
      "certify",
      [](std::shared_ptr<SystemModel> model, std::shared_ptr<ValueField> field,
         const ActionLattice& lattice, const Vec& center, double eps_x,
         int horizon, double gamma, const std::string& method) {
        Policy policy = Policy::grid_greedy(field, model, lattice);
        CertReport rep = certify_online(*model, policy, center, eps_x, horizon,
                                        gamma, cert_method_from_string(method));
        return report_to_dict(rep);
      },
      py::arg("model"), py::arg("field"), py::arg("lattice"), py::arg("center"),
      py::arg("eps_x"), py::arg("horizon"), py::arg("gamma"),
      py::arg("method") = "both");

  m.def(
      "certify_offline",
      [](std::shared_ptr<SystemModel> model, std::shared_ptr<ValueField> field,
         const ActionLattice& lattice, const Vec& lo, const Vec& hi, double eps_x,
         int horizon, double gamma, const std::string& method,
         std::size_t max_centers, int threads) {
        CertifiedSet set;
        {
          py::gil_scoped_release release;
          Policy policy = Policy::grid_greedy(field, model, lattice);
          set = certify_offline(*model, policy, lo, hi, eps_x, horizon, gamma,
                                cert_method_from_string(method), max_centers,
                                threads);
        }
        py::list members;
        for (const auto& rep : set.members) members.append(report_to_dict(rep));
        py::dict d;
        d["members"] = members;
        d["centers_examined"] = set.centers_examined;
        d["eps_x"] = set.eps_x;
        d["spacing"] = set.spacing;
        return d;
      },
      py::arg("model"), py::arg("field"), py::arg("lattice"), py::arg("lo"),
      py::arg("hi"), py::arg("eps_x"), py::arg("horizon"), py::arg("gamma"),
      py::arg("method") = "both", py::arg("max_centers") = 1000000,
      py::arg("threads") = 1);

  m.def(
      "success_rate",
      [](std::shared_ptr<SystemModel> model, std::shared_ptr<ValueField> field,
         const ActionLattice& lattice, const Vec& lo, const Vec& hi,
         const std::string& sampler, int trials, int horizon,
         const std::string& disturbance, std::uint64_t seed) {
        ExperimentConfig config;
        config.sampler = sampler_kind_from_string(sampler);
        config.region_lo = lo;
        config.region_hi = hi;
        config.trials = trials;
        config.horizon = horizon;
        config.seed = seed;
        config.disturbance = disturbance_mode_from_string(disturbance);
        Policy policy = Policy::grid_greedy(field, model, lattice);
        DisturbancePolicy dist =
            config.disturbance == DisturbanceMode::worst_case
                ? DisturbancePolicy::grid_worst_case(field, model, lattice)
                : DisturbancePolicy::uniform_sampler();
        SuccessReport rep =
            success_rate(*model, config, policy, dist, field.get(), nullptr);
        py::dict d;
        d["trials"] = rep.trials;
        d["successes"] = rep.successes;
        d["success_rate"] = rep.success_rate;
        d["failures_constraint"] = rep.failures_constraint;
        d["failures_never"] = rep.failures_never;
        return d;
      },
      py::arg("model"), py::arg("field"), py::arg("lattice"), py::arg("lo"),
      py::arg("hi"), py::arg("sampler") = "region", py::arg("trials") = 100,
      py::arg("horizon") = 50, py::arg("disturbance") = "uniform",
      py::arg("seed") = 0);

  m.def("toolkit_version", &toolkit_version);
}
