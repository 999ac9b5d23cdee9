// Python view of the solver: vertices are (x, y) or (x, y, z) tuples, plans are lists of paths.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grmapf/bench.hpp"
#include "grmapf/error.hpp"
#include "grmapf/io.hpp"
#include "grmapf/oracle.hpp"
#include "grmapf/refine.hpp"
#include "grmapf/solvers.hpp"

namespace py = pybind11;
using namespace grmapf;

namespace {

using Coord = std::vector<int>;

Vertex to_vertex(const Coord& c) {
  if (c.size() != 2 && c.size() != 3) throw PreconditionError("a vertex has two or three coordinates");
  return {c[0], c[1], c.size() == 3 ? c[2] : 0};
}

py::tuple to_tuple(const Vertex& v, bool three_d) {
  if (three_d) return py::make_tuple(v.x, v.y, v.z);
  return py::make_tuple(v.x, v.y);
}

std::vector<Vertex> to_vertices(const std::vector<Coord>& cs) {
  std::vector<Vertex> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(to_vertex(c));
  return out;
}

py::list paths_of(const Plan& plan, bool three_d) {
  py::list out;
  for (const auto& p : plan.paths) {
    py::list q;
    for (const auto& v : p) q.append(to_tuple(v, three_d));
    out.append(q);
  }
  return out;
}

Plan plan_of(const std::vector<std::vector<Coord>>& paths) {
  Plan p;
  for (const auto& path : paths) p.paths.push_back(to_vertices(path));
  return p;
}

py::dict result_dict(const SolveResult& r, bool three_d) {
  py::dict d;
  d["paths"] = paths_of(r.plan, three_d);
  d["makespan"] = r.plan.makespan();
  d["synchronized_makespan"] = r.synchronized_makespan;
  d["shuffle_makespan"] = r.trace.shuffle_makespan();
  py::list phases;
  for (const auto& ph : r.trace.phases) phases.append(py::make_tuple(ph.name, ph.begin, ph.end));
  d["phases"] = phases;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Grid rearrangement based multi-agent path planning";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<LimitExceeded>(m, "LimitExceeded", base.ptr());
  py::register_exception<ScheduleError>(m, "ScheduleError", base.ptr());

  py::class_<GridSpec>(m, "Grid")
      .def(py::init([](int rows, int cols, int layers, const std::vector<Coord>& obstacles) {
             return GridSpec(rows, cols, layers, to_vertices(obstacles));
           }),
           py::arg("rows"), py::arg("cols"), py::arg("layers") = 1, py::arg("obstacles") = std::vector<Coord>{})
      .def_property_readonly("rows", &GridSpec::rows)
      .def_property_readonly("cols", &GridSpec::cols)
      .def_property_readonly("layers", &GridSpec::layers)
      .def_property_readonly("obstacles", [](const GridSpec& g) {
        py::list out;
        for (const auto& v : g.obstacles()) out.append(to_tuple(v, g.is_3d()));
        return out;
      })
      .def("blocked", [](const GridSpec& g, const Coord& c) { return g.blocked(to_vertex(c)); });

  py::class_<Instance>(m, "Instance")
      .def(py::init([](const GridSpec& g, const std::vector<Coord>& s, const std::vector<Coord>& t) {
             return Instance(g, to_vertices(s), to_vertices(t));
           }),
           py::arg("grid"), py::arg("starts"), py::arg("goals"))
      .def_property_readonly("grid", &Instance::grid)
      .def_property_readonly("starts", [](const Instance& i) {
        py::list out;
        for (const auto& v : i.starts()) out.append(to_tuple(v, i.grid().is_3d()));
        return out;
      })
      .def_property_readonly("goals", [](const Instance& i) {
        py::list out;
        for (const auto& v : i.goals()) out.append(to_tuple(v, i.grid().is_3d()));
        return out;
      })
      .def("__len__", &Instance::size)
      .def("to_json", [](const Instance& i) { return instance_to_json(i); })
      .def_static("from_json", &instance_from_json);

  m.def(
      "generate",
      [](int rows, int cols, int layers, double density, const std::string& pattern, std::uint64_t seed) {
        InstanceSpec s{rows, cols, layers, density, parse_pattern(pattern), seed};
        return generate_instance(s);
      },
      py::arg("rows"), py::arg("cols"), py::arg("layers") = 1, py::arg("density") = 1.0 / 3,
      py::arg("pattern") = "random", py::arg("seed") = 0, "Random instance from a named pattern.");

  m.def(
      "solve",
      [](const Instance& inst, const std::string& algorithm, const std::string& matching, bool refine,
         std::uint64_t seed, bool column_first) {
        SolverConfig c;
        c.algorithm = parse_algorithm(algorithm);
        c.matching = parse_matching(matching);
        c.refine = refine;
        c.seed = seed;
        c.column_first = column_first;
        c.dimension = inst.grid().is_3d() ? 3 : 2;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(inst, c);
        }
        return result_dict(r, inst.grid().is_3d());
      },
      py::arg("instance"), py::arg("algorithm") = "grh", py::arg("matching") = "hall", py::arg("refine") = false,
      py::arg("seed") = 0, py::arg("column_first") = false,
      "Solve an instance. Returns paths, makespan and the phase spans.");

  m.def(
      "validate",
      [](const Instance& inst, const std::vector<std::vector<Coord>>& paths) {
        std::vector<std::string> out;
        for (const auto& v : validate_plan(inst, plan_of(paths)).violations) out.push_back(v.describe());
        return out;
      },
      py::arg("instance"), py::arg("paths"), "Violations of a plan; empty when it is valid.");

  m.def(
      "metrics",
      [](const Instance& inst, const std::vector<std::vector<Coord>>& paths) {
        const auto mt = compute_metrics(inst, plan_of(paths));
        py::dict d;
        d["makespan"] = mt.makespan;
        d["soc"] = mt.soc;
        d["manhattan_lb"] = mt.manhattan_lb;
        d["optimality_ratio"] = mt.optimality_ratio ? py::cast(*mt.optimality_ratio) : py::none();
        return d;
      },
      py::arg("instance"), py::arg("paths"));

  m.def(
      "refine",
      [](const Instance& inst, const std::vector<std::vector<Coord>>& paths) {
        const auto r = refine(inst, plan_of(paths));
        py::dict d;
        d["paths"] = paths_of(r.plan, inst.grid().is_3d());
        d["makespan_before"] = r.makespan_before;
        d["makespan_after"] = r.makespan_after;
        return d;
      },
      py::arg("instance"), py::arg("paths"), "Let agents move as early as the visit order allows.");

  m.def(
      "optimal_makespan",
      [](const Instance& inst) {
        const auto r = optimal_makespan_labeled(inst);
        return py::make_tuple(r.makespan, paths_of(r.plan, inst.grid().is_3d()));
      },
      py::arg("instance"), "Exhaustive optimum for tiny instances: (makespan, paths).");

  m.def("manhattan_lower_bound", &manhattan_lower_bound, py::arg("instance"));
}
