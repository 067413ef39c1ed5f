#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ptisabb/experiment.hpp"
#include "ptisabb/instance_io.hpp"
#include "ptisabb/pseudo_tree.hpp"

namespace py = pybind11;
using namespace ptisabb;

namespace {

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["nclo"] = m.nclo;
  d["msgs_total"] = m.total_messages();
  for (std::size_t k = 0; k < kMessageKindCount; ++k)
    d[py::str("msgs_" + std::string(to_string(static_cast<MessageKind>(k))))] = m.messages[k];
  d["traffic"] = m.traffic;
  d["privacy_loss"] = m.privacy_loss;
  d["solution_cost"] = m.solution_cost;
  return d;
}

py::dict solve(const Instance& instance, const std::string& algo, const std::string& k,
               std::optional<double> timeout_s) {
  AlgorithmSpec spec{parse_algorithm(algo), parse_dimension_limit(k)};
  std::optional<std::chrono::duration<double>> timeout;
  if (timeout_s) timeout = std::chrono::duration<double>(*timeout_s);
  RunRecord r;
  {
    py::gil_scoped_release release;
    r = run_algorithm(instance, spec, timeout);
  }
  py::dict d;
  d["status"] = r.status == RunStatus::kOk        ? "ok"
                : r.status == RunStatus::kTimeout ? "timeout"
                                                  : "error";
  d["error"] = r.error;
  d["cost"] = r.cost;
  d["assignment"] = r.assignment.values();
  d["metrics"] = metrics_dict(r.metrics);
  return d;
}

py::tuple run_experiment_json(const std::string& spec_json) {
  const auto spec = parse_experiment_spec(spec_json);
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = run_experiment(spec);
  }
  std::ostringstream runs, agg;
  write_runs_csv(spec, result, runs);
  write_aggregate_csv(spec, result, agg);
  return py::make_tuple(runs.str(), agg.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "PT-ISABB solver for asymmetric DCOPs";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<SearchSpaceTooLarge>(m, "SearchSpaceTooLarge", PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("agent_count", &Instance::agent_count)
      .def_property_readonly("domains", &Instance::domains)
      .def_property_readonly("constraint_count",
                             [](const Instance& i) { return i.constraints().size(); })
      .def("constraints",
           [](const Instance& inst) {
             py::list out;
             for (const auto& c : inst.constraints()) out.append(py::make_tuple(c.i, c.j));
             return out;
           })
      .def("own_cost", &Instance::own_cost, py::arg("a"), py::arg("b"), py::arg("value_a"),
           py::arg("value_b"))
      .def("evaluate",
           [](const Instance& inst, std::vector<Value> values) {
             return evaluate(inst, Assignment(std::move(values)));
           })
      .def("to_json", &instance_to_json)
      .def_static("from_json", &instance_from_json)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  m.def(
      "generate_random_adcop",
      [](std::size_t agents, double density, std::size_t domain, Cost max_cost,
         std::uint64_t seed) {
        return generate_random_adcop({agents, density, domain, max_cost, seed});
      },
      py::arg("agents"), py::arg("density"), py::arg("domain"), py::arg("max_cost") = 100,
      py::arg("seed") = 0);
  m.def(
      "generate_max_dcsp",
      [](std::size_t agents, double density, std::size_t domain, double tightness,
         std::uint64_t seed) {
        return generate_max_dcsp({agents, density, domain, tightness, seed});
      },
      py::arg("agents"), py::arg("density"), py::arg("domain"), py::arg("tightness"),
      py::arg("seed") = 0);
  m.def("read_instance", [](const std::string& p) { return read_instance(p); });
  m.def("write_instance",
        [](const Instance& i, const std::string& p) { write_instance(i, p); });

  m.def("pseudo_tree_dot", [](const Instance& i) { return build_pseudo_tree(i).to_dot(); });
  m.def("separators", [](const Instance& i) { return build_pseudo_tree(i).sep; });

  m.def("solve", &solve, py::arg("instance"), py::arg("algo") = "pt-isabb",
        py::arg("k") = "inf", py::arg("timeout_s") = py::none(),
        "Solve with pt-isabb, pt-isabb-local, pt-sabb, sabb or brute. Returns a dict with "
        "status, cost, assignment and metrics.");
  m.def("run_experiment", &run_experiment_json, py::arg("spec_json"),
        "Run a sweep from a JSON spec; returns (runs_csv, aggregate_csv).");
  m.def("csv_header", &csv_header);
}
