#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtorsion/cli.hpp"
#include "qtorsion/closed_forms.hpp"
#include "qtorsion/fractional.hpp"
#include "qtorsion/graph.hpp"
#include "qtorsion/graph_io.hpp"
#include "qtorsion/oracle.hpp"
#include "qtorsion/spectral.hpp"
#include "qtorsion/suite.hpp"
#include "qtorsion/surgery.hpp"

namespace py = pybind11;
using namespace qtorsion;

namespace {

MetricGraph make_graph(std::vector<std::string> vertices, const std::vector<std::tuple<std::string, std::string, std::string, double>>& edges,
                       std::vector<std::string> dirichlet) {
  std::vector<Edge> es;
  for (const auto& [id, from, to, length] : edges) es.push_back({id, from, to, length});
  MetricGraph g(std::move(vertices), std::move(es), std::move(dirichlet));
  require_valid(g);
  return g;
}

py::tuple edge_tuple(const Edge& e) { return py::make_tuple(e.id, e.from, e.to, e.length); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral computation of fractional torsion on metric graphs";

  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<DocumentError>(m, "DocumentError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<SurgeryError>(m, "SurgeryError", PyExc_ValueError);
  py::register_exception<OracleError>(m, "OracleError", PyExc_ValueError);

  py::class_<MetricGraph>(m, "MetricGraph")
      .def(py::init(&make_graph), py::arg("vertices"), py::arg("edges"), py::arg("dirichlet"),
           "edges is a list of (id, from, to, length) tuples")
      .def_property_readonly("vertices", &MetricGraph::vertices)
      .def_property_readonly("dirichlet", &MetricGraph::dirichlet)
      .def_property_readonly("edges",
                             [](const MetricGraph& g) {
                               py::list out;
                               for (const auto& e : g.edges()) out.append(edge_tuple(e));
                               return out;
                             })
      .def_property_readonly("total_length", [](const MetricGraph& g) { return total_length(g); })
      .def("to_json", [](const MetricGraph& g) { return write_graph_document(g); })
      .def("__repr__", [](const MetricGraph& g) {
        std::ostringstream os;
        os << "<MetricGraph |V|=" << g.num_vertices() << " |E|=" << g.num_edges() << " |G|=" << total_length(g) << ">";
        return os.str();
      });

  m.def("parse_graph", [](const std::string& text) { return parse_graph_document(text); }, py::arg("text"));
  m.def("load_graph", &load_graph_document, py::arg("path"));
  m.def("builtin_names", &builtin_names);
  m.def("builtin_graph", [](const std::string& name) { return builtin_graph(name); }, py::arg("name"));

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("oversampling", &SolverOptions::oversampling)
      .def_readwrite("accept_tol", &SolverOptions::accept_tol)
      .def_readwrite("multiplicity_tol", &SolverOptions::multiplicity_tol)
      .def_readwrite("refine_width", &SolverOptions::refine_width);

  py::class_<EigenPair>(m, "EigenPair")
      .def_readonly("k", &EigenPair::k)
      .def_readonly("lambda_", &EigenPair::lambda)
      .def_readonly("mass", &EigenPair::mass)
      .def_readonly("multiplicity", &EigenPair::multiplicity)
      .def_property_readonly("coeffs", [](const EigenPair& p) {
        return std::vector<double>(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
      });

  py::class_<SpectralBasis>(m, "SpectralBasis")
      .def_readonly("graph", &SpectralBasis::graph)
      .def_readonly("pairs", &SpectralBasis::pairs)
      .def_readonly("kmax", &SpectralBasis::kmax)
      .def_readonly("captured_mass", &SpectralBasis::captured_mass)
      .def_readonly("next_lambda", &SpectralBasis::next_lambda)
      .def_readonly("warnings", &SpectralBasis::warnings)
      .def_property_readonly("eigenvalues",
                             [](const SpectralBasis& b) {
                               std::vector<double> out;
                               for (const auto& p : b.pairs) out.push_back(p.lambda);
                               return out;
                             })
      .def("__len__", &SpectralBasis::size);

  py::class_<RigidityResult>(m, "RigidityResult")
      .def_readonly("alpha", &RigidityResult::alpha)
      .def_readonly("value", &RigidityResult::value)
      .def_readonly("tail_bound", &RigidityResult::tail_bound)
      .def_readonly("n_terms", &RigidityResult::n_terms)
      .def_readonly("next_lambda", &RigidityResult::next_lambda);

  py::class_<BoundsPair>(m, "BoundsPair")
      .def_readonly("lower", &BoundsPair::lower)
      .def_readonly("upper", &BoundsPair::upper)
      .def_readonly("alpha", &BoundsPair::alpha);

  m.def("scan_spectrum", &scan_spectrum, py::arg("graph"), py::arg("kmax"), py::arg("options") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("scan_first_n", &scan_first_n, py::arg("graph"), py::arg("n"), py::arg("options") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("rigidity", &rigidity, py::arg("basis"), py::arg("alpha"));
  m.def(
      "rigidity_to_tail",
      [](const MetricGraph& g, double alpha, double target, double kmax_start, const SolverOptions& opts) {
        return rigidity_to_tail(g, alpha, target, kmax_start, opts);
      },
      py::arg("graph"), py::arg("alpha"), py::arg("target_tail"), py::arg("kmax_start"),
      py::arg("options") = SolverOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def(
      "torsion_at",
      [](const SpectralBasis& b, double alpha, const std::string& edge, double s) {
        const auto t = torsion_at(b, alpha, {edge, s});
        return py::make_tuple(t.value, t.error_estimate);
      },
      py::arg("basis"), py::arg("alpha"), py::arg("edge"), py::arg("s"), "returns (value, error_estimate)");
  m.def(
      "simple_bounds",
      [](const SpectralBasis& b, double alpha) {
        const auto sb = simple_bounds(b, alpha);
        return py::make_tuple(sb.lower, sb.upper);
      },
      py::arg("basis"), py::arg("alpha"));

  m.def("interval_rigidity_dn", &interval_rigidity_dn, py::arg("length"), py::arg("alpha"));
  m.def("flower_rigidity", &flower_rigidity, py::arg("petals"), py::arg("length"), py::arg("alpha"));
  m.def("paper_bounds", &paper_bounds, py::arg("graph"), py::arg("alpha"));

  m.def("double_edges", [](const MetricGraph& g) { return double_edges(g).graph; }, py::arg("graph"));
  m.def(
      "glue_vertices", [](const MetricGraph& g, const std::vector<std::string>& v) { return glue_vertices(g, v).graph; },
      py::arg("graph"), py::arg("vertices"));
  m.def(
      "unfold_to_cycle",
      [](const MetricGraph& g, bool first_visit_only) {
        return unfold_to_cycle(g, first_visit_only ? UnfoldDirichlet::FirstVisit : UnfoldDirichlet::AllVisits).graph;
      },
      py::arg("graph"), py::arg("first_visit_only") = false);
  m.def("cut_cycle", [](const MetricGraph& g, const std::string& v) { return cut_cycle(g, v).graph; }, py::arg("graph"),
        py::arg("vertex"));

  m.def(
      "fd_rigidity", [](const MetricGraph& g, double h, double alpha) { return fd_rigidity(g, h, alpha); },
      py::arg("graph"), py::arg("h"), py::arg("alpha"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"qtorsion"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "runs the command-line interface; returns (exit_code, stdout, stderr)");
}
