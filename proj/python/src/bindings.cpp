#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kgr/io.hpp"
#include "kgr/repn.hpp"
#include "kgr/runner.hpp"
#include "kgr/universal.hpp"

namespace py = pybind11;
using namespace kgr;

namespace {

// Graph handle keeping the KGraph alive for dependent measures.
struct PyGraph {
    std::shared_ptr<KGraph> g;
};

struct PyMeasure {
    std::shared_ptr<KGraph> g;
    CylinderMeasure mu;
};

py::object json_to_py(const nlohmann::ordered_json& j) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

py::object outcome_to_py(const cli::Outcome& out) {
    py::dict d;
    d["exit_code"] = out.exit_code;
    d["report"] = json_to_py(out.report);
    return d;
}

cli::Options make_options(double tol, bool exact, int jobs) {
    cli::Options opt;
    opt.tol = tol;
    opt.exact = exact;
    opt.jobs = jobs;
    return opt;
}

} // namespace

PYBIND11_MODULE(_kgr, m) {
    m.doc() = "finite higher-rank graphs, cylinder measures and Cuntz-Krieger "
              "representation checks";

    py::register_exception<Error>(m, "KgrError");

    py::class_<PyGraph>(m, "Graph")
        .def_property_readonly("k", [](const PyGraph& pg) { return pg.g->k(); })
        .def_property_readonly("vertices",
                               [](const PyGraph& pg) {
                                   std::vector<std::string> names;
                                   for (VertexId v = 0; v < pg.g->vertex_count(); ++v)
                                       names.push_back(pg.g->vertex_name(v));
                                   return names;
                               })
        .def_property_readonly("edges",
                               [](const PyGraph& pg) {
                                   std::vector<std::string> names;
                                   for (EdgeId e = 0; e < pg.g->edge_count(); ++e)
                                       names.push_back(pg.g->edge(e).name);
                                   return names;
                               })
        .def("vertex_matrix",
             [](const PyGraph& pg, int color) { return pg.g->vertex_matrix(color); })
        .def("paths",
             [](const PyGraph& pg, const std::vector<int>& degree) {
                 std::vector<std::string> out;
                 for (const Path& p : enumerate_paths(*pg.g, degree)) out.push_back(p.str());
                 return out;
             })
        .def("compose",
             [](const PyGraph& pg, const std::string& a, const std::string& b) {
                 return compose(io::parse_path(*pg.g, a), io::parse_path(*pg.g, b)).str();
             })
        .def("factorize",
             [](const PyGraph& pg, const std::string& p, const std::vector<int>& mdeg) {
                 auto [head, tail] = factorize(io::parse_path(*pg.g, p), mdeg);
                 return py::make_tuple(head.str(), tail.str());
             })
        .def("rainbow",
             [](const PyGraph& pg, const std::string& p) {
                 std::vector<std::string> out;
                 for (EdgeId e : rainbow_form(io::parse_path(*pg.g, p)))
                     out.push_back(pg.g->edge(e).name);
                 return out;
             })
        .def_property_readonly("strongly_connected",
                               [](const PyGraph& pg) { return pg.g->strongly_connected(); });

    py::class_<PyMeasure>(m, "Measure")
        .def_property_readonly("kind", [](const PyMeasure& pm) { return pm.mu.kind(); })
        .def_property_readonly("degenerate",
                               [](const PyMeasure& pm) { return pm.mu.degenerate(); })
        .def("mass",
             [](const PyMeasure& pm, const std::string& path) {
                 return pm.mu.mass(io::parse_path(*pm.g, path)).to_double();
             })
        .def("mass_exact",
             [](const PyMeasure& pm, const std::string& path) {
                 return pm.mu.mass(io::parse_path(*pm.g, path)).str();
             })
        .def("total", [](const PyMeasure& pm) { return pm.mu.total().to_double(); })
        .def("consistency",
             [](const PyMeasure& pm, int depth, double tol) {
                 auto rep = verify_consistency(pm.mu, depth, tol);
                 py::dict d;
                 d["pass"] = rep.pass;
                 d["exact"] = rep.exact;
                 d["max_deviation"] = rep.max_deviation;
                 return d;
             },
             py::arg("depth") = 3, py::arg("tol") = 1e-9);

    m.def("load_graph", [](const std::string& path) {
        return PyGraph{io::load_graph_file(path)};
    });
    m.def("load_graph_json", [](const std::string& text) {
        return PyGraph{io::load_graph(nlohmann::json::parse(text))};
    });
    m.def("load_measure", [](const PyGraph& pg, const std::string& path) {
        return PyMeasure{pg.g, io::load_measure_file(*pg.g, path)};
    });
    m.def("load_measure_json", [](const PyGraph& pg, const std::string& text) {
        return PyMeasure{pg.g, io::load_measure(*pg.g, nlohmann::json::parse(text))};
    });

    m.def("hellinger",
          [](const PyMeasure& a, const PyMeasure& b, int n_max) {
              auto rep = hellinger_affinity(a.mu, b.mu, n_max);
              py::dict d;
              std::vector<double> h;
              for (const auto& v : rep.affinity) h.push_back(v.to_double());
              d["affinity"] = h;
              d["verdict"] = rep.verdict;
              return d;
          },
          py::arg("a"), py::arg("b"), py::arg("n_max") = 8);

    // report-producing commands, mirroring the CLI
    m.def("validate", [](const std::string& graph, double tol, bool exact, int jobs) {
              return outcome_to_py(cli::cmd_validate(graph, make_options(tol, exact, jobs)));
          },
          py::arg("graph"), py::arg("tol") = 1e-9, py::arg("exact") = false,
          py::arg("jobs") = 1);
    m.def("ck_verify",
          [](const std::string& graph, const std::string& measure, int depth,
             const std::vector<int>& cap, double tol, bool exact, int jobs) {
              return outcome_to_py(cli::cmd_ck_verify(graph, measure, depth, cap,
                                                      make_options(tol, exact, jobs)));
          },
          py::arg("graph"), py::arg("measure"), py::arg("depth") = 5,
          py::arg("cap") = std::vector<int>{2}, py::arg("tol") = 1e-9,
          py::arg("exact") = false, py::arg("jobs") = 1);
    m.def("monic_check",
          [](const std::string& graph, const std::string& measure, int max_depth, double tol) {
              return outcome_to_py(cli::cmd_monic_check_pathspace(graph, measure, max_depth,
                                                                  make_options(tol, false, 1)));
          },
          py::arg("graph"), py::arg("measure"), py::arg("max_depth") = 5,
          py::arg("tol") = 1e-9);
    m.def("monic_check_interval",
          [](const std::string& interval, int max_depth, double tol) {
              return outcome_to_py(cli::cmd_monic_check_interval(interval, max_depth,
                                                                 make_options(tol, false, 1)));
          },
          py::arg("interval"), py::arg("max_depth") = 8, py::arg("tol") = 1e-9);
    m.def("disjointness",
          [](const std::string& graph, const std::string& m1, const std::string& m2,
             int max_depth, double tol) {
              return outcome_to_py(cli::cmd_disjointness(graph, m1, m2, max_depth,
                                                         make_options(tol, false, 1)));
          },
          py::arg("graph"), py::arg("m1"), py::arg("m2"), py::arg("max_depth") = 8,
          py::arg("tol") = 1e-9);
    m.def("commutant",
          [](const std::string& graph, const std::string& measure, int depth, double tol) {
              return outcome_to_py(cli::cmd_commutant(graph, measure, depth,
                                                      make_options(tol, false, 1)));
          },
          py::arg("graph"), py::arg("measure"), py::arg("depth") = 3, py::arg("tol") = 1e-9);
    m.def("equivalence",
          [](const std::string& graph, const std::string& sys1, const std::string& sys2,
             int depth, double tol) {
              return outcome_to_py(cli::cmd_equiv(graph, sys1, sys2, depth,
                                                  make_options(tol, false, 1)));
          },
          py::arg("graph"), py::arg("sys1"), py::arg("sys2"), py::arg("depth") = 2,
          py::arg("tol") = 1e-9);
    m.def("universal_check",
          [](const std::string& graph, const std::vector<std::string>& measures, int depth,
             double tol) {
              return outcome_to_py(cli::cmd_universal_check(graph, measures, depth,
                                                            make_options(tol, false, 1)));
          },
          py::arg("graph"), py::arg("measures"), py::arg("depth") = 3, py::arg("tol") = 1e-9);
}
