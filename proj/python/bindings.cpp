#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pqbbh/analysis.hpp"
#include "pqbbh/bbh_bivariate.hpp"

namespace py = pybind11;
using namespace pqbbh;

namespace {

Grid2D make_grid(int points, double t_max) { return Grid2D::uniform(points, t_max); }

}  // namespace

PYBIND11_MODULE(_pqbbh, m) {
    m.doc() = "Bivariate (p,q)-Bleimann-Butzer-Hahn operators (C++ core)";

    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

    py::class_<PqParams>(m, "PqParams")
        .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
        .def_property_readonly("p", &PqParams::p)
        .def_property_readonly("q", &PqParams::q)
        .def("__repr__", [](const PqParams& s) {
            return "PqParams(p=" + std::to_string(s.p()) + ", q=" + std::to_string(s.q()) + ")";
        });

    py::class_<OperatorSpec>(m, "OperatorSpec")
        .def(py::init<int, int, PqParams, PqParams>(), py::arg("n1"), py::arg("n2"),
             py::arg("params1"), py::arg("params2"))
        .def_readonly("n1", &OperatorSpec::n1)
        .def_readonly("n2", &OperatorSpec::n2)
        .def_readonly("params1", &OperatorSpec::params1)
        .def_readonly("params2", &OperatorSpec::params2);

    py::class_<GeneralizedSpec>(m, "GeneralizedSpec")
        .def(py::init<OperatorSpec, double, double, double, double>(), py::arg("base"),
             py::arg("gamma1") = 0.0, py::arg("gamma2") = 0.0, py::arg("beta1") = 0.0,
             py::arg("beta2") = 0.0)
        .def_readonly("base", &GeneralizedSpec::base)
        .def_readonly("gamma1", &GeneralizedSpec::gamma1)
        .def_readonly("gamma2", &GeneralizedSpec::gamma2)
        .def_readonly("beta1", &GeneralizedSpec::beta1)
        .def_readonly("beta2", &GeneralizedSpec::beta2);

    m.def("pq_integer", &pq_integer, py::arg("n"), py::arg("params"));
    m.def("pq_factorial", &pq_factorial, py::arg("n"), py::arg("params"));
    m.def("pq_binomial", &pq_binomial, py::arg("n"), py::arg("k"), py::arg("params"));
    m.def("euler_weight_log",
          [](int n, int k, const PqParams& params) { return euler_weight_log(n, k, params).log_value; },
          py::arg("n"), py::arg("k"), py::arg("params"));
    m.def("euler_product", &euler_product, py::arg("n"), py::arg("params"), py::arg("x"));
    m.def("euler_sum", &euler_sum, py::arg("n"), py::arg("params"), py::arg("x"));
    m.def("split_identity_residual", &split_identity_residual, py::arg("n"), py::arg("k"),
          py::arg("params"));

    m.def("node", &node, py::arg("n"), py::arg("k"), py::arg("params"));
    m.def("weights",
          [](int n, const PqParams& params, double x) {
              const NodeWeightTable t = weight_table(n, params, x);
              return py::make_tuple(t.nodes, t.weights);
          },
          py::arg("n"), py::arg("params"), py::arg("x"),
          "Returns (nodes, weights) of the univariate operator at x.");
    m.def("pq_apply",
          [](const std::function<double(double)>& f, int n, const PqParams& params, double x) {
              return pq_apply(f, n, params, x);
          },
          py::arg("f"), py::arg("n"), py::arg("params"), py::arg("x"));
    m.def("q_apply",
          [](const std::function<double(double)>& f, int n, double q, double x) {
              return q_apply(f, n, q, x);
          },
          py::arg("f"), py::arg("n"), py::arg("q"), py::arg("x"));
    m.def("classical_apply",
          [](const std::function<double(double)>& f, int n, double x) {
              return classical_apply(f, n, x);
          },
          py::arg("f"), py::arg("n"), py::arg("x"));

    m.def("apply2",
          [](const std::function<double(double, double)>& f, const OperatorSpec& spec, double x,
             double y) { return apply2(f, spec, x, y); },
          py::arg("f"), py::arg("spec"), py::arg("x"), py::arg("y"));
    m.def("apply2_composed",
          [](const std::function<double(double, double)>& f, const OperatorSpec& spec, double x,
             double y, const std::string& order) {
              const ComposeOrder o = order == "x_then_y" ? ComposeOrder::x_then_y
                                                         : ComposeOrder::y_then_x;
              return apply2_composed(f, spec, x, y, o);
          },
          py::arg("f"), py::arg("spec"), py::arg("x"), py::arg("y"),
          py::arg("order") = "x_then_y");
    m.def("moment_closed", &moment_closed, py::arg("spec"), py::arg("i"), py::arg("j"),
          py::arg("x"), py::arg("y"));
    m.def("moment_direct", &moment_direct, py::arg("spec"), py::arg("i"), py::arg("j"),
          py::arg("x"), py::arg("y"));
    m.def("generalized_apply2",
          [](const std::function<double(double, double)>& f, const GeneralizedSpec& gspec,
             double x, double y) { return generalized_apply2(f, gspec, x, y); },
          py::arg("f"), py::arg("gspec"), py::arg("x"), py::arg("y"));

    m.def("test_function", &test_function, py::arg("i"), py::arg("j"), py::arg("u"), py::arg("v"));
    m.def("default_schedule",
          [](int n) {
              const PqParams params = default_schedule(n);
              return py::make_tuple(params.p(), params.q());
          },
          py::arg("n"), "Returns (p_n, q_n) of the default convergence schedule.");
    m.def("delta_n", &delta_n, py::arg("n"), py::arg("params"), py::arg("x"));

    m.def("corpus_names", [] {
        std::vector<std::string> names;
        for (const CorpusFunction& cf : corpus()) names.push_back(cf.name);
        return names;
    });
    m.def("corpus_eval",
          [](const std::string& name, double u, double v) { return corpus_function(name).f(u, v); },
          py::arg("name"), py::arg("u"), py::arg("v"));
    m.def("corpus_modulus",
          [](const std::string& name, double d1, double d2) {
              return corpus_function(name).modulus(d1, d2);
          },
          py::arg("name"), py::arg("delta1"), py::arg("delta2"));

    m.def("sup_error",
          [](const std::function<double(double, double)>& f, const OperatorSpec& spec,
             int grid_points, double t_max) {
              return sup_error(spec, f, make_grid(grid_points, t_max));
          },
          py::arg("f"), py::arg("spec"), py::arg("grid_points") = 33, py::arg("t_max") = 0.96);
    m.def("korovkin_table",
          [](const std::string& schedule_id, const std::vector<int>& n_list, int grid_points,
             double t_max) {
              std::vector<std::tuple<int, double, double, std::string, double>> rows;
              for (const KorovkinRow& row :
                   korovkin_suite(ParamSchedule::by_id(schedule_id), n_list,
                                  make_grid(grid_points, t_max)))
                  rows.emplace_back(row.n, row.p, row.q, row.func, row.sup_err);
              return rows;
          },
          py::arg("schedule") = "default",
          py::arg("n_list") = std::vector<int>{8, 16, 32, 64, 128}, py::arg("grid_points") = 33,
          py::arg("t_max") = 0.96,
          "Rows (n, p_n, q_n, func, sup_error) for the five Korovkin test functions.");
}
