#include "bmo/bellman.hpp"
#include "bmo/domain.hpp"
#include "bmo/errors.hpp"
#include "bmo/specfn.hpp"
#include "bmo/testfn.hpp"
#include "bmo/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

namespace py = pybind11;
using namespace bmo;

namespace {

Point3 to_point(const std::array<double, 3>& x) { return {x[0], x[1], x[2]}; }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return v;
}

// Same defaults as the command-line verify.
std::string run_suite(const std::string& suite, const Params& pr, int samples, std::uint64_t seed, int cells,
                      int levels) {
    const double eps = pr.eps();
    verify::VerifyReport rep;
    if (suite == "identities") rep = verify::check_identities(pr, linspace(eps, eps + 10, 201));
    else if (suite == "closed_forms") rep = verify::check_closed_forms(eps, {1, 1.5, 2.5, 3}, linspace(0, 10, 201));
    else if (suite == "skeleton") rep = verify::check_skeleton(pr, linspace(-5, 5, 201));
    else if (suite == "extremal") rep = verify::check_extremal_point(pr);
    else if (suite == "concavity") rep = verify::check_concavity(pr, samples, seed);
    else if (suite == "c1_glue") rep = verify::check_c1_glue(pr, samples);
    else if (suite == "oracle") rep = verify::check_inequality_oracle(pr, samples, cells, seed);
    else if (suite == "attainment") rep = verify::check_attainment(pr, {eps, 1.5 * eps, 3 * eps});
    else if (suite == "phi0") rep = verify::check_phi0(pr, levels);
    else if (suite == "scaling") rep = verify::check_scaling(pr, samples, seed);
    else if (suite == "slice") rep = verify::check_slice_monotone(pr, samples);
    else throw DomainError("unknown suite '" + suite + "'");
    return verify::to_json(rep);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bellman function for the multiplicative BMO inequality";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ValueError);
    py::register_exception<BoundaryError>(m, "BoundaryError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Params>(m, "Params")
        .def(py::init<double, double, double>(), py::arg("p"), py::arg("r"), py::arg("eps") = 1.0)
        .def_property_readonly("p", &Params::p)
        .def_property_readonly("r", &Params::r)
        .def_property_readonly("eps", &Params::eps)
        .def_property_readonly("regime", [](const Params& pr) { return std::string(to_string(pr.regime())); })
        .def("__repr__", [](const Params& pr) {
            std::ostringstream s;
            s << "Params(p=" << pr.p() << ", r=" << pr.r() << ", eps=" << pr.eps() << ")";
            return s.str();
        });

    m.def("m_fn", &specfn::m_fn, py::arg("p"), py::arg("eps"), py::arg("u"), py::arg("order") = 0);
    m.def(
        "k_fn", [](double p, double eps, double u, int order) { return specfn::k_fn(p, eps, u, order); },
        py::arg("p"), py::arg("eps"), py::arg("u"), py::arg("order") = 0);

    m.def(
        "contains", [](const Params& pr, std::array<double, 3> x) { return domain::omega3_contains(pr, to_point(x)); },
        py::arg("params"), py::arg("x"));
    m.def(
        "classify",
        [](const Params& pr, std::array<double, 3> x) { return std::string(to_string(domain::classify(pr, to_point(x)))); },
        py::arg("params"), py::arg("x"));
    m.def(
        "solve_leaf",
        [](const Params& pr, std::array<double, 3> x) {
            const auto leaf = bellman::solve_leaf(pr, to_point(x));
            py::dict d;
            d["region"] = std::string(to_string(leaf.region));
            d["u"] = leaf.u;
            d["bracket"] = py::make_tuple(leaf.bracket.first, leaf.bracket.second);
            return d;
        },
        py::arg("params"), py::arg("x"));
    m.def(
        "eval", [](const Params& pr, std::array<double, 3> x) { return bellman::eval(pr, to_point(x)); },
        py::arg("params"), py::arg("x"));
    m.def(
        "gradient", [](const Params& pr, std::array<double, 3> x) { return bellman::gradient(pr, to_point(x)); },
        py::arg("params"), py::arg("x"));
    m.def(
        "hessian", [](const Params& pr, std::array<double, 3> x) { return bellman::hessian(pr, to_point(x)); },
        py::arg("params"), py::arg("x"));

    py::class_<testfn::PiecewiseFn>(m, "PiecewiseFn")
        .def_property_readonly("lo", &testfn::PiecewiseFn::lo)
        .def_property_readonly("hi", &testfn::PiecewiseFn::hi)
        .def_property_readonly("piece_count", [](const testfn::PiecewiseFn& f) { return f.pieces().size(); })
        .def("__call__", &testfn::PiecewiseFn::operator())
        .def("moment", [](const testfn::PiecewiseFn& f, double q) { return testfn::moments(f, q); }, py::arg("q"))
        .def("mean", [](const testfn::PiecewiseFn& f) { return testfn::mean(f); })
        .def("second_moment", [](const testfn::PiecewiseFn& f) { return testfn::second_moment(f); })
        .def("bmo_norm", [](const testfn::PiecewiseFn& f, int levels) { return testfn::bmo_norm(f, levels); },
             py::arg("levels") = 12)
        .def("to_csv", [](const testfn::PiecewiseFn& f) { return testfn::to_csv(f); })
        .def_static("from_csv", [](const std::string& text) {
            std::istringstream in(text);
            return testfn::from_csv(in);
        });

    m.def("optimizer_uplus", &testfn::optimizer_uplus, py::arg("eps"), py::arg("u"));
    m.def("optimizer_uminus", &testfn::optimizer_uminus, py::arg("eps"), py::arg("u"));
    m.def("optimizer_phi0", &testfn::optimizer_phi0);
    m.def("random_step_fn", &testfn::random_step_fn, py::arg("seed"), py::arg("cells"), py::arg("eps"));

    m.def("sharp_constant", &verify::sharp_constant, py::arg("p"), py::arg("r"));
    m.def(
        "extract_constant",
        [](const Params& pr, int density) {
            const auto scan = verify::extract_constant(pr, density);
            py::dict d;
            d["c_observed"] = scan.c_observed;
            d["ratio"] = scan.ratio;
            d["argmax"] = py::make_tuple(scan.argmax.x1, scan.argmax.x2, scan.argmax.x3);
            return d;
        },
        py::arg("params"), py::arg("density"));
    m.def("_run_suite", &run_suite, py::arg("suite"), py::arg("params"), py::arg("samples") = 1000,
          py::arg("seed") = 7, py::arg("cells") = 64, py::arg("levels") = 12);
}
