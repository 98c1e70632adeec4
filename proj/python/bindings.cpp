#include "rsfem/cq.hpp"
#include "rsfem/errors.hpp"
#include "rsfem/fem.hpp"
#include "rsfem/harness.hpp"
#include "rsfem/oracle.hpp"
#include "rsfem/stepper.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace rsfem;

namespace {

ExperimentConfig config_from(const py::dict& settings)
{
    ExperimentConfig cfg;
    for (const auto& [key, value] : settings) {
        std::string text;
        if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
            for (const auto& item : value) {
                text += (text.empty() ? "" : ",") + py::str(item).cast<std::string>();
            }
        } else if (py::isinstance<py::bool_>(value)) {
            text = value.cast<bool>() ? "true" : "false";
        } else {
            text = py::str(value).cast<std::string>();
        }
        apply_setting(cfg, key.cast<std::string>(), text);
    }
    return cfg;
}

py::dict row_dict(const ReportRow& r)
{
    py::dict d;
    d["example"] = r.example;
    d["scheme"] = r.scheme;
    d["alpha"] = r.alpha;
    d["h"] = r.h;
    d["tau"] = r.tau;
    d["t"] = r.t;
    d["l2_error"] = r.l2_error;
    d["h1_error"] = r.h1_error;
    d["l2_raw"] = r.l2_raw;
    d["h1_raw"] = r.h1_raw;
    d["rate"] = r.rate ? py::cast(*r.rate) : py::none();
    d["h1_rate"] = r.h1_rate ? py::cast(*r.h1_rate) : py::none();
    d["family"] = r.family;
    return d;
}

py::tuple triplets(const CsrMatrix& A)
{
    std::vector<std::size_t> rows;
    std::vector<int> cols(A.cols().begin(), A.cols().end());
    std::vector<double> vals(A.values().begin(), A.values().end());
    const auto rp = A.row_ptr();
    for (std::size_t i = 0; i < A.size(); ++i) {
        rows.insert(rows.end(), rp[i + 1] - rp[i], i);
    }
    return py::make_tuple(rows, cols, vals);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Finite element and convolution quadrature solver for the fractional Rayleigh-Stokes problem";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def(
        "cq_weights",
        [](const std::string& scheme, double mu, double tau, std::size_t N) {
            return weights(parse_scheme(scheme), mu, tau, N).w;
        },
        py::arg("scheme"), py::arg("mu"), py::arg("tau"), py::arg("N"));

    m.def(
        "scalar_recurrence",
        [](const std::string& scheme, double alpha, double gamma, double tau, int N, double lam, bool origin) {
            SchemeConfig c;
            c.scheme = parse_scheme(scheme);
            c.alpha = alpha;
            c.gamma = gamma;
            c.tau = tau;
            c.N = N;
            c.include_history_origin = origin;
            return scalar_recurrence(c, 1.0, lam, 1.0);
        },
        py::arg("scheme"), py::arg("alpha"), py::arg("gamma"), py::arg("tau"), py::arg("N"), py::arg("lam"),
        py::arg("include_history_origin") = false,
        "Iterates U^0..U^N of one eigenmode with eigenvalue lam, starting from 1.");

    m.def(
        "modal_factor",
        [](double lam, double alpha, double gamma, double t) {
            return uj_eval(KernelDensity{lam, gamma, alpha}, t);
        },
        py::arg("lam"), py::arg("alpha"), py::arg("gamma"), py::arg("t"));
    m.def("limit_alpha1", &limit_alpha1, py::arg("lam"), py::arg("gamma"), py::arg("t"));
    m.def("limit_alpha1_from_below", &limit_alpha1_from_below, py::arg("lam"), py::arg("gamma"), py::arg("t"));

    m.def(
        "eigenvalues",
        [](const std::string& domain, std::size_t J) {
            const Domain d = domain == "square" ? Domain::Square : Domain::Interval;
            std::vector<double> out;
            for (const Mode& mode : eigenbasis(d, J)) {
                out.push_back(mode.lambda);
            }
            return out;
        },
        py::arg("domain"), py::arg("J"));

    m.def(
        "datum_coefficient",
        [](const std::string& example, int j, int k) {
            return datum_coefficient(example_datum(parse_example(example)), j, k);
        },
        py::arg("example"), py::arg("j"), py::arg("k") = 0);

    m.def(
        "mesh_info",
        [](int dim, int K) {
            const Mesh mesh = dim == 2 ? build_square_mesh(K) : build_interval_mesh(K);
            py::dict d;
            d["nodes"] = mesh.num_nodes();
            d["elements"] = mesh.num_elements();
            d["boundary_nodes"] = mesh.num_boundary_nodes();
            d["h"] = mesh.h;
            return d;
        },
        py::arg("dim"), py::arg("K"));

    m.def(
        "assemble",
        [](int dim, int K) {
            const FemSpace s = assemble(dim == 2 ? build_square_mesh(K) : build_interval_mesh(K));
            return py::make_tuple(s.n_dof(), triplets(s.mass), triplets(s.stiffness));
        },
        py::arg("dim"), py::arg("K"),
        "Interior mass and stiffness matrices as (n, (rows, cols, vals), (rows, cols, vals)).");

    m.def(
        "run_experiment",
        [](const py::dict& settings) {
            const ErrorReport rep = run_experiment(config_from(settings));
            py::list rows;
            for (const auto& r : rep.rows) {
                rows.append(row_dict(r));
            }
            py::list fits;
            for (const auto& f : rep.fits) {
                py::dict d;
                d["family"] = f.family;
                d["alpha"] = f.alpha;
                d["t"] = f.t;
                d["varied"] = f.varied;
                d["l2_rate"] = f.l2_rate;
                d["h1_rate"] = f.h1_rate;
                fits.append(d);
            }
            return py::make_tuple(rows, fits);
        },
        py::arg("settings"),
        "Runs a convergence study. Keys are the command-line flag names without dashes; "
        "returns (rows, fitted_rates).");

    m.def(
        "format_report",
        [](const py::dict& settings, const std::string& format) {
            const ErrorReport rep = run_experiment(config_from(settings));
            std::ostringstream os;
            emit_report(rep, parse_format(format), os);
            return os.str();
        },
        py::arg("settings"), py::arg("format") = "csv");
}
