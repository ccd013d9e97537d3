#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bll/commands.hpp"
#include "bll/diagnostics.hpp"
#include "bll/errors.hpp"
#include "bll/experiments.hpp"
#include "bll/init.hpp"
#include "bll/integrator.hpp"
#include "bll/io.hpp"
#include "bll/norms.hpp"
#include "bll/spectral_ops.hpp"

namespace py = pybind11;
using namespace bll;

namespace {

std::vector<py::ssize_t> shape_of(const Grid& g) { return std::vector<py::ssize_t>(g.dim(), g.points()); }

py::array_t<double> to_numpy(const ScalarField& f) {
    py::array_t<double> a(shape_of(*f.grid));
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

ScalarField from_numpy(GridPtr g, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != g->dim()) throw ValidationError("array rank must equal the grid dimension");
    for (int i = 0; i < g->dim(); ++i)
        if (a.shape(i) != g->points()) throw ValidationError("array shape must be points^dim");
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict report_dict(const EnergyReport& r) {
    py::dict d;
    d["time"] = r.time;
    d["l2_p"] = r.l2_p;
    d["l2_v"] = r.l2_v;
    d["h1"] = r.h1;
    d["h2"] = r.h2;
    d["h3"] = r.h3;
    d["curl"] = r.curl;
    d["min_density"] = r.min_density;
    d["entropy"] = r.entropy;
    if (r.dim == 3) {
        d["kappa_t"] = r.kappa_t;
        d["N1_t"] = r.N1_t;
        d["N2_t"] = r.N2_t;
        d["N3_t"] = r.N3_t;
    } else {
        d["E3"] = r.E3;
        d["D3"] = r.D3;
        d["E4"] = r.E4;
        d["D4"] = r.D4;
        d["E5"] = r.E5;
        d["D5"] = r.D5;
    }
    d["lp4_p"] = r.lp4_p;
    d["lp4_v"] = r.lp4_v;
    return d;
}

}  // namespace

PYBIND11_MODULE(_bll, m) {
    m.doc() = "Pseudo-spectral solver for the hyperbolic-parabolic balance laws";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<PositivityViolation>(m, "PositivityViolation", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ChecksumMismatch>(m, "ChecksumMismatch", base.ptr());
    py::register_exception<VersionMismatch>(m, "VersionMismatch", base.ptr());
    py::register_exception<DomainTooSmall>(m, "DomainTooSmall", base.ptr());
    py::register_exception<OverflowGuard>(m, "OverflowGuard", base.ptr());
    py::register_exception<CurlNotZero>(m, "CurlNotZero", base.ptr());
    py::register_exception<NonzeroMean>(m, "NonzeroMean", base.ptr());

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("points", &Grid::points)
        .def_property_readonly("length", &Grid::length)
        .def_property_readonly("spacing", &Grid::spacing)
        .def("__repr__", [](const Grid& g) {
            std::ostringstream o;
            o << "Grid(dim=" << g.dim() << ", points=" << g.points() << ", length=" << g.length() << ")";
            return o.str();
        });
    m.def("make_grid", [](int dim, int points, double length) { return std::const_pointer_cast<Grid>(make_grid(dim, points, length)); },
          py::arg("dim"), py::arg("points"), py::arg("length"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double epsilon, double pbar, int dim) {
                 ModelParams p;
                 p.epsilon = epsilon;
                 p.pbar = pbar;
                 p.dim = dim;
                 p.validate();
                 return p;
             }),
             py::arg("epsilon") = 0.0, py::arg("pbar") = 1.0, py::arg("dim") = 1)
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("pbar", &ModelParams::pbar)
        .def_readwrite("chi", &ModelParams::chi)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("diff", &ModelParams::diff)
        .def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("dim", &ModelParams::dim)
        .def("validate", &ModelParams::validate);

    py::enum_<Scheme>(m, "Scheme").value("CNAB2", Scheme::CNAB2).value("IMEXEuler", Scheme::IMEXEuler);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init([](Scheme scheme, std::optional<double> dt, double t_end, int report_every, double cfl_safety) {
                 StepperConfig c;
                 c.scheme = scheme;
                 c.dt = dt;
                 c.t_end = t_end;
                 c.report_every = report_every;
                 c.cfl_safety = cfl_safety;
                 c.validate();
                 return c;
             }),
             py::arg("scheme") = Scheme::CNAB2, py::arg("dt") = py::none(), py::arg("t_end") = 1.0,
             py::arg("report_every") = 1, py::arg("cfl_safety") = 0.4)
        .def_readwrite("scheme", &StepperConfig::scheme)
        .def_readwrite("dt", &StepperConfig::dt)
        .def_readwrite("t_end", &StepperConfig::t_end)
        .def_readwrite("report_every", &StepperConfig::report_every)
        .def_readwrite("cfl_safety", &StepperConfig::cfl_safety)
        .def_readwrite("positivity_floor", &StepperConfig::positivity_floor);

    py::class_<State>(m, "State")
        .def(py::init([](std::shared_ptr<Grid> g, py::array_t<double> p, std::vector<py::array_t<double>> v,
                         double time) {
                 std::vector<ScalarField> comps;
                 for (auto& c : v) comps.push_back(from_numpy(g, c));
                 return State(from_numpy(g, p), VectorField(std::move(comps)), time);
             }),
             py::arg("grid"), py::arg("p"), py::arg("v"), py::arg("time") = 0.0)
        .def_property_readonly("grid", [](const State& s) { return std::const_pointer_cast<Grid>(s.grid()); })
        .def_property_readonly("p", [](const State& s) { return to_numpy(s.p); })
        .def_property_readonly("v", [](const State& s) {
            std::vector<py::array_t<double>> out;
            for (const auto& c : s.v.components) out.push_back(to_numpy(c));
            return out;
        })
        .def_readwrite("time", &State::time)
        .def("min_density", &State::min_density);

    m.def("init_manufactured", [](std::shared_ptr<Grid> g, std::uint64_t seed, double amplitude, double pbar) {
        return init_manufactured(g, seed, amplitude, pbar);
    }, py::arg("grid"), py::arg("seed"), py::arg("amplitude"), py::arg("pbar") = 1.0);
    m.def("init_appendix_3d", [](int n, double B, std::shared_ptr<Grid> g) { return init_appendix_3d(n, B, g); },
          py::arg("n"), py::arg("B"), py::arg("grid"));
    m.def("init_appendix_2d",
          [](int n, double A, std::shared_ptr<Grid> g, double f_scale) { return init_appendix_2d(n, A, f_scale, g); },
          py::arg("n"), py::arg("A"), py::arg("grid"), py::arg("f_scale") = kDefaultFScale);

    m.def("norm_report", [](const State& s, const ModelParams& p) { return report_dict(norm_report(s, p)); });
    m.def("curl_norm", [](const State& s) { return curl_norm(s.v); });
    m.def("cfl_dt", &cfl_dt, py::arg("state"), py::arg("params"), py::arg("safety") = 0.4);
    m.def("step", &step, py::arg("state"), py::arg("dt"), py::arg("params"), py::arg("config") = StepperConfig{});

    m.def("run", [](const State& s0, const ModelParams& p, const StepperConfig& c) {
        RunOptions o;
        o.store_states = true;
        Trajectory t;
        {
            py::gil_scoped_release release;
            t = run(s0, p, c, {}, o);
        }
        py::list reports;
        for (const auto& smp : t.samples) reports.append(report_dict(smp.report));
        return py::make_tuple(t.states.back(), reports, t.dt, t.steps);
    }, py::arg("state"), py::arg("params"), py::arg("config"),
       "Integrates and returns (final_state, reports, dt, steps).");

    m.def("mms_order_experiment", [](Scheme scheme, int levels) {
        MmsOptions o;
        o.levels = levels;
        MmsResult r = mms_order_experiment(scheme, o);
        py::dict d;
        d["dts"] = r.dts;
        d["time_errors"] = r.time_errors;
        d["time_order"] = r.time_order;
        d["space_errors"] = r.space_errors;
        d["space_ratio"] = r.space_ratio;
        d["zero_forcing_error"] = r.zero_forcing_error;
        return d;
    }, py::arg("scheme") = Scheme::CNAB2, py::arg("levels") = 4);

    m.def("diffusion_limit_sweep", [](const State& s, const ModelParams& p, std::vector<double> eps, double t_probe,
                                      const StepperConfig& c) {
        SweepResult r = diffusion_limit_sweep(s, p, std::move(eps), t_probe, c);
        py::dict d;
        d["epsilons"] = r.epsilons;
        d["diff_h1_sq"] = r.diff_h1_sq;
        d["diff_lap_sq"] = r.diff_lap_sq;
        d["slope_h1"] = r.slope_h1;
        d["slope_lap"] = r.slope_lap;
        d["fitted_prefactors"] = r.fitted_prefactors;
        return d;
    }, py::arg("state"), py::arg("params"), py::arg("epsilons"), py::arg("t_probe"), py::arg("config") = StepperConfig{});

    m.def("appendix_scaling_experiment", [](const std::string& family, std::vector<int> n_list, double level,
                                            int points, double length_factor) {
        ModelParams p;
        p.pbar = level;
        GridPolicy pol;
        pol.points = points;
        pol.length_factor = length_factor;
        Family f;
        if (family == "appendix3d") f = Family::Appendix3D;
        else if (family == "appendix2d") f = Family::Appendix2D;
        else throw ValidationError("family must be appendix3d or appendix2d");
        ScalingTable t = appendix_scaling_experiment(f, n_list, p, pol);
        py::dict slopes;
        for (const auto& [k, fit] : t.exponents) slopes[py::str(k)] = fit.slope;
        py::dict d;
        d["n_list"] = t.n_list;
        d["values"] = t.values;
        d["slopes"] = slopes;
        d["errors"] = t.errors;
        return d;
    }, py::arg("family"), py::arg("n_list"), py::arg("level") = 1.0, py::arg("points") = 0,
       py::arg("length_factor") = 0.0);

    m.def("verify_suite", [](const State& s, const ModelParams& p, const StepperConfig& c) {
        py::list out;
        for (const auto& r : verify_suite(s, p, c)) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    });

    m.def("load_config_json", [](const std::string& path) { return config_to_json(load_config(path)); },
          "Validates a config file and returns it with defaults filled in, as JSON text.");
    m.def("initial_state_from_config", [](const std::string& path) { return make_initial_state(load_config(path)); });
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
