#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acpd/cpd_baseline.hpp"
#include "acpd/engine.hpp"
#include "acpd/fit.hpp"
#include "acpd/normalize.hpp"
#include "acpd/synth.hpp"

namespace py = pybind11;
using namespace acpd;

namespace {

py::dict trace_to_dict(const RegistrationTrace& trace) {
    py::list rows;
    for (const IterationRecord& it : trace.iterations) {
        py::dict row;
        row["t"] = it.t;
        row["q_raw"] = it.q_raw;
        row["q_used"] = it.q_used;
        row["sigma2"] = it.sigma2;
        row["e_soft"] = it.e_soft;
        if (it.external_rmse.has_value()) row["external_rmse"] = *it.external_rmse;
        row["elapsed_s"] = it.elapsed_s;
        rows.append(row);
    }
    py::dict out;
    out["iterations"] = rows;
    out["sigma2_init"] = trace.sigma2_init;
    out["e_soft_init"] = trace.e_soft_init;
    if (trace.external_rmse_init.has_value()) out["external_rmse_init"] = *trace.external_rmse_init;
    out["best_score"] = trace.best_score;
    out["best_iteration"] = trace.best_iteration;
    out["stop_reason"] = std::string(to_string(trace.stop_reason));
    return out;
}

// Full pipeline on raw coordinates: shared normalization, registration, and
// denormalized output, mirroring the CLI register subcommand.
py::dict register_arrays(const Matrix& fixed, const Matrix& moving, const std::string& method,
                         int t_max, int q_max, double w, double tol, bool fixed_order,
                         bool ordered, double lambda, double beta) {
    auto [nf, nm, transform] = normalize_pair(PointSet(fixed), PointSet(moving));
    RegistrationResult result;
    if (method == "analytic-cpd") {
        EngineConfig cfg;
        cfg.t_max = t_max;
        cfg.q_max = q_max;
        cfg.w = w;
        cfg.tol = tol;
        cfg.fixed_order = fixed_order;
        cfg.record_external_rmse = ordered;
        result = register_points(nf, nm, cfg);
    } else if (method == "cpd") {
        CpdConfig cfg;
        cfg.max_iters = t_max;
        cfg.w = w;
        cfg.tol = tol;
        cfg.lambda = lambda;
        cfg.beta = beta;
        cfg.record_external_rmse = ordered;
        result = cpd_register(nf, nm, cfg);
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    py::dict out;
    out["registered"] = denormalize(result.best, transform).coords;
    out["final_rmse"] = ordered ? rmse(nf, result.best) : result.trace.best_score;
    if (ordered) out["initial_rmse"] = rmse(nf, nm);
    out["trace"] = trace_to_dict(result.trace);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Non-rigid point-set registration with analytic-map M-steps";

    m.def("monomial_count", &monomial_count, py::arg("dim"), py::arg("degree"));
    m.def("basis_size", &basis_size, py::arg("dim"), py::arg("order"));
    m.def("param_count", &param_count, py::arg("dim"), py::arg("order"));
    m.def(
        "eval_basis",
        [](const Vector& y, const Vector& center, int order) {
            return basis_layout(static_cast<int>(y.size()), order).eval(y, center);
        },
        py::arg("y"), py::arg("center"), py::arg("order"));

    py::class_<AnalyticMap>(m, "AnalyticMap")
        .def_property_readonly("dim", &AnalyticMap::dim)
        .def_property_readonly("order", &AnalyticMap::order)
        .def_property_readonly("center", [](const AnalyticMap& a) { return a.center(); })
        .def_property_readonly("coefficients",
                               [](const AnalyticMap& a) { return a.coefficients(); })
        .def("__call__",
             [](const AnalyticMap& a, const Matrix& pts) { return a.apply(PointSet(pts)).coords; })
        .def("as_affine", &AnalyticMap::as_affine)
        .def_static(
            "identity",
            [](int dim, int order, const Vector& center) {
                return AnalyticMap::identity(dim, order, center);
            },
            py::arg("dim"), py::arg("order"), py::arg("center"))
        .def_static(
            "from_affine",
            [](const Matrix& linear, const Vector& offset, const Vector& center) {
                return AnalyticMap::from_affine(linear, offset, center);
            },
            py::arg("linear"), py::arg("offset"), py::arg("center"));

    m.def(
        "normalize_pair",
        [](const Matrix& fixed, const Matrix& moving) {
            auto [nf, nm, t] = normalize_pair(PointSet(fixed), PointSet(moving));
            return py::make_tuple(nf.coords, nm.coords, t.center, t.scale);
        },
        py::arg("fixed"), py::arg("moving"));
    m.def(
        "rmse", [](const Matrix& a, const Matrix& b) { return rmse(PointSet(a), PointSet(b)); },
        py::arg("a"), py::arg("b"));

    m.def(
        "weighted_fit",
        [](const Matrix& sources, const Matrix& targets, const Vector& weights,
           const Vector& center, int order) {
            WeightedFitProblem p;
            p.sources = sources;
            p.targets = targets;
            p.weights = weights;
            p.center = center;
            p.order = order;
            return weighted_fit(p);
        },
        py::arg("sources"), py::arg("targets"), py::arg("weights"), py::arg("center"),
        py::arg("order"));
    m.def("feasible_order", &feasible_order, py::arg("m_s"), py::arg("dim"), py::arg("q_raw"));

    m.def(
        "build_schedule",
        [](int max_order, int t_max) {
            const DegreeSchedule s = build_schedule(max_order, t_max);
            return py::make_tuple(s.stage_lengths, s.per_iteration);
        },
        py::arg("max_order"), py::arg("t_max"));

    m.def(
        "compute_posterior",
        [](const Matrix& fixed, const Matrix& moving, double sigma2, double w, double eps_rho) {
            const PosteriorStats stats =
                compute_posterior(PointSet(fixed), PointSet(moving), sigma2, w, eps_rho);
            py::dict out;
            out["P"] = stats.P;
            out["rho"] = stats.rho;
            out["eta"] = stats.eta;
            out["SX"] = stats.SX;
            out["NP"] = stats.NP;
            out["active"] = stats.active;
            return out;
        },
        py::arg("fixed"), py::arg("moving"), py::arg("sigma2"), py::arg("w") = 0.1,
        py::arg("eps_rho") = 1e-12);

    m.def("register", &register_arrays, py::arg("fixed"), py::arg("moving"),
          py::arg("method") = "analytic-cpd", py::arg("t_max") = 55, py::arg("q_max") = 10,
          py::arg("w") = 0.1, py::arg("tol") = 1e-8, py::arg("fixed_order") = false,
          py::arg("ordered") = true, py::arg("lambda_") = 2.0, py::arg("beta") = 2.0,
          "Normalize, register, and denormalize a fixed/moving pair.");

    m.def(
        "sample_shape",
        [](const std::string& name, Index count, std::uint64_t seed) {
            return sample_shape(name, count, seed).coords;
        },
        py::arg("name"), py::arg("count"), py::arg("seed") = 42);
    m.def(
        "random_analytic_deformation",
        [](int dim, int order, double gamma0, std::uint64_t seed) {
            SynthParams params;
            params.gamma0 = gamma0;
            params.seed = seed;
            return random_analytic_deformation(dim, order, params);
        },
        py::arg("dim"), py::arg("order"), py::arg("gamma0") = 0.4, py::arg("seed") = 0);
    m.def("bump", &bump, py::arg("r"), py::arg("sigma"));

    py::class_<BumpBlendField>(m, "BumpBlendField")
        .def_readonly("linear", &BumpBlendField::linear)
        .def_readonly("translation", &BumpBlendField::translation)
        .def_readonly("q1", &BumpBlendField::q1)
        .def_readonly("q2", &BumpBlendField::q2)
        .def_readonly("c1", &BumpBlendField::c1)
        .def_readonly("c2", &BumpBlendField::c2)
        .def_readonly("sigma_bump", &BumpBlendField::sigma_bump);
    m.def(
        "make_bump_blend_field",
        [](const Matrix& model, double gamma0, double gamma_q, std::uint64_t seed) {
            SynthParams params;
            params.gamma0 = gamma0;
            params.gamma_q = gamma_q;
            params.seed = seed;
            return make_bump_blend_field(PointSet(model), params);
        },
        py::arg("model"), py::arg("gamma0") = 0.4, py::arg("gamma_q") = 0.2, py::arg("seed") = 0);
    m.def(
        "apply_bump_blend",
        [](const BumpBlendField& field, const Matrix& pts) {
            return apply_bump_blend(field, PointSet(pts)).coords;
        },
        py::arg("field"), py::arg("points"));
}
