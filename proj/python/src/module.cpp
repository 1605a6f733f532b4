#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "signfull/corevec.hpp"
#include "signfull/errors.hpp"
#include "signfull/estimators.hpp"
#include "signfull/mle.hpp"
#include "signfull/projector.hpp"
#include "signfull/simlab.hpp"
#include "signfull/variance.hpp"

namespace py = pybind11;
using namespace signfull;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw ShapeError("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Estimator estimator_arg(const std::string& name) {
    auto e = parse_estimator(name);
    if (!e) throw ConfigError("unknown estimator: " + name);
    return *e;
}

py::dict report_dict(const EstimateReport& r) {
    py::dict d;
    d["rho_hat"] = r.rho_hat;
    d["raw"] = r.raw;
    d["clamped"] = r.clamped;
    d["k"] = r.k;
    d["estimator"] = std::string(estimator_name(r.estimator));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());

    m.def("estimators", [] {
        std::vector<std::string> names;
        for (Estimator e : kAllEstimators) names.emplace_back(estimator_name(e));
        return names;
    });

    py::class_<FullSketch>(m, "FullSketch")
        .def(py::init([](const DoubleArray& v) { return FullSketch(to_vector(v)); }), py::arg("values"))
        .def_property_readonly("k", &FullSketch::k)
        .def_property_readonly("sumsq", &FullSketch::sumsq)
        .def_property_readonly("values", [](const FullSketch& s) { return to_array(s.values()); })
        .def("prefix", &FullSketch::prefix, py::arg("k"))
        .def("signs", [](const FullSketch& s) { return sign_quantize(s); })
        .def("__len__", &FullSketch::k);

    py::class_<SignSketch>(m, "SignSketch")
        .def_property_readonly("k", &SignSketch::k)
        .def_property_readonly("bits",
                               [](const SignSketch& s) {
                                   std::vector<bool> bits(s.k());
                                   for (std::size_t j = 0; j < s.k(); ++j) bits[j] = s.bit(j);
                                   return bits;
                               })
        .def("prefix", &SignSketch::prefix, py::arg("k"))
        .def("__len__", &SignSketch::k)
        .def("__eq__", [](const SignSketch& a, const SignSketch& b) { return a == b; });

    m.def(
        "project",
        [](const DoubleArray& dense, std::uint32_t k, std::uint64_t seed) {
            const auto v = to_vector(dense);
            return project(DataVector::from_dense(v), ProjectionConfig{k, seed});
        },
        py::arg("vector"), py::arg("k"), py::arg("seed"));

    m.def(
        "cosine",
        [](const DoubleArray& a, const DoubleArray& b) {
            const auto u = to_vector(a);
            const auto v = to_vector(b);
            return cosine(DataVector::from_dense(u), DataVector::from_dense(v));
        },
        py::arg("u"), py::arg("v"));

    m.def(
        "estimate",
        [](const std::string& name, const FullSketch& stored, const FullSketch& query) {
            const Estimator e = estimator_arg(name);
            if (e == Estimator::Full) return report_dict(estimate_full(stored, query));
            if (e == Estimator::FullNorm) return report_dict(estimate_full_norm(stored, query));
            if (e == Estimator::MleFull) return report_dict(to_report(mle_full(stored, query), e, query.k()));
            return report_dict(estimate_sign_store(e, sign_quantize(stored), query));
        },
        py::arg("estimator"), py::arg("stored"), py::arg("query"));

    m.def(
        "estimate_signs",
        [](const std::string& name, const SignSketch& stored, const FullSketch& query) {
            return report_dict(estimate_sign_store(estimator_arg(name), stored, query));
        },
        py::arg("estimator"), py::arg("stored"), py::arg("query"));

    m.def(
        "mle_sign_full",
        [](const DoubleArray& s) {
            const auto r = mle_sign_full(to_vector(s));
            py::dict d;
            d["rho_hat"] = r.rho_hat;
            d["at_boundary"] = r.at_boundary;
            d["iterations"] = r.iterations;
            d["score_residual"] = r.score_residual;
            return d;
        },
        py::arg("signed_values"));

    m.def(
        "variance_factor",
        [](const std::string& name, double rho) { return v_factor(estimator_arg(name), rho).value; },
        py::arg("estimator"), py::arg("rho"));

    m.def(
        "fisher_vm",
        [](double rho, std::uint64_t samples, std::uint64_t seed) {
            const auto v = fisher_vm(rho, FisherConfig{samples, seed, 1});
            return py::make_tuple(v.value, v.monte_carlo ? v.monte_carlo->std_error : 0.0);
        },
        py::arg("rho"), py::arg("samples") = 1'000'000, py::arg("seed") = 0);

    m.def(
        "sample_pair",
        [](double rho, std::uint64_t seed, std::uint64_t trial, std::uint32_t j) {
            return sample_pair(rho, seed, trial, j);
        },
        py::arg("rho"), py::arg("seed"), py::arg("trial"), py::arg("j"));

    m.def(
        "simulate",
        [](double rho, std::uint32_t k, std::uint64_t trials, std::uint64_t seed,
           const std::vector<std::string>& names, unsigned threads) {
            SimConfig cfg;
            cfg.rho = rho;
            cfg.k = k;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.threads = threads;
            for (const auto& n : names) cfg.estimators.push_back(estimator_arg(n));
            py::list rows;
            for (const auto& r : run_mse(cfg)) {
                py::dict d;
                d["estimator"] = std::string(estimator_name(r.estimator));
                d["rho"] = r.rho;
                d["k"] = r.k;
                d["bias"] = r.bias;
                d["var"] = r.variance;
                d["mse"] = r.mse;
                d["clamp_rate"] = r.clamp_rate;
                rows.append(d);
            }
            return rows;
        },
        py::arg("rho"), py::arg("k"), py::arg("trials"), py::arg("seed"), py::arg("estimators"),
        py::arg("threads") = 1);
}
