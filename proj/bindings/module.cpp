#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flp/distribution.hpp"
#include "flp/experiments.hpp"
#include "flp/kfacility.hpp"
#include "flp/projection.hpp"
#include "flp/transport.hpp"

namespace py = pybind11;
using namespace flp;

namespace {

// Value wrapper around the shared-to-const distribution handle, since
// pybind11 holders cannot be shared_ptr<const T>.
struct Dist {
    DistPtr p;
};

}  // namespace

PYBIND11_MODULE(_flp, m) {
    m.doc() = "Percentile mechanisms for k-facility location on the line";

    py::class_<Dist>(m, "Distribution")
        .def_property_readonly("kind", [](const Dist& d) { return d.p->kind(); })
        .def("cdf", [](const Dist& d, double t) { return d.p->cdf(t); },
             py::arg("t"))
        .def("quantile", [](const Dist& d, double q) { return d.p->quantile(q); },
             py::arg("q"))
        .def("density", [](const Dist& d, double t) { return d.p->density(t); },
             py::arg("t"))
        .def("sample",
             [](const Dist& d, std::size_t n, std::uint64_t seed) {
                 return d.p->sample(n, seed);
             },
             py::arg("n"), py::arg("seed"));

    m.def("uniform",
          [](double lo, double hi) { return Dist{make_uniform(lo, hi)}; },
          py::arg("lo"), py::arg("hi"));
    m.def("gaussian",
          [](double mean, double std) { return Dist{make_gaussian(mean, std)}; },
          py::arg("mean"), py::arg("std"));
    m.def("exponential",
          [](double rate) { return Dist{make_exponential(rate)}; },
          py::arg("rate"));
    m.def("affine",
          [](const Dist& base, double scale, double shift) {
              return Dist{affine_pushforward(base.p, scale, shift)};
          },
          py::arg("base"), py::arg("scale"), py::arg("shift"));
    m.def("empirical",
          [](std::vector<double> values) {
              return Dist{make_empirical(std::move(values))};
          },
          py::arg("values"));

    py::class_<ProjectionResult>(m, "ProjectionResult")
        .def_readonly("y", &ProjectionResult::y)
        .def_readonly("v", &ProjectionResult::v)
        .def_readonly("weights", &ProjectionResult::weights)
        .def_readonly("cost", &ProjectionResult::cost)
        .def_readonly("residual", &ProjectionResult::residual)
        .def_readonly("iterations", &ProjectionResult::iterations);

    m.def("project",
          [](const Dist& mu, int k) { return solve_projection(*mu.p, k); },
          py::arg("mu"), py::arg("k"));
    m.def("optimal_vector",
          [](const Dist& mu, int k) { return optimal_vector(*mu.p, k); },
          py::arg("mu"), py::arg("k"));
    m.def("limit_ratio",
          [](const Dist& mu, const std::vector<double>& v, int k) {
              return limit_ratio(*mu.p, v, k);
          },
          py::arg("mu"), py::arg("v"), py::arg("k"));

    m.def("percentile_mechanism",
          [](std::vector<double> x, std::vector<double> v) {
              return percentile_mechanism(SampleProfile::from_raw(std::move(x)),
                                          PercentileVector(std::move(v)))
                  .facilities;
          },
          py::arg("positions"), py::arg("v"));
    m.def("social_cost",
          [](std::vector<double> x, const std::vector<double>& y) {
              return mechanism_cost(
                  SampleProfile::from_raw(std::move(x)).positions(), y);
          },
          py::arg("positions"), py::arg("facilities"));
    m.def("optimal_facilities",
          [](std::vector<double> x, int k) {
              auto [placement, cost] =
                  optimal_facilities(SampleProfile::from_raw(std::move(x)), k);
              return py::make_tuple(placement.facilities, cost);
          },
          py::arg("positions"), py::arg("k"));

    m.def("w1_empirical",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              return w1_empirical(a, b);
          },
          py::arg("a"), py::arg("b"));
    m.def("w1",
          [](const Dist& mu, const Dist& nu) {
              return w1_continuous(*mu.p, *nu.p);
          },
          py::arg("mu"), py::arg("nu"));
    m.def("w_infinity",
          [](const Dist& mu, const Dist& nu) {
              return w_infinity(*mu.p, *nu.p);
          },
          py::arg("mu"), py::arg("nu"));

    py::class_<RatioEstimate>(m, "RatioEstimate")
        .def_readonly("ratio", &RatioEstimate::ratio)
        .def_readonly("se_ratio", &RatioEstimate::se_ratio)
        .def_readonly("mean_mech_cost", &RatioEstimate::mean_mech_cost)
        .def_readonly("mean_opt_cost", &RatioEstimate::mean_opt_cost)
        .def_readonly("trials", &RatioEstimate::trials)
        .def_readonly("n", &RatioEstimate::n)
        .def_readonly("seed", &RatioEstimate::seed);
    m.def("estimate_bar",
          [](const Dist& mu, const std::vector<double>& v, int k, int n,
             int trials, std::uint64_t seed, int threads) {
              return estimate_bar(*mu.p, v, k, n, trials, seed, threads);
          },
          py::arg("mu"), py::arg("v"), py::arg("k"), py::arg("n"),
          py::arg("trials"), py::arg("seed"), py::arg("threads") = 0);
}
