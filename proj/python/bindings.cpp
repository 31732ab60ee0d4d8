#include "hyperbound/matching.hpp"
#include "hyperbound/numerov.hpp"
#include "hyperbound/potential.hpp"
#include "hyperbound/qbuilder.hpp"
#include "hyperbound/series.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hyperbound;

PYBIND11_MODULE(_hyperbound, m) {
    m.doc() = "bound states of short-range hyperbolic potentials via partitioned power series";

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def(py::init<int, std::vector<double>, std::vector<double>>(), py::arg("order"),
             py::arg("f"), py::arg("g"),
             "f holds f_2..f_M, g holds g_1..g_M (explicit zeros for absent couplings)")
        .def_static("poschl_teller", &PotentialSpec::poschl_teller, py::arg("f2"))
        .def_static("antisymmetric_scarf", &PotentialSpec::antisymmetric_scarf, py::arg("g2"))
        .def_property_readonly("order", &PotentialSpec::order)
        .def("f", &PotentialSpec::f, py::arg("m"))
        .def("g", &PotentialSpec::g, py::arg("n"))
        .def("is_symmetric", &PotentialSpec::is_symmetric)
        .def("is_antisymmetric", &PotentialSpec::is_antisymmetric)
        .def("asymptotically_asymmetric", &PotentialSpec::asymptotically_asymmetric)
        .def("max_depth", &PotentialSpec::max_depth)
        .def("__call__", [](const PotentialSpec& s, double x) { return evaluate_potential(s, x); });

    m.def("evaluate_potential", &evaluate_potential, py::arg("spec"), py::arg("x"));
    m.def(
        "parity_split",
        [](const PotentialSpec& s) {
            const ParitySplit ps = parity_split(s);
            return py::make_tuple(ps.symmetric, ps.antisymmetric);
        },
        py::arg("spec"));
    m.def("phat_conjugate", &phat_conjugate, py::arg("spec"));
    m.def("partition_dimension", &partition_dimension, py::arg("spec"), py::arg("a") = 0.0);

    m.def(
        "qmatrix_window",
        [](const PotentialSpec& spec, double a, double kappa, int seed_p, std::size_t size) {
            const BasisIndex seed = seed_p == 0 ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0};
            QMatrix q = build_q(spec, BasisParams{a, kappa}, seed);
            return q.dense_window(size);
        },
        py::arg("spec"), py::arg("a"), py::arg("kappa"), py::arg("seed_p") = 0,
        py::arg("size") = 8, "dense leading window of the quasi-Hamiltonian Q(z)");

    py::class_<MatchResult>(m, "MatchResult")
        .def_readonly("kappa", &MatchResult::kappa)
        .def_readonly("energy", &MatchResult::energy)
        .def_readonly("mixing_M", &MatchResult::mixing_M)
        .def_readonly("mixing_N", &MatchResult::mixing_N)
        .def_readonly("epsilon_used", &MatchResult::epsilon_used)
        .def_readonly("residual", &MatchResult::residual)
        .def_readonly("extrapolation_spread", &MatchResult::extrapolation_spread)
        .def_readonly("near_threshold", &MatchResult::near_threshold)
        .def("__repr__", [](const MatchResult& r) {
            return "MatchResult(kappa=" + std::to_string(r.kappa) +
                   ", energy=" + std::to_string(r.energy) + ")";
        });

    m.def(
        "find_spectrum",
        [](const PotentialSpec& spec, double a, double kappa_min, double kappa_max,
           std::vector<double> epsilons, std::size_t grid_points, double tol) {
            SpectrumConfig cfg;
            if (!epsilons.empty()) cfg.epsilons = std::move(epsilons);
            cfg.grid_points = grid_points;
            cfg.tol = tol;
            if (kappa_max <= 0.0) kappa_max = std::sqrt(spec.max_depth()) + 1.0;
            return find_spectrum(spec, a, {kappa_min, kappa_max}, cfg);
        },
        py::arg("spec"), py::arg("a") = 0.0, py::arg("kappa_min") = 0.01,
        py::arg("kappa_max") = 0.0, py::arg("epsilons") = std::vector<double>{},
        py::arg("grid_points") = 128, py::arg("tol") = 1e-10);

    m.def("secular_determinant", &secular_determinant, py::arg("spec"), py::arg("kappa"),
          py::arg("a"), py::arg("epsilon"), py::arg("series_tol") = 1e-12,
          py::arg("max_terms") = 4000000);

    m.def(
        "wavefunction",
        [](const MatchResult& r, const PotentialSpec& spec, double a, std::vector<double> xs) {
            const auto samples = assemble_wavefunction(r, spec, a, xs);
            std::vector<double> psi, dpsi;
            psi.reserve(samples.size());
            dpsi.reserve(samples.size());
            for (const auto& s : samples) {
                psi.push_back(s.psi);
                dpsi.push_back(s.dpsi);
            }
            return py::make_tuple(psi, dpsi);
        },
        py::arg("result"), py::arg("spec"), py::arg("a"), py::arg("xs"));

    py::class_<GridConfig>(m, "GridConfig")
        .def(py::init<>())
        .def_readwrite("half_width", &GridConfig::half_width)
        .def_readwrite("points", &GridConfig::points)
        .def_readwrite("match_point", &GridConfig::match_point);

    m.def("numerov_spectrum", &numerov_spectrum, py::arg("spec"), py::arg("grid") = GridConfig{},
          py::arg("max_levels") = 8);
    m.def(
        "numerov_eigenfunction",
        [](const PotentialSpec& spec, const GridConfig& grid, std::size_t level) {
            const GridFunction f = numerov_eigenfunction(spec, grid, level);
            return py::make_tuple(f.x, f.psi);
        },
        py::arg("spec"), py::arg("grid") = GridConfig{}, py::arg("level") = 0);

    m.def(
        "detect_termination",
        [](const PotentialSpec& spec, int seed_p, std::vector<double> a_values, double kappa_lo,
           double kappa_hi, std::size_t samples, std::size_t max_block) {
            const BasisIndex seed = seed_p == 0 ? BasisIndex{0, 0, 1} : BasisIndex{0, 1, 0};
            const auto pts =
                detect_termination(spec, seed, a_values, kappa_lo, kappa_hi, samples, max_block);
            py::list out;
            for (const auto& p : pts)
                out.append(py::make_tuple(p.a, p.kappa, p.block, p.residual));
            return out;
        },
        py::arg("spec"), py::arg("seed_p"), py::arg("a_values"), py::arg("kappa_lo"),
        py::arg("kappa_hi"), py::arg("samples") = 256, py::arg("max_block") = 8);

#ifdef HYPERBOUND_VERSION
    m.attr("__version__") = HYPERBOUND_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
