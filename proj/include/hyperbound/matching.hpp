#pragma once

#include "hyperbound/potential.hpp"
#include "hyperbound/series.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace hyperbound {

// Parity components of the two Jost-type series at offset epsilon.
//
// In the a = 0 basis the secular entries are stripped t-series over the
// coefficient families (t = sech^2 epsilon):
//   s_tilde = sum_{n>=1} h_n^(0)(0) t^n        s = sum_{n>=0} h_n^(0)(1) t^n
//   S       = sum (kappa+2n)   h_n^(1)(0) t^n  S_tilde = sum (kappa+2n+1) h_n^(1)(1) t^n
// c, c_tilde hold the companion even-value series; C_tilde, C the unstripped
// odd parts of phi^(p)'.  For a != 0 all components are direct parity splits
// of phi^(p) and phi^(p)' evaluated at +-epsilon.
struct MatchComponents {
    double s_tilde = 0.0, s = 0.0, c = 0.0, c_tilde = 0.0;
    double S = 0.0, S_tilde = 0.0, C = 0.0, C_tilde = 0.0;
    double t = 0.0;
    double epsilon = 0.0;
};

struct MatchResult {
    double kappa = 0.0;
    double energy = 0.0;   // = -kappa^2
    double mixing_M = 0.0; // weight of phi^(0)
    double mixing_N = 0.0; // weight of phi^(1) (g N in the AS notation)
    double epsilon_used = 0.0;
    double residual = 0.0;
    double extrapolation_spread = 0.0;
    bool near_threshold = false;
};

struct SpectrumConfig {
    std::vector<double> epsilons{0.05, 0.025, 0.0125}; // strictly decreasing
    std::size_t grid_points = 128;
    double tol = 1e-10;        // kappa root tolerance
    double series_tol = 1e-12;
    std::size_t max_terms = 4000000;
    unsigned threads = 0;      // 0: HYPERBOUND_THREADS or hardware limit
    bool refine_ladder = true; // append one halved rung before extrapolating
};

MatchComponents components_at(const PotentialSpec& spec, const BasisParams& params, double epsilon,
                              double series_tol = 1e-12, std::size_t max_terms = 4000000);

// det [[s_tilde, s], [S, S_tilde]] at (kappa, epsilon); continuous in kappa.
double secular_determinant(const PotentialSpec& spec, double kappa, double a, double epsilon,
                           double series_tol = 1e-12, std::size_t max_terms = 4000000);

// Scans the determinant on a kappa grid for every epsilon of the ladder,
// bisects the sign changes, extrapolates kappa(epsilon) -> kappa(0) and
// returns the roots sorted by decreasing kappa (increasing energy).
std::vector<MatchResult> find_spectrum(const PotentialSpec& spec, double a,
                                       std::pair<double, double> kappa_range,
                                       const SpectrumConfig& config = {});

struct WavefunctionSample {
    double x = 0.0;
    double psi = 0.0;
    double dpsi = 0.0;
};

std::vector<WavefunctionSample> assemble_wavefunction(const MatchResult& result,
                                                      const PotentialSpec& spec, double a,
                                                      const std::vector<double>& xs,
                                                      double series_tol = 1e-12,
                                                      std::size_t max_terms = 4000000);

} // namespace hyperbound
